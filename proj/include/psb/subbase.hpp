#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/fft.hpp"
#include "psb/prng.hpp"
#include "psb/repcount.hpp"
#include "psb/sequences.hpp"
#include "psb/singular.hpp"

namespace psb {

// Minimal h for the construction over the given ground set: 2*H0 + 1 with
// the module-appropriate H0, tightened by the transfer exponent when a
// floor-power table entry is in play.
inline int plan_min_h(const sequence_spec& spec) {
    long long base;
    if (!spec.thinned()) {
        base = 2 * h0_integer(spec.k) + 1;
    } else if (spec.k == 1 && !spec.primes) {
        base = 2 * h0_real(spec.c) + 1;
    } else {
        base = 2 * h0_integer(spec.k) + 1;
        std::optional<double> P =
            spec.primes ? working_pstar(spec.k, spec.c) : psw_threshold(spec.k, spec.c);
        if (!P) throw domain_error("no admissible transfer exponent for this (k,c)");
        const long long hp = 2 * (long long)std::ceil(0.5 / *P) + 1;
        base = std::max(base, hp);
    }
    return (int)base;
}

struct sample_plan {
    sequence_spec spec;
    reg_var_fn F;
    int h = 5;
    double lambda = 1.0;
    uint64_t x_max = 0;
    uint64_t seed = 0;

    double omega() const { return (F.kappa + 1.0) / (double)h; }
    double beta() const { return 1.0 / (spec.c_value() * spec.k); }

    void validate() const {
        spec.validate();
        if (x_max < 16) throw domain_error("sample plan requires xMax >= 16");
        if (!(lambda >= 0.0)) throw domain_error("sample plan requires lambda >= 0");
        if (h < plan_min_h(spec)) throw domain_error("h below the theorem threshold for this ground set");
        std::vector<double> grid;
        for (double x = 16.0; x <= (double)x_max; x *= 2.0) grid.push_back(x);
        if (grid.empty() || grid.back() < (double)x_max) grid.push_back((double)x_max);
        regvar_report rep = regvar_admissible(F, spec, h, grid);
        if (!rep.under_ceiling) throw domain_error("target F exceeds the admissible ceiling");
        if (!rep.grows_faster_than_log) throw domain_error("target F does not outgrow log x");
    }
};

// p(x) = min(1, lambda x^{omega-beta} psi(x)^{1/h}), the mean-field choice
// that makes sum over tuples of prod p(x_i) reproduce lambda^h F(n) times
// the analytic factor. Prime ground sets carry an extra log x to cancel the
// 1/log density the ceiling absorbs into psi.
inline double inclusion_probability(const sample_plan& plan, uint64_t x) {
    if (x < 16) throw domain_error("inclusion_probability requires x >= 16");
    const double lx = std::log((double)x);
    double psi_h = std::pow(plan.F.C, 1.0 / plan.h) *
                   std::pow(lx, plan.F.log_pow / plan.h) *
                   std::pow(std::log(lx), plan.F.loglog_pow / plan.h);
    double p = plan.lambda * std::pow((double)x, plan.omega() - plan.beta()) * psi_h;
    if (plan.spec.primes) p *= lx;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

struct prob_summary {
    double expected_size = 0.0;
    double variance_bound = 0.0; // sum p(1-p)
    double max_p = 0.0;
    uint64_t candidates = 0;
};

struct sample_result {
    std::vector<uint64_t> A;
    prob_summary probs;
    uint64_t seed = 0;
};

// Independent inclusion of each ground-set element x >= 16, with the coin for
// x derived from (seed, x) alone: the same plan reproduces the same A no
// matter how iteration is ordered or sharded.
inline sample_result sample_subbase(const sample_plan& plan) {
    plan.validate();
    sample_result res;
    res.seed = plan.seed;
    seq_detail::for_each_element(plan.spec, plan.x_max, [&](uint64_t x) {
        if (x < 16) return;
        const double p = inclusion_probability(plan, x);
        res.probs.expected_size += p;
        res.probs.variance_bound += p * (1.0 - p);
        res.probs.max_p = std::max(res.probs.max_p, p);
        res.probs.candidates += 1;
        if (keyed_unit(plan.seed, x) < p) res.A.push_back(x);
    });
    return res;
}

// Mean-field expectation of r_{A,h}: the plain h-fold convolution of the
// p-vector. Exact lambda^h scale law; the diagonal terms it overcounts are
// negligible at scale but are handled exactly by expected_rep_exact below.
inline std::vector<double> expected_rep(const sample_plan& plan, uint64_t n_max) {
    if (n_max + 1 > max_series_len) throw resource_error("expectation length exceeds budget");
    std::vector<double> p(std::min<uint64_t>(plan.x_max, n_max) + 1, 0.0);
    seq_detail::for_each_element(plan.spec, std::min(plan.x_max, n_max), [&](uint64_t x) {
        if (x < 16) return;
        p[x] = inclusion_probability(plan, x);
    });
    return self_convolve_pow(p, plan.h, n_max + 1, false);
}

namespace subbase_detail {

// Stirling subset numbers S(j,m), j up to h.
inline std::vector<std::vector<double>> stirling2(int h) {
    std::vector<std::vector<double>> S(h + 1, std::vector<double>(h + 1, 0.0));
    S[0][0] = 1.0;
    for (int j = 1; j <= h; ++j)
        for (int m = 1; m <= j; ++m) S[j][m] = S[j - 1][m - 1] + (double)m * S[j - 1][m];
    return S;
}

} // namespace subbase_detail

// Exact E[r_{A,h}](n): a repeated element contributes p once, not p^m, so the
// plain convolution needs diagonal corrections. Writing the generating
// function as exp(sum_j u^j K_j(z)) with cumulant arrays
//   K_j[j x] = sum_{m<=j} (-1)^{m+1} (m-1)! S(j,m)/j! p_x^m,
// the degree-h slice G_h follows the recurrence d G_d = sum_j (j K_j) * G_{d-j},
// and E[r] = h! G_h.
inline std::vector<double> expected_rep_exact(const sample_plan& plan, uint64_t n_max) {
    if (n_max + 1 > max_series_len) throw resource_error("expectation length exceeds budget");
    const int h = plan.h;
    std::vector<double> p(std::min<uint64_t>(plan.x_max, n_max) + 1, 0.0);
    seq_detail::for_each_element(plan.spec, std::min(plan.x_max, n_max), [&](uint64_t x) {
        if (x < 16) return;
        p[x] = inclusion_probability(plan, x);
    });
    const auto S = subbase_detail::stirling2(h);
    double factorial = 1.0;
    for (int j = 2; j <= h; ++j) factorial *= j;
    std::vector<std::vector<double>> K(h + 1);
    for (int j = 1; j <= h; ++j) {
        double jfact = 1.0;
        for (int t = 2; t <= j; ++t) jfact *= t;
        K[j].assign(n_max + 1, 0.0);
        for (uint64_t x = 1; x < p.size(); ++x) {
            if (p[x] == 0.0 || x * (uint64_t)j > n_max) continue;
            double term = 0.0, pm = 1.0, mfact = 1.0;
            for (int m = 1; m <= j; ++m) {
                pm *= p[x];
                if (m >= 2) mfact *= (m - 1);
                term += (m % 2 ? 1.0 : -1.0) * mfact * S[j][m] / jfact * pm;
            }
            K[j][x * (uint64_t)j] = term;
        }
    }
    std::vector<std::vector<double>> G(h + 1);
    G[0].assign(n_max + 1, 0.0);
    G[0][0] = 1.0;
    for (int d = 1; d <= h; ++d) {
        G[d].assign(n_max + 1, 0.0);
        for (int j = 1; j <= d; ++j) {
            std::vector<double> conv = convolve_real(K[j], G[d - j], n_max + 1);
            for (uint64_t n = 0; n <= n_max; ++n) G[d][n] += (double)j * conv[n];
        }
        for (auto& v : G[d]) v /= (double)d;
    }
    std::vector<double> out = std::move(G[h]);
    for (auto& v : out) v *= factorial;
    return out;
}

// Pooled-median calibration: Er scales monotonically in lambda (exactly
// lambda^h while no clamp is active), so bisection on the median of
// Er(n)/target(n) over the verification windows pins the free constant.
// `trials` caps the bisection passes. Deterministic throughout.
inline double calibrate_lambda(const sample_plan& plan_in,
                               const std::vector<std::pair<uint64_t, uint64_t>>& windows,
                               int trials) {
    if (trials < 3) throw domain_error("calibrate_lambda requires trials >= 3");
    if (windows.empty()) throw domain_error("calibrate_lambda requires windows");
    sample_plan plan = plan_in;
    plan.lambda = 1.0;
    plan.validate();
    const uint64_t n_max = windows.back().second;
    const bool has_series = plan.spec.k >= 2 || plan.spec.primes;
    singular_series_params sp;
    if (has_series) sp = singular_series_params(plan.spec.k, plan.h, 100, plan.spec.primes);

    auto target = [&](uint64_t n) -> double {
        double t = regvar_eval(plan.F, (double)n);
        if (has_series) {
            if (!congruence_admissible(plan.spec.k, plan.h, (long long)n)) return 0.0;
            t *= singular_series(sp, (long long)n);
        }
        return t;
    };

    auto median_ratio = [&](double lam) -> double {
        sample_plan pl = plan;
        pl.lambda = lam;
        std::vector<double> er = expected_rep(pl, n_max);
        std::vector<double> ratios;
        for (const auto& [lo, hi] : windows) {
            if (lo < (uint64_t)plan.h * 16 || lo > hi) throw domain_error("bad calibration window");
            for (uint64_t n = lo; n <= hi && n <= n_max; ++n) {
                const double t = target(n);
                if (t > 0.0) ratios.push_back(er[n] / t);
            }
        }
        if (ratios.empty()) throw domain_error("calibration windows contain no admissible n");
        auto mid = ratios.begin() + ratios.size() / 2;
        std::nth_element(ratios.begin(), mid, ratios.end());
        return *mid;
    };

    double lo = 0.05, hi = 5.0;
    const double r_lo = median_ratio(lo), r_hi = median_ratio(hi);
    if (!(r_lo <= 1.0 && r_hi >= 1.0))
        throw domain_error("no lambda in the bracket reaches the target level");
    for (int it = 0; it < trials; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (median_ratio(mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct window_stats {
    uint64_t lo = 0, hi = 0;
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

struct verify_report {
    std::vector<window_stats> per_window;
    bool global_pass = false;
};

// Ratio statistics of exact r_{A,h}(n) against target(n) per window,
// restricted to n where target > 0 (the admissible class). Pass band for
// window means is [0.5, 2].
inline verify_report verify_subbase(const std::vector<uint64_t>& A, int h,
                                    const std::function<double(uint64_t)>& target,
                                    const std::vector<std::pair<uint64_t, uint64_t>>& windows) {
    if (windows.empty()) throw domain_error("verify_subbase requires windows");
    uint64_t n_max = 0;
    for (const auto& [lo, hi] : windows) {
        if (lo > hi || lo < 1) throw domain_error("verify_subbase window is empty");
        n_max = std::max(n_max, hi);
    }
    std::vector<double> r(n_max + 1, 0.0);
    if (!A.empty()) {
        rep_vector rv = rep_function(A, h, n_max);
        r = std::move(rv.values);
    }
    verify_report rep;
    rep.global_pass = true;
    for (const auto& [lo, hi] : windows) {
        window_stats ws;
        ws.lo = lo;
        ws.hi = hi;
        double sum = 0.0;
        uint64_t cnt = 0;
        bool first = true;
        for (uint64_t n = lo; n <= hi; ++n) {
            const double t = target(n);
            if (!(t > 0.0)) continue;
            const double ratio = r[n] / t;
            sum += ratio;
            ++cnt;
            if (first) {
                ws.min_ratio = ws.max_ratio = ratio;
                first = false;
            } else {
                ws.min_ratio = std::min(ws.min_ratio, ratio);
                ws.max_ratio = std::max(ws.max_ratio, ratio);
            }
        }
        if (cnt == 0) throw domain_error("verify_subbase window has no admissible n");
        ws.mean_ratio = sum / (double)cnt;
        if (!(ws.mean_ratio >= 0.5 && ws.mean_ratio <= 2.0)) rep.global_pass = false;
        rep.per_window.push_back(ws);
    }
    return rep;
}

} // namespace psb
