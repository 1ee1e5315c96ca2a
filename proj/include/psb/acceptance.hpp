#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "psb/circle.hpp"
#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/fft.hpp"
#include "psb/prng.hpp"
#include "psb/repcount.hpp"
#include "psb/sequences.hpp"
#include "psb/singular.hpp"
#include "psb/subbase.hpp"

// End-to-end acceptance suite: eleven numbered criteria, each a finite exact
// identity or a finite-scale trend proxy with pinned tolerances. Failures are
// report rows, never exceptions; the caller decides what to do with them.

namespace psb {

struct acceptance_options {
    bool full = false;          // quick: structural/exactness subset; full: all criteria
    double fault_noise = 0.0;   // > 0 emulates a build whose rounding guard is disabled
    std::ostream* progress = nullptr;
};

struct criterion_row {
    int id = 0;
    std::string name;
    bool pass = false;
    bool soft = false;          // measured-value check demoted to report-only
    bool over_budget = false;
    std::string measured;       // deterministic value summary, no timing
    double seconds = 0.0;
    double budget = 0.0;        // <= 0: no pinned runtime budget
};

struct acceptance_report {
    std::string profile;
    std::vector<criterion_row> rows;

    bool all_pass() const {
        for (const criterion_row& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

namespace accept_detail {

inline std::string fnum(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, 24);
}

// Criterion 1: rep_function against direct tuple enumeration, zero tolerance.
// With fault_noise > 0 the convolution runs unguarded on a perturbed
// indicator, the way a build with the rounding guard compiled out would.
inline void crit_convolution(criterion_row& row, double fault_noise) {
    splitmix64 rng(1000);
    int mismatched_cases = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int h = 2 + (rep & 1);
        const long long size = rng.next_range(1, 200);
        std::set<uint64_t> chosen;
        while ((long long)chosen.size() < size)
            chosen.insert((uint64_t)rng.next_range(1, 2000));
        const std::vector<uint64_t> A(chosen.begin(), chosen.end());
        const uint64_t N = 2000 * (uint64_t)h;
        std::vector<uint64_t> brute(N + 1, 0);
        for (uint64_t a : A)
            for (uint64_t b : A) {
                if (h == 2) {
                    ++brute[a + b];
                } else {
                    for (uint64_t c : A) ++brute[a + b + c];
                }
            }
        std::vector<double> values;
        if (fault_noise > 0.0) {
            std::vector<double> ind(N + 1, 0.0);
            for (uint64_t a : A) ind[a] = 1.0;
            ind[A.front()] += fault_noise;
            const std::vector<double> raw = self_convolve_pow(ind, h, N + 1, false);
            values.resize(raw.size());
            for (size_t i = 0; i < raw.size(); ++i) values[i] = std::nearbyint(raw[i]);
        } else {
            values = rep_function(A, h, N).values;
        }
        bool ok = true;
        for (uint64_t n = 0; n <= N; ++n)
            if (values[n] != (double)brute[n]) ok = false;
        if (!ok) ++mismatched_cases;
    }
    row.measured = "cases=50 mismatched_cases=" + std::to_string(mismatched_cases);
    if (fault_noise > 0.0)
        row.measured += " injected_noise=" + fnum(fault_noise, "%.3g") + " guard=off";
    row.pass = mismatched_cases == 0;
}

// Criterion 2: grid quadrature of T^h against the direct weighted solution
// count, at the minimal alias-free grid M = h*x + 1.
inline void crit_quadrature(criterion_row& row) {
    splitmix64 rng(1001);
    const rat cs[4] = {rat(1, 1), rat(6, 5), rat(3, 2), rat(5, 2)};
    double max_rel = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const rat c = cs[rng.next_range(0, 3)];
        const int k = (int)rng.next_range(1, 2);
        const bool primes = rng.next_unit() < 0.25;
        const int h = (int)rng.next_range(1, 3);
        const uint64_t N = (uint64_t)rng.next_range(std::max(h, 20), 200);
        const long long wsel = rng.next_range(0, 2);
        const double omega = wsel == 0 ? 0.0 : (wsel == 1 ? 1.0 / (c.value() * k) : 0.4);
        const sequence_spec spec(c, k, primes);
        const double w = weighted_rep_sum(spec, h, omega, N, primes);
        const weighted_series series = weighted_indicator(spec, N, omega, primes);
        const double q = quadrature_rep_sum(series, h, N, (size_t)h * N + 1);
        const double rel = std::fabs(q - w) / std::max(1.0, std::fabs(w));
        max_rel = std::max(max_rel, rel);
    }
    row.measured = "configs=20 max_rel=" + fnum(max_rel, "%.3e");
    row.pass = max_rel <= 1e-8;
}

// Criterion 3: |#(ground set up to x) - x^{1/c}| <= 2 across six decades.
inline void crit_counting(criterion_row& row) {
    double max_err = 0.0;
    for (const rat& c : {rat(3, 2), rat(5, 2)}) {
        const sequence_spec spec(c, 1, false);
        for (uint64_t x = 1000; x <= 10000000; x *= 10) {
            const uint64_t cnt = count_members(spec, x);
            const double target = std::pow((double)x, 1.0 / c.value());
            max_err = std::max(max_err, std::fabs((double)cnt - target));
        }
    }
    row.measured = "points=10 max_abs_err=" + fnum(max_err, "%.4f");
    row.pass = max_err <= 2.0;
}

// Criterion 4: ratio of the weighted solution count to its closed-form main
// term, sampled high (near 1e5) and low (near 1e3): the high window must sit
// in [0.85, 1.15] and strictly closer to 1 than the low one.
inline void crit_main_term(criterion_row& row) {
    const sequence_spec spec(rat(3, 2), 1, false);
    const int h = 5;
    const double omega = 0.2;
    const std::vector<double> vec = weighted_rep_vector(spec, h, omega, 100000, false);
    const main_term_params mp(spec.c_value(), h, omega, false);
    splitmix64 rng(1003);
    std::set<uint64_t> ns;
    while (ns.size() < 20) ns.insert((uint64_t)rng.next_range(90000, 100000));
    double mean_hi = 0.0;
    for (uint64_t n : ns) mean_hi += vec[n] / main_term(mp, n);
    mean_hi /= 20.0;
    double mean_lo = 0.0;
    for (uint64_t n = 900; n <= 1000; ++n) mean_lo += vec[n] / main_term(mp, n);
    mean_lo /= 101.0;
    row.measured = "mean_hi=" + fnum(mean_hi, "%.6f") + " mean_lo=" + fnum(mean_lo, "%.6f");
    row.pass = mean_hi >= 0.85 && mean_hi <= 1.15 &&
               std::fabs(mean_hi - 1.0) < std::fabs(mean_lo - 1.0);
}

// Criterion 5: log-log slope of the second moment over two decades.
inline void crit_second_moment(criterion_row& row) {
    const sequence_spec spec(rat(3, 2), 1, false);
    std::vector<std::pair<double, double>> points;
    for (uint64_t x : {10000ULL, 30000ULL, 100000ULL, 300000ULL, 1000000ULL})
        points.emplace_back((double)x, hua_moment(spec, 2, x));
    const trend_fit tf = trend_report(points);
    row.measured = "exponent=" + fnum(tf.fitted_exponent, "%.6f");
    row.pass = tf.fitted_exponent >= 1.567 && tf.fitted_exponent <= 1.767;
}

// Criterion 6: singular series identities: multiplicativity of the modulus
// terms, stability and positivity of the truncated prime-squares series on
// its admissible class, and the exact two-term parity collapse at k = 1.
inline void crit_singular(criterion_row& row) {
    double max_mult_dev = 0.0;
    for (int k : {2, 3}) {
        const int h = 2 * (int)h0_integer(k) + 1;
        for (bool restricted : {false, true}) {
            const singular_series_params p(k, h, 1, restricted);
            for (long long n : {17LL, 100LL, 1009LL}) {
                std::map<long long, std::complex<double>> small;
                for (long long q = 1; q <= 50; ++q) small[q] = singular_term(p, q, n);
                for (long long q1 = 1; q1 <= 50; ++q1)
                    for (long long q2 = q1; q2 <= 50; ++q2) {
                        if (std::gcd(q1, q2) != 1) continue;
                        const std::complex<double> lhs = singular_term(p, q1 * q2, n);
                        max_mult_dev =
                            std::max(max_mult_dev, std::abs(lhs - small[q1] * small[q2]));
                    }
            }
        }
    }

    const singular_series_params p250(2, 5, 250, true);
    const singular_series_params p500(2, 5, 500, true);
    splitmix64 rng(1005);
    double min_series = INFINITY, max_drift = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const long long u = rng.next_range(1000, 1000000);
        long long n = u - (((u - 5) % 24 + 24) % 24);
        if (n < 1000) n += 24;
        const double s250 = singular_series(p250, n);
        const double s500 = singular_series(p500, n);
        min_series = std::min(min_series, s500);
        max_drift = std::max(max_drift, std::fabs(s500 - s250));
    }

    const singular_series_params parity(1, 2, 2, true);
    double parity_dev = 0.0;
    for (long long n = 1; n <= 100; ++n) {
        const double expect = 1.0 + (n % 2 == 0 ? 1.0 : -1.0);
        parity_dev = std::max(parity_dev, std::fabs(singular_series(parity, n) - expect));
    }

    row.measured = "mult_dev=" + fnum(max_mult_dev, "%.3e") + " min_star=" +
                   fnum(min_series, "%.6f") + " drift=" + fnum(max_drift, "%.6f") +
                   " parity_dev=" + fnum(parity_dev, "%.3e");
    row.pass = max_mult_dev <= 1e-9 && min_series >= 0.05 && max_drift <= 0.05 &&
               parity_dev <= 1e-12;
}

// Criterion 7: numerical Fourier transform of the counting kernel against its
// closed-form hat (2h - |y|)_+, absolute tolerance 0.05.
inline void crit_kernel(criterion_row& row) {
    double max_dev = 0.0;
    for (int h : {2, 5}) {
        for (double y : {0.0, 1.0, (double)h, 2.0 * h}) {
            std::function<double(double)> f = [h, y](double beta) {
                return dh_kernel(beta, h) * std::cos(2.0 * M_PI * beta * y);
            };
            double integral = 0.0;
            for (int j = 0; j < 200; ++j)
                integral += adaptive_simpson(f, (double)j, (double)j + 1.0, 2.5e-7);
            integral *= 2.0;
            max_dev = std::max(max_dev, std::fabs(integral - dh_kernel_hat(y, h)));
        }
    }
    row.measured = "points=8 max_dev=" + fnum(max_dev, "%.6f");
    row.pass = max_dev <= 0.05;
}

// Criterion 8: the near-zero approximation ratio stays bounded as N grows
// (within 10x of its small-N value) and the normalized sharp-sum sup over the
// complement decays monotonically.
inline void crit_arcs(criterion_row& row) {
    const sequence_spec spec(rat(3, 2), 1, false);
    bool major_ok = true;
    std::string token;
    for (double omega : {0.3, 0.5}) {
        const double r3 = major_arc_error(spec, omega, 1000, 0.1).ratio();
        const double r5 = major_arc_error(spec, omega, 100000, 0.1).ratio();
        if (!(r5 < 10.0 * r3)) major_ok = false;
        token += " major_w" + fnum(omega, "%.1f") + "=" + fnum(r3, "%.4f") + "/" +
                 fnum(r5, "%.4f");
    }
    std::vector<double> sups;
    for (uint64_t N : {1000ULL, 10000ULL, 100000ULL})
        sups.push_back(minor_arc_sup(spec, 0.2, N, 0.1, 8, 5) / std::pow((double)N, 0.2));
    const bool minor_ok = sups[0] > sups[1] && sups[1] > sups[2];
    token += " minor=" + fnum(sups[0], "%.4f") + "/" + fnum(sups[1], "%.4f") + "/" +
             fnum(sups[2], "%.4f");
    row.measured = token.substr(1);
    row.pass = major_ok && minor_ok;
}

// Criterion 9: decay exponent of the restricted-vs-weighted residual sup over
// three decades, with an exact alpha = 0 cross-check against direct
// summation. The exponent check is demoted to report-only when the three-
// point fit explains too little variance.
inline void crit_transfer(criterion_row& row) {
    const int k = 2;
    const rat c(6, 5);
    const double cv = c.value();
    const double P = *psw_threshold(k, c);
    const double threshold = 1.0 / (cv * k) - 0.5 * P + 0.05;
    const sequence_spec thin(c, k, false);
    const sequence_spec flat(rat(1, 1), k, false);
    std::vector<std::pair<double, double>> points;
    double zero_dev = 0.0;
    for (uint64_t x : {1000ULL, 10000ULL, 100000ULL}) {
        const transfer_report tr = transfer_residual(k, c, x, 4 * x, false);
        points.emplace_back((double)x, tr.sup_residual);
        double direct = 0.0;
        for (uint64_t n = 1; n <= x; ++n) {
            if (is_member(thin, n)) direct += 1.0;
            if (is_member(flat, n))
                direct -= std::pow((double)n, (1.0 / cv - 1.0) / k) / cv;
        }
        zero_dev = std::max(zero_dev, std::fabs(tr.residual_at_zero - std::fabs(direct)));
    }
    const trend_fit tf = trend_report(points);
    // R^2 of the three-point log-log fit decides whether the exponent is
    // trustworthy or report-only.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, v] : points) {
        const double lx = std::log(x), ly = std::log(v);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    const double n = (double)points.size();
    const double ss_tot = syy - sy * sy / n;
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    const double ss_res = ss_tot - slope * slope * (sxx - sx * sx / n);
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    row.soft = r2 < 0.9;
    row.measured = "exponent=" + fnum(tf.fitted_exponent, "%.6f") + " threshold=" +
                   fnum(threshold, "%.6f") + " r2=" + fnum(r2, "%.4f") + " zero_dev=" +
                   fnum(zero_dev, "%.3e");
    const bool exponent_ok = tf.fitted_exponent <= threshold;
    row.pass = zero_dev <= 1e-9 && (row.soft || exponent_ok);
}

struct flagship_state {
    bool ran = false;
    double lambda = 0.0;
    std::string seed1_token;
};

// One sampled-and-verified cell of the flagship run; the token is the
// deterministic fingerprint compared by the rerun criterion.
inline std::string flagship_cell(double lambda, uint64_t seed,
                                 const std::vector<std::pair<uint64_t, uint64_t>>& windows,
                                 bool* global_pass = nullptr, double* last_mean = nullptr) {
    sample_plan plan;
    plan.spec = sequence_spec(rat(3, 2), 1, false);
    plan.F = reg_var_fn(1.0, 0.5, 0.0, 0.0);
    plan.h = 5;
    plan.lambda = lambda;
    plan.x_max = 1000000;
    plan.seed = seed;
    const sample_result res = sample_subbase(plan);
    const reg_var_fn F = plan.F;
    const verify_report vr = verify_subbase(
        res.A, plan.h, [&](uint64_t n) { return regvar_eval(F, (double)n); }, windows);
    if (global_pass) *global_pass = vr.global_pass;
    if (last_mean) *last_mean = vr.per_window.back().mean_ratio;
    std::string token = "size=" + std::to_string(res.A.size());
    for (const window_stats& ws : vr.per_window) token += "/" + fnum(ws.mean_ratio, "%.6f");
    return token;
}

// Criterion 10: the full randomized construction at scale: calibrate once,
// sample twenty seeds, and demand per-seed window bands plus a pooled
// last-window mean near 1.
inline void crit_flagship(criterion_row& row, flagship_state& fs) {
    sample_plan plan;
    plan.spec = sequence_spec(rat(3, 2), 1, false);
    plan.F = reg_var_fn(1.0, 0.5, 0.0, 0.0);
    plan.h = 5;
    plan.x_max = 1000000;
    const std::vector<std::pair<uint64_t, uint64_t>> windows = {
        {131072, 262144}, {262144, 524288}, {524288, 1048576}};
    const double lambda = calibrate_lambda(plan, windows, 48);
    int pass_seeds = 0;
    double pooled = 0.0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        bool gp = false;
        double lm = 0.0;
        const std::string token = flagship_cell(lambda, seed, windows, &gp, &lm);
        if (seed == 1) fs.seed1_token = token;
        pass_seeds += gp ? 1 : 0;
        pooled += lm;
    }
    pooled /= 20.0;
    fs.ran = true;
    fs.lambda = lambda;
    row.measured = "lambda=" + fnum(lambda, "%.8f") + " pass_seeds=" +
                   std::to_string(pass_seeds) + "/20 pooled_last=" + fnum(pooled, "%.6f");
    row.pass = pass_seeds >= 16 && pooled >= 0.75 && pooled <= 1.33;
}

} // namespace accept_detail

inline std::string format_criterion_line(const criterion_row& r) {
    char head[32];
    std::snprintf(head, sizeof head, "[%2d] %s%s", r.id, r.pass ? "PASS" : "FAIL",
                  r.soft ? "*" : " ");
    std::string line = head;
    line += " " + r.name + " | " + r.measured;
    char tail[48];
    std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
    line += tail;
    if (r.over_budget) line += " [over budget]";
    return line;
}

inline void write_report_csv(const acceptance_report& rep, std::ostream& os) {
    os << "id,name,status,soft,measured\n";
    for (const criterion_row& r : rep.rows)
        os << r.id << ',' << r.name << ',' << (r.pass ? "pass" : "fail") << ','
           << (r.soft ? 1 : 0) << ',' << r.measured << '\n';
}

inline acceptance_report run_acceptance(const acceptance_options& opt) {
    using clock = std::chrono::steady_clock;
    acceptance_report rep;
    rep.profile = opt.full ? "full" : "quick";
    accept_detail::flagship_state fs;

    auto body = [&](int id, criterion_row& row) {
        switch (id) {
            case 1: accept_detail::crit_convolution(row, opt.fault_noise); break;
            case 2: accept_detail::crit_quadrature(row); break;
            case 3: accept_detail::crit_counting(row); break;
            case 4: accept_detail::crit_main_term(row); break;
            case 5: accept_detail::crit_second_moment(row); break;
            case 6: accept_detail::crit_singular(row); break;
            case 7: accept_detail::crit_kernel(row); break;
            case 8: accept_detail::crit_arcs(row); break;
            case 9: accept_detail::crit_transfer(row); break;
            case 10: accept_detail::crit_flagship(row, fs); break;
            default: throw internal_error("unknown criterion id");
        }
    };

    struct cell {
        int id;
        const char* name;
        double budget;
    };
    const std::vector<cell> cells = {
        {1, "exact convolution oracle", 5.0},
        {2, "grid quadrature identity", 5.0},
        {3, "floor-power counting error", 30.0},
        {4, "weighted count vs main term", 180.0},
        {5, "second-moment growth trend", 120.0},
        {6, "singular series identities", 60.0},
        {7, "kernel transform pair", 10.0},
        {8, "arc approximation trends", 180.0},
        {9, "transfer residual decay", 120.0},
        {10, "randomized subbasis verification", 900.0},
    };
    const std::set<int> quick_ids = {1, 2, 3, 6, 7};

    auto run_cell = [&](const cell& c) {
        criterion_row row;
        row.id = c.id;
        row.name = c.name;
        row.budget = c.budget;
        const auto t0 = clock::now();
        try {
            body(c.id, row);
        } catch (const std::exception& e) {
            row.pass = false;
            row.measured = std::string("error: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        if (row.budget > 0.0 && row.seconds > row.budget) {
            row.over_budget = true;
            row.pass = false;
        }
        rep.rows.push_back(row);
        if (opt.progress) *opt.progress << format_criterion_line(row) << std::endl;
    };

    std::vector<int> ran_ids;
    for (const cell& c : cells) {
        if (!opt.full && !quick_ids.count(c.id)) continue;
        run_cell(c);
        ran_ids.push_back(c.id);
    }

    // Criterion 11: recompute every cell above in-process and demand the
    // measured strings come back byte-identical; the flagship cell is redone
    // for seed 1 only, with the already calibrated lambda.
    {
        criterion_row row;
        row.id = 11;
        row.name = "byte-identical rerun";
        row.budget = 0.0;
        const auto t0 = clock::now();
        int cells_checked = 0, identical = 0;
        try {
            for (int id : ran_ids) {
                if (id == 10) continue;
                criterion_row again;
                again.id = id;
                body(id, again);
                ++cells_checked;
                for (const criterion_row& r : rep.rows)
                    if (r.id == id && r.measured == again.measured) {
                        ++identical;
                        break;
                    }
            }
            if (fs.ran) {
                const std::vector<std::pair<uint64_t, uint64_t>> windows = {
                    {131072, 262144}, {262144, 524288}, {524288, 1048576}};
                const std::string token =
                    accept_detail::flagship_cell(fs.lambda, 1, windows);
                ++cells_checked;
                if (token == fs.seed1_token) ++identical;
            }
            row.measured = "cells=" + std::to_string(cells_checked) + " identical=" +
                           std::to_string(identical);
            row.pass = cells_checked > 0 && identical == cells_checked;
        } catch (const std::exception& e) {
            row.pass = false;
            row.measured = std::string("error: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        rep.rows.push_back(row);
        if (opt.progress) *opt.progress << format_criterion_line(row) << std::endl;
    }
    return rep;
}

} // namespace psb
