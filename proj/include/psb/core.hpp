#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psb/errors.hpp"
#include "psb/gamma.hpp"
#include "psb/rational.hpp"

namespace psb {

// Ground-set selector: the sequence { floor(m^c)^k } with m ranging over the
// naturals, optionally keeping only terms whose base floor(m^c) is prime.
// c = 1 turns off the floor-power thinning entirely.
struct sequence_spec {
    rat c{1, 1};
    int k = 1;
    bool primes = false;

    sequence_spec() = default;
    sequence_spec(rat c_, int k_, bool primes_) : c(c_), k(k_), primes(primes_) { validate(); }

    void validate() const {
        const double cv = c.value();
        if (cv < 1.0) throw domain_error("c must be >= 1");
        if (!(c == rat(1, 1))) {
            const double nearest = std::nearbyint(cv);
            if (std::fabs(cv - nearest) <= 1e-9)
                throw domain_error("c must be non-integral (or exactly 1)");
        }
        if (k < 1) throw domain_error("k must be >= 1");
    }

    double c_value() const { return c.value(); }
    bool thinned() const { return !(c == rat(1, 1)); }
};

inline long long h0_integer(int k) {
    if (k < 1) throw domain_error("h0_integer requires k >= 1");
    if (k <= 4) return 1LL << (k - 1);
    const long long kk = k;
    return kk * (kk - 1) / 2 + (long long)std::floor(std::sqrt((double)(2 * kk + 2)));
}

inline long long h0_real(const rat& c) {
    const double cv = c.value();
    if (cv <= 1.0 || c.is_integer()) throw domain_error("h0_real requires non-integral c > 1");
    if (cv < 2.0) return 2;
    // floor(2c) exactly from the rational representation
    const long long f2c = rat(2 * c.num, c.den).floor_value();
    return (f2c + 1) * (f2c + 2) / 2;
}

// Modulus of the forced congruence class for sums of h prime k-th powers:
// product over primes p with (p-1) | k of p^nu, where nu = v_p(k) + 2 for
// p = 2 with k even, else v_p(k) + 1.
inline long long cap_K(int k) {
    if (k < 1) throw domain_error("cap_K requires k >= 1");
    long long prod = 1;
    for (long long p = 2; p <= (long long)k + 1; ++p) {
        bool is_p = p >= 2;
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) { is_p = false; break; }
        if (!is_p || k % (p - 1) != 0) continue;
        long long theta = 0, t = k;
        while (t % p == 0) { t /= p; ++theta; }
        long long nu = (p == 2 && k % 2 == 0) ? theta + 2 : theta + 1;
        for (long long i = 0; i < nu; ++i) prod *= p;
    }
    return prod;
}

namespace threshold_detail {

// sigma(r)^{-1} = r(r-1); the nu0 constants come out as exact rationals.
inline rat nu0_plain(int k) {
    if (k % 2 == 0) {
        // (3k+2) * (3k/2) * (3k/2 - 1) / k
        const long long m = 3LL * k / 2;
        return rat((3LL * k + 2) * m * (m - 1), k);
    }
    const long long m = (3LL * k - 1) / 2;
    return rat((3LL * k + 1) * m * (m - 1), k - 1);
}

inline rat nu0_prime(int k) {
    if (k <= 11) return rat((long long)k * (k + 1) * (k + 1), 1);
    const long long m = 3LL * k / 2;
    return rat(2 * m * (m * m - 1), m - k);
}

// Evaluates (nu0/c - nu0 + 1) / (k(2 nu0 - 1)) given exact nu0 and c.
inline std::optional<double> table_tail(const rat& nu0, const rat& c, int k) {
    // admissible iff c < nu0/(nu0-1)
    const rat edge(nu0.num, nu0.num - nu0.den);
    if (!(c < edge)) return std::nullopt;
    const double n0 = nu0.value();
    return (n0 / c.value() - n0 + 1.0) / ((double)k * (2.0 * n0 - 1.0));
}

} // namespace threshold_detail

// Exponent-saving threshold P(c,k) for the unweighted floor-power transfer
// estimate; nullopt when (k,c) falls outside the published table.
inline std::optional<double> psw_threshold(int k, const rat& c) {
    if (k < 2) throw domain_error("psw_threshold requires k >= 2");
    const double cv = c.value();
    if (cv <= 1.0 || c.is_integer()) throw domain_error("psw_threshold requires non-integral c > 1");
    switch (k) {
        case 2:
            if (!(c < rat(4, 3))) return std::nullopt;
            return 1.0 / (4.0 * cv) - 3.0 / 16.0;
        case 3:
            if (!(c < rat(16, 15))) return std::nullopt;
            return 8.0 / (45.0 * cv) - 1.0 / 6.0;
        case 4:
            if (!(c < rat(96, 95))) return std::nullopt;
            return (96.0 / cv - 95.0) / 764.0;
        case 5:
            if (!(c < rat(224, 223))) return std::nullopt;
            return (224.0 / cv - 223.0) / 2235.0;
        default:
            return threshold_detail::table_tail(threshold_detail::nu0_plain(k), c, k);
    }
}

// Threshold P0*(c,k) for the log-weighted prime-power transfer estimate.
inline std::optional<double> pswg_threshold(int k, const rat& c) {
    if (k < 1) throw domain_error("pswg_threshold requires k >= 1");
    const double cv = c.value();
    if (cv <= 1.0 || c.is_integer()) throw domain_error("pswg_threshold requires non-integral c > 1");
    switch (k) {
        case 1:
            if (!(c < rat(73, 64))) return std::nullopt;
            return std::min(1.0 - 1.0 / cv, (73.0 / cv - 64.0) / 86.0);
        case 2:
            if (!(c < rat(82, 75))) return std::nullopt;
            return (82.0 / cv - 75.0) / 174.0;
        case 3:
            if (!(c < rat(80, 77))) return std::nullopt;
            return std::min((80.0 / cv - 77.0) / 468.0, (78.0 / cv - 75.0) / 471.0);
        default:
            return threshold_detail::table_tail(threshold_detail::nu0_prime(k), c, k);
    }
}

// Any exponent strictly below the threshold is admissible; 0.9 leaves room
// for the epsilon losses swallowed by the asymptotic statements.
inline std::optional<double> working_pstar(int k, const rat& c) {
    auto p0 = pswg_threshold(k, c);
    if (!p0) return std::nullopt;
    return 0.9 * *p0;
}

// Target growth function F(x) = C x^kappa (log x)^a (log log x)^b.
struct reg_var_fn {
    double C = 1.0;
    double kappa = 0.0;
    double log_pow = 0.0;
    double loglog_pow = 0.0;

    reg_var_fn() = default;
    reg_var_fn(double C_, double kappa_, double a, double b)
        : C(C_), kappa(kappa_), log_pow(a), loglog_pow(b) {
        if (!(C > 0.0)) throw domain_error("reg_var_fn requires C > 0");
    }
};

inline double regvar_eval(const reg_var_fn& F, double x) {
    if (x < 16.0) throw domain_error("regvar_eval requires x >= 16");
    const double lx = std::log(x);
    return F.C * std::pow(x, F.kappa) * std::pow(lx, F.log_pow) * std::pow(std::log(lx), F.loglog_pow);
}

struct main_term_params {
    double c = 1.0;
    int h = 1;
    double omega = 1.0;
    bool log_weighted = false;

    main_term_params() = default;
    main_term_params(double c_, int h_, double omega_, bool logw)
        : c(c_), h(h_), omega(omega_), log_weighted(logw) {
        if (!(omega > 0.0)) throw domain_error("main_term requires omega > 0");
        if (h < 1) throw domain_error("main_term requires h >= 1");
    }
};

// Analytic factor (1/c^h) Gamma(omega)^h / Gamma(h omega) * N^{h omega - 1}.
// The singular series, where one applies, is multiplied by the caller.
inline double main_term(const main_term_params& p, uint64_t N) {
    if (N < 1) throw domain_error("main_term requires N >= 1");
    return std::pow(p.c, -(double)p.h) * gamma_ratio(p.omega, p.h) *
           std::pow((double)N, (double)p.h * p.omega - 1.0);
}

struct regvar_report {
    bool grows_faster_than_log = false;
    bool under_ceiling = false;
    double ceiling_margin = 0.0;
};

// Theorem-appropriate ceiling for a target F over the given ground set:
// plain sets get Gamma(1+1/ck)^h/Gamma(h/ck) x^{h/ck-1}; prime-based sets get
// (1/c^h) Gamma(1/ck)^h/Gamma(h/ck) x^{h/ck-1}/(log x)^h.
inline double regvar_ceiling(const sequence_spec& spec, int h, double x) {
    const double ck = spec.c_value() * spec.k;
    const double expo = (double)h / ck - 1.0;
    if (spec.primes) {
        return std::pow(spec.c_value(), -(double)h) * gamma_ratio(1.0 / ck, h) *
               std::pow(x, expo) / std::pow(std::log(x), (double)h);
    }
    return std::exp((double)h * std::log(gamma_fn(1.0 + 1.0 / ck)) - std::log(gamma_fn((double)h / ck))) *
           std::pow(x, expo);
}

// Finite-grid proxy for the two admissibility hypotheses on F: F/log x must
// be strictly increasing along the grid tail, and F must sit under the
// ceiling everywhere on the grid.
inline regvar_report regvar_admissible(const reg_var_fn& F, const sequence_spec& spec, int h,
                                       const std::vector<double>& x_grid) {
    if (x_grid.empty()) throw domain_error("regvar_admissible requires a nonempty grid");
    for (size_t i = 0; i < x_grid.size(); ++i) {
        if (x_grid[i] < 16.0) throw domain_error("regvar_admissible grid points must be >= 16");
        if (i > 0 && !(x_grid[i] > x_grid[i - 1]))
            throw domain_error("regvar_admissible grid must be strictly ascending");
    }
    regvar_report rep;
    const size_t n = x_grid.size();
    const size_t tail = n < 3 ? n : 3;
    rep.grows_faster_than_log = true;
    for (size_t i = n - tail + 1; i < n; ++i) {
        const double prev = regvar_eval(F, x_grid[i - 1]) / std::log(x_grid[i - 1]);
        const double cur = regvar_eval(F, x_grid[i]) / std::log(x_grid[i]);
        if (!(cur > prev)) { rep.grows_faster_than_log = false; break; }
    }
    rep.under_ceiling = true;
    rep.ceiling_margin = 0.0;
    for (double x : x_grid) {
        const double ratio = regvar_eval(F, x) / regvar_ceiling(spec, h, x);
        if (ratio > rep.ceiling_margin) rep.ceiling_margin = ratio;
        if (ratio > 1.0) rep.under_ceiling = false;
    }
    return rep;
}

} // namespace psb
