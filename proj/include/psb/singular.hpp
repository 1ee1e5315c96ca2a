#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/primes.hpp"

namespace psb {

namespace singular_detail {

inline std::complex<double> unit_root(long long num, long long den) {
    // e(num/den) with the fraction reduced mod 1 in integers first.
    long long r = num % den;
    if (r < 0) r += den;
    const double ang = 2.0 * M_PI * (double)r / (double)den;
    return {std::cos(ang), std::sin(ang)};
}

struct residue_hist {
    std::vector<int64_t> all;     // all[t]     = #{ 1 <= r <= q : r^k = t mod q }
    std::vector<int64_t> coprime; // same, restricted to (r,q) = 1
};

// Histogram of k-th power residues mod q, cached per (k,q): every S(a,q)
// afterwards is a single O(q) pass.
inline const residue_hist& power_residues(int k, long long q) {
    thread_local std::map<std::pair<int, long long>, residue_hist> cache;
    auto key = std::make_pair(k, q);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    residue_hist h;
    h.all.assign(q, 0);
    h.coprime.assign(q, 0);
    for (long long r = 1; r <= q; ++r) {
        long long t = 1 % q;
        long long base = r % q;
        long long e = k;
        while (e) {
            if (e & 1) t = (t * base) % q;
            base = (base * base) % q;
            e >>= 1;
        }
        h.all[t] += 1;
        if (std::gcd(r, q) == 1) h.coprime[t] += 1;
    }
    return cache.emplace(key, std::move(h)).first->second;
}

inline std::complex<double> pow_int(std::complex<double> z, int h) {
    std::complex<double> r(1.0, 0.0);
    while (h) {
        if (h & 1) r *= z;
        z *= z;
        h >>= 1;
    }
    return r;
}

} // namespace singular_detail

// Complete sum S(a,q) = sum_{r=1}^{q} e(a r^k / q).
inline std::complex<double> gauss_sum(int k, long long a, long long q) {
    if (q < 1) throw domain_error("gauss_sum requires q >= 1");
    if (a < 1 || a > q) throw domain_error("gauss_sum requires 1 <= a <= q");
    if (k < 1) throw domain_error("gauss_sum requires k >= 1");
    const auto& hist = singular_detail::power_residues(k, q);
    std::complex<double> s(0.0, 0.0);
    for (long long t = 0; t < q; ++t) {
        if (hist.all[t] == 0) continue;
        s += (double)hist.all[t] * singular_detail::unit_root(a * t, q);
    }
    return s;
}

// Restricted sum S*(q,a) over r coprime to q.
inline std::complex<double> gauss_sum_restricted(int k, long long a, long long q) {
    if (q < 1) throw domain_error("gauss_sum_restricted requires q >= 1");
    if (a < 1 || a > q) throw domain_error("gauss_sum_restricted requires 1 <= a <= q");
    if (std::gcd(a, q) != 1) throw domain_error("gauss_sum_restricted requires gcd(a,q) = 1");
    if (k < 1) throw domain_error("gauss_sum_restricted requires k >= 1");
    const auto& hist = singular_detail::power_residues(k, q);
    std::complex<double> s(0.0, 0.0);
    for (long long t = 0; t < q; ++t) {
        if (hist.coprime[t] == 0) continue;
        s += (double)hist.coprime[t] * singular_detail::unit_root(a * t, q);
    }
    return s;
}

struct singular_series_params {
    int k = 1;
    int h = 2;
    long long Q = 500;
    bool prime_restricted = false;

    singular_series_params() = default;
    singular_series_params(int k_, int h_, long long Q_, bool prime_)
        : k(k_), h(h_), Q(Q_), prime_restricted(prime_) {
        if (k < 1) throw domain_error("singular series requires k >= 1");
        if (h < 2) throw domain_error("singular series requires h >= 2");
        if (Q < 1) throw domain_error("singular series requires Q >= 1");
        // Absolute convergence needs h > 2k (S(a,q) << q^{1-1/k}); refuse a
        // divergent truncation. k = 1 collapses (S vanishes for q > 1 and
        // S* = mu(q)), so h >= 2 is already safe there.
        if (k >= 2 && h < 2 * k + 1)
            throw domain_error("singular series requires h >= 2k+1 for convergence");
    }
};

namespace singular_detail {

// (S(a,q)/q)^h (or the starred variant over phi(q)) for every coprime a,
// cached per (k,h,q,restricted): evaluating the series at many n then costs
// O(phi(q)) per modulus instead of O(q phi(q)).
inline const std::vector<std::complex<double>>& powered_sums(int k, int h, long long q,
                                                             bool restricted) {
    thread_local std::map<std::tuple<int, int, long long, bool>, std::vector<std::complex<double>>>
        cache;
    auto key = std::make_tuple(k, h, q, restricted);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double denom = restricted ? (double)euler_phi((uint64_t)q) : (double)q;
    std::vector<std::complex<double>> v(q + 1, std::complex<double>(0.0, 0.0));
    for (long long a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const std::complex<double> s = restricted ? gauss_sum_restricted(k, a, q) : gauss_sum(k, a, q);
        v[a] = pow_int(s / denom, h);
    }
    return cache.emplace(key, std::move(v)).first->second;
}

} // namespace singular_detail

// Inner sum at modulus q: A(q,n) = sum_{(a,q)=1} S^h / q^h e(-na/q), with
// S* and phi(q)^h in the prime-restricted variant. Mathematically real.
inline std::complex<double> singular_term(const singular_series_params& p, long long q, long long n) {
    const auto& pw = singular_detail::powered_sums(p.k, p.h, q, p.prime_restricted);
    std::complex<double> acc(0.0, 0.0);
    for (long long a = 1; a <= q; ++a) {
        if (pw[a] == std::complex<double>(0.0, 0.0)) continue;
        acc += pw[a] * singular_detail::unit_root(-n * a, q);
    }
    return acc;
}

// Truncated singular series sum_{q <= Q} A(q,n).
inline double singular_series(const singular_series_params& p, long long n) {
    if (n < 1) throw domain_error("singular_series requires n >= 1");
    double total = 0.0;
    for (long long q = 1; q <= p.Q; ++q) {
        const std::complex<double> term = singular_term(p, q, n);
        if (std::fabs(term.imag()) > 1e-6)
            throw internal_error("singular series term at q=" + std::to_string(q) +
                                 " has imaginary residue " + std::to_string(term.imag()));
        total += term.real();
    }
    return total;
}

// Closed-form bound proxy for the discarded tail sum_{q>Q} q^{1-h/(2k)+0.1};
// infinity when the truncated series is not absolutely convergent.
inline double singular_tail_estimate(const singular_series_params& p) {
    const double e = 1.0 - (double)p.h / (2.0 * p.k) + 0.1;
    if (e >= -1.0) return INFINITY;
    return std::pow((double)p.Q, e + 1.0) / (-e - 1.0);
}

inline bool congruence_admissible(int k, int h, long long n) {
    if (k < 1 || h < 1) throw domain_error("congruence_admissible requires k, h >= 1");
    const long long K = cap_K(k);
    return ((n - h) % K + K) % K == 0;
}

} // namespace psb
