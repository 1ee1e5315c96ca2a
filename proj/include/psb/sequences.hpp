#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/primes.hpp"

namespace psb {

namespace seq_detail {

// Minimal little-endian big-unsigned, just enough for pow-and-compare.
struct big_u {
    std::vector<uint64_t> limb; // little endian, no trailing zeros

    static big_u from(uint64_t v) {
        big_u b;
        if (v) b.limb.push_back(v);
        return b;
    }

    size_t bits() const {
        if (limb.empty()) return 0;
        uint64_t top = limb.back();
        size_t n = (limb.size() - 1) * 64;
        while (top) { ++n; top >>= 1; }
        return n;
    }

    void mul_small(uint64_t m) {
        unsigned __int128 carry = 0;
        for (auto& l : limb) {
            unsigned __int128 cur = (unsigned __int128)l * m + carry;
            l = (uint64_t)cur;
            carry = cur >> 64;
        }
        while (carry) {
            limb.push_back((uint64_t)carry);
            carry >>= 64;
        }
    }

    void mul(const big_u& o) {
        if (limb.empty() || o.limb.empty()) { limb.clear(); return; }
        std::vector<uint64_t> out(limb.size() + o.limb.size(), 0);
        for (size_t i = 0; i < limb.size(); ++i) {
            unsigned __int128 carry = 0;
            for (size_t j = 0; j < o.limb.size(); ++j) {
                unsigned __int128 cur = (unsigned __int128)limb[i] * o.limb[j] + out[i + j] + carry;
                out[i + j] = (uint64_t)cur;
                carry = cur >> 64;
            }
            size_t idx = i + o.limb.size();
            while (carry) {
                unsigned __int128 cur = (unsigned __int128)out[idx] + carry;
                out[idx] = (uint64_t)cur;
                carry = cur >> 64;
                ++idx;
            }
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        limb = std::move(out);
    }

    // -1, 0, +1 comparison
    int cmp(const big_u& o) const {
        if (limb.size() != o.limb.size()) return limb.size() < o.limb.size() ? -1 : 1;
        for (size_t i = limb.size(); i-- > 0;) {
            if (limb[i] != o.limb[i]) return limb[i] < o.limb[i] ? -1 : 1;
        }
        return 0;
    }
};

inline big_u big_pow(uint64_t base, uint64_t exp, size_t bit_budget) {
    big_u r = big_u::from(1);
    big_u b = big_u::from(base);
    while (exp) {
        if (exp & 1) {
            r.mul(b);
            if (r.bits() > bit_budget) throw resource_error("exact power comparison exceeds precision budget");
        }
        exp >>= 1;
        if (exp) {
            b.mul(b);
            if (b.bits() > bit_budget) throw resource_error("exact power comparison exceeds precision budget");
        }
    }
    return r;
}

// Exact truth of n^q <= m^p, with sizes capped so a pathological c cannot
// allocate without bound.
inline bool pow_le(uint64_t n, uint64_t q, uint64_t m, uint64_t p) {
    constexpr size_t budget = 8192;
    big_u lhs = big_pow(n, q, budget);
    big_u rhs = big_pow(m, p, budget);
    return lhs.cmp(rhs) <= 0;
}

} // namespace seq_detail

// floor(m^c) for exact rational c = p/q, resolved exactly: the long double
// estimate decides outright when it sits clear of an integer boundary;
// anything within the guard band is settled by integer power comparison
// (n <= m^{p/q} iff n^q <= m^p).
inline uint64_t floor_pow(uint64_t m, const rat& c) {
    if (m == 0) throw domain_error("floor_pow requires m >= 1");
    if (c.is_integer()) {
        // c = 1 is the only integral exponent admitted upstream, but handle
        // small integer c exactly anyway.
        uint64_t r = 1;
        for (long long i = 0; i < c.num; ++i) {
            unsigned __int128 t = (unsigned __int128)r * m;
            if (t > UINT64_MAX) throw resource_error("floor_pow overflows 64 bits");
            r = (uint64_t)t;
        }
        return r;
    }
    const long double v = powl((long double)m, (long double)c.num / (long double)c.den);
    if (v >= 1.8e19L) throw resource_error("floor_pow overflows 64 bits");
    uint64_t n = (uint64_t)floorl(v);
    const long double frac_lo = v - floorl(v);
    const long double frac_hi = 1.0L - frac_lo;
    if (frac_lo > 1e-6L && frac_hi > 1e-6L) return n;
    // Near a boundary: pin down the floor exactly around the estimate.
    while (n > 1 && !seq_detail::pow_le(n, (uint64_t)c.den, m, (uint64_t)c.num)) --n;
    while (seq_detail::pow_le(n + 1, (uint64_t)c.den, m, (uint64_t)c.num)) ++n;
    return n;
}

// Exact k-th root if n is a perfect k-th power, else 0.
inline uint64_t exact_kth_root(uint64_t n, int k) {
    if (k == 1) return n;
    uint64_t t = (uint64_t)llroundl(powl((long double)n, 1.0L / k));
    for (uint64_t cand = t > 2 ? t - 2 : 1; cand <= t + 2; ++cand) {
        unsigned __int128 v = 1;
        bool over = false;
        for (int i = 0; i < k; ++i) {
            v *= cand;
            if (v > UINT64_MAX) { over = true; break; }
        }
        if (!over && (uint64_t)v == n) return cand;
    }
    return 0;
}

// Decision procedure for n in the ground set: strip the k-th power, then ask
// whether the base value is hit by the floor-power map (and is prime, when
// required).
inline bool is_member(const sequence_spec& spec, uint64_t n) {
    if (n == 0) throw domain_error("is_member requires n >= 1");
    const uint64_t t = exact_kth_root(n, spec.k);
    if (t == 0) return false;
    if (spec.primes && !is_prime_u64(t)) return false;
    if (!spec.thinned()) return true;
    // t in the floor-power image iff floor(m^c) = t for m near t^{1/c}
    const long double cm = (long double)spec.c.num / (long double)spec.c.den;
    const long double est = powl((long double)t, 1.0L / cm);
    uint64_t m0 = (uint64_t)floorl(est);
    for (uint64_t m = m0 > 2 ? m0 - 2 : 1; m <= m0 + 2; ++m) {
        if (floor_pow(m, spec.c) == t) return true;
    }
    return false;
}

// Ground set materialized to xMax: sorted element list plus indicator.
struct ground_set {
    sequence_spec spec;
    uint64_t x_max = 0;
    std::vector<uint64_t> elements;
    std::vector<bool> indicator; // length x_max + 1
};

inline constexpr uint64_t ground_set_element_budget = 1ULL << 27;

namespace seq_detail {

// Walks base values floor(m^c) in increasing order, applying the prime filter
// and the k-th power, calling sink(value) for each element <= x_max.
template <typename Sink>
inline void for_each_element(const sequence_spec& spec, uint64_t x_max, Sink&& sink) {
    if (x_max < 1) throw domain_error("generate requires xMax >= 1");
    const std::vector<bool>* isp = nullptr;
    std::vector<bool> table;
    if (spec.primes) {
        // Base values never exceed x_max^{1/k} <= x_max; sieve once when the
        // range is sieveable, else fall back to per-element tests.
        uint64_t base_max = spec.k == 1 ? x_max : (uint64_t)floorl(powl((long double)x_max, 1.0L / spec.k)) + 2;
        if (base_max <= sieve_cap) {
            table = prime_table(base_max);
            isp = &table;
        }
    }
    for (uint64_t m = 1;; ++m) {
        const uint64_t t = floor_pow(m, spec.c);
        unsigned __int128 v = 1;
        bool over = false;
        for (int i = 0; i < spec.k; ++i) {
            v *= t;
            if (v > x_max) { over = true; break; }
        }
        if (over || (uint64_t)v > x_max) break; // floor powers increase with m
        if (spec.primes) {
            const bool p = isp ? (t < isp->size() && (*isp)[t]) : is_prime_u64(t);
            if (!p) continue;
        }
        sink((uint64_t)v);
    }
}

} // namespace seq_detail

inline ground_set generate(const sequence_spec& spec, uint64_t x_max) {
    ground_set g;
    g.spec = spec;
    g.x_max = x_max;
    g.indicator.assign(x_max + 1, false);
    seq_detail::for_each_element(spec, x_max, [&](uint64_t v) {
        if (g.elements.size() >= ground_set_element_budget)
            throw resource_error("ground set exceeds element budget");
        g.elements.push_back(v);
        g.indicator[v] = true;
    });
    return g;
}

inline uint64_t count_members(const sequence_spec& spec, uint64_t x_max) {
    uint64_t n = 0;
    seq_detail::for_each_element(spec, x_max, [&](uint64_t) { ++n; });
    return n;
}

} // namespace psb
