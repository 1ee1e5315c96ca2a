#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/fft.hpp"
#include "psb/sequences.hpp"

namespace psb {

inline constexpr uint64_t max_series_len = 1ULL << 26;

struct weighted_provenance {
    sequence_spec spec;
    double omega = 0.0;
    double beta = 0.0;
    bool log_weighted = false;
};

// Coefficient vector of the weighted generating sum: coeff[n] = n^{omega-beta}
// (times log n in the log-weighted variant) on ground-set members, 0 off it.
struct weighted_series {
    uint64_t length = 0;             // max index x
    std::vector<double> coeffs;      // size length + 1, coeffs[0] = 0
    weighted_provenance prov;
};

inline weighted_series weighted_indicator(const sequence_spec& spec, uint64_t x, double omega,
                                          bool log_weighted) {
    if (x < 1) throw domain_error("weighted_indicator requires x >= 1");
    if (x + 1 > max_series_len) throw resource_error("series length exceeds budget");
    weighted_series ws;
    ws.length = x;
    ws.coeffs.assign(x + 1, 0.0);
    const double beta = 1.0 / (spec.c_value() * spec.k);
    ws.prov = {spec, omega, beta, log_weighted};
    seq_detail::for_each_element(spec, x, [&](uint64_t n) {
        double w = std::pow((double)n, omega - beta);
        if (log_weighted) w *= std::log((double)n);
        ws.coeffs[n] = w;
    });
    return ws;
}

struct rep_vector {
    int h = 2;
    std::vector<double> values; // index 0..N
    bool exact = false;
};

// r_{A,h}(n) for n = 0..N: the number of ordered h-tuples from A summing
// to n. Fast path is guarded floating FFT; when the indicator mass is too
// large for float exactness, a quadratic 64-bit convolution takes over.
inline rep_vector rep_function(const std::vector<uint64_t>& A, int h, uint64_t N) {
    if (h < 2) throw domain_error("rep_function requires h >= 2");
    if (A.empty()) throw domain_error("rep_function requires nonempty A");
    if (N + 1 > max_series_len) throw resource_error("rep_function length exceeds budget");
    for (uint64_t a : A)
        if (a == 0) throw domain_error("rep_function elements must be >= 1");
    rep_vector rv;
    rv.h = h;
    // Floating convolutions first: every squaring stage is rounded under the
    // 0.3 deviation certificate, so a returned vector is exact. The guard
    // throws when roundoff or magnitude voids the certificate; only then is
    // the quadratic 64-bit fallback worth its cost.
    try {
        std::vector<double> ind(N + 1, 0.0);
        for (uint64_t a : A)
            if (a <= N) ind[a] = 1.0;
        rv.values = self_convolve_pow(ind, h, N + 1, true);
        rv.exact = true;
        return rv;
    } catch (const internal_error&) {
        if (N > 32768) throw;
    } catch (const resource_error&) {
        if (N > 32768) throw;
    }
    if (N <= 32768) {
        std::vector<uint64_t> ind(N + 1, 0);
        for (uint64_t a : A)
            if (a <= N) ind[a] = 1;
        std::vector<uint64_t> acc;
        std::vector<uint64_t> sq = ind;
        bool acc_set = false;
        int bits = h;
        while (bits > 0) {
            if (bits & 1) {
                acc = acc_set ? convolve_exact_u64(acc, sq, N + 1) : sq;
                acc_set = true;
            }
            bits >>= 1;
            if (bits > 0) sq = convolve_exact_u64(sq, sq, N + 1);
        }
        rv.values.assign(N + 1, 0.0);
        for (uint64_t n = 0; n <= N; ++n) {
            if (acc[n] > (1ULL << 53)) throw resource_error("representation counts exceed 2^53");
            rv.values[n] = (double)acc[n];
        }
        rv.exact = true;
        return rv;
    }
    throw resource_error("representation counts exceed the exact-arithmetic budget");
}

// Full vector of weighted solution sums: index n holds
// sum over x_1+...+x_h = n of prod_i coeff[x_i].
inline std::vector<double> weighted_rep_vector(const sequence_spec& spec, int h, double omega,
                                               uint64_t N, bool log_weighted) {
    if (h < 1) throw domain_error("weighted_rep_vector requires h >= 1");
    weighted_series ws = weighted_indicator(spec, N, omega, log_weighted);
    return self_convolve_pow(ws.coeffs, h, N + 1, false);
}

inline double weighted_rep_sum(const sequence_spec& spec, int h, double omega, uint64_t N,
                               bool log_weighted) {
    if ((uint64_t)h > N) throw domain_error("weighted_rep_sum requires N >= h");
    return weighted_rep_vector(spec, h, omega, N, log_weighted)[N];
}

// First-order floating error estimate for a weighted h-fold convolution,
// attached to CLI reports (real weights have no exact fallback).
inline double weighted_error_bound(uint64_t x, double l1_mass, int h) {
    const double eps = 2.220446049250313e-16;
    return (double)x * std::log((double)std::max<uint64_t>(x, 2)) * eps * std::pow(l1_mass, (double)h);
}

// Second moment sum_{n<=x} r_{B,h}(n)^2 with B the ground set clipped to x.
inline double hua_moment(const sequence_spec& spec, int h, uint64_t x) {
    if (h < 1) throw domain_error("hua_moment requires h >= 1");
    if (x < 1) throw domain_error("hua_moment requires x >= 1");
    if (x + 1 > max_series_len) throw resource_error("hua_moment length exceeds budget");
    if (h == 1) return (double)count_members(spec, x);
    ground_set g = generate(spec, x);
    if (g.elements.empty()) return 0.0;
    rep_vector rv = rep_function(g.elements, h, x);
    double s = 0.0;
    for (double v : rv.values) s += v * v;
    return s;
}

struct trend_fit {
    double fitted_exponent = 0.0;
    double last_ratio = 0.0;
};

// Least-squares slope of log(value) against log(N).
inline trend_fit trend_report(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw domain_error("trend_report requires >= 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [N, v] : points) {
        if (!(N > 0.0) || !(v > 0.0)) throw domain_error("trend_report requires positive points");
        const double lx = std::log(N), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = (double)points.size();
    trend_fit tf;
    tf.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    tf.last_ratio = points.back().second;
    return tf;
}

} // namespace psb
