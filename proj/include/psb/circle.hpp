#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "psb/core.hpp"
#include "psb/errors.hpp"
#include "psb/fft.hpp"
#include "psb/repcount.hpp"
#include "psb/sequences.hpp"

namespace psb {

enum class sum_range { full, top };

struct exp_grid {
    size_t M = 0;
    std::vector<cplx> values; // values[j] = S(j/M)
    uint64_t source_length = 0;
};

// Evaluates the trigonometric polynomial of `series` on the uniform M-grid,
// optionally first zeroing coefficients below x/divisor (the top range used
// by the sharp sums).
inline exp_grid exp_sum_grid(const weighted_series& series, size_t M, sum_range range,
                             int top_divisor = 1) {
    if (M <= series.length) throw domain_error("exp_sum_grid requires M > series length");
    exp_grid g;
    g.M = M;
    g.source_length = series.length;
    if (range == sum_range::top) {
        if (top_divisor < 1) throw domain_error("exp_sum_grid top range requires divisor >= 1");
        std::vector<double> coeffs = series.coeffs;
        for (uint64_t n = 0; n < coeffs.size(); ++n) {
            if (n * (uint64_t)top_divisor < series.length) coeffs[n] = 0.0;
        }
        g.values = grid_dft(coeffs, M);
    } else {
        g.values = grid_dft(series.coeffs, M);
    }
    return g;
}

// Pointwise evaluation at a short list of arbitrary angles; the grid scans
// above stay on the FFT path, this covers narrow-arc probes where a full
// circle transform would be waste.
inline std::vector<cplx> eval_points(const std::vector<double>& coeffs,
                                     const std::vector<double>& alphas) {
    std::vector<cplx> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        cplx s(0.0, 0.0);
        for (size_t n = 1; n < coeffs.size(); ++n) {
            if (coeffs[n] == 0.0) continue;
            const double ang = 2.0 * M_PI * std::fmod((double)n * alpha, 1.0);
            s += coeffs[n] * cplx(std::cos(ang), std::sin(ang));
        }
        out.push_back(s);
    }
    return out;
}

// Counting kernel (sin(2 pi h beta) / (pi beta))^2 and its transform
// (2h - |y|)_+ .
inline double dh_kernel(double beta, int h) {
    if (h < 1) throw domain_error("dh_kernel requires h >= 1");
    if (std::fabs(beta) < 1e-12) return 4.0 * (double)h * (double)h;
    const double s = std::sin(2.0 * M_PI * (double)h * beta) / (M_PI * beta);
    return s * s;
}

inline double dh_kernel_hat(double y, int h) {
    if (h < 1) throw domain_error("dh_kernel_hat requires h >= 1");
    const double v = 2.0 * (double)h - std::fabs(y);
    return v > 0.0 ? v : 0.0;
}

namespace circle_detail {

inline cplx pow_int(cplx z, int h) {
    cplx r(1.0, 0.0);
    while (h) {
        if (h & 1) r *= z;
        z *= z;
        h >>= 1;
    }
    return r;
}

} // namespace circle_detail

// (1/M) sum_j T(j/M)^h e(-N j/M): exact for the degree h*x polynomial once
// M >= h*x + 1, recovering the weighted representation sum at N.
inline double quadrature_rep_sum(const weighted_series& series, int h, uint64_t N, size_t M) {
    if (h < 1) throw domain_error("quadrature_rep_sum requires h >= 1");
    if (M < (size_t)h * series.length + 1)
        throw domain_error("quadrature_rep_sum requires M >= h*x + 1 (aliasing otherwise)");
    const std::vector<cplx> grid = grid_dft(series.coeffs, M);
    cplx acc(0.0, 0.0);
    for (size_t j = 0; j < M; ++j) {
        const long long r = (long long)(((unsigned __int128)N * j) % M);
        const double ang = -2.0 * M_PI * (double)r / (double)M;
        acc += circle_detail::pow_int(grid[j], h) * cplx(std::cos(ang), std::sin(ang));
    }
    return acc.real() / (double)M;
}

// Major/minor split bookkeeping; the constructor owns the paper-side
// constraint nu < (1/3) min{1/c, omega0}.
struct arc_split {
    uint64_t N = 0;
    double nu = 0.0;
    double L = 0.0;
    double major_half_width = 0.0;

    arc_split(uint64_t N_, double nu_, double c_value, double omega0) : N(N_), nu(nu_) {
        if (!(nu > 0.0)) throw domain_error("arc_split requires nu > 0");
        const double cap = std::min(1.0 / c_value, omega0) / 3.0;
        if (!(nu < cap)) throw domain_error("arc_split requires nu < (1/3) min{1/c, omega0}");
        L = std::pow((double)N, nu);
        major_half_width = L / (double)N;
        if (major_half_width > 0.5) throw domain_error("arc_split major arc exceeds half the circle");
    }
};

// Default delta is half its admissible ceiling, omega0 = 1/h - delta, and nu
// sits at 0.8 of its own cap, strictly inside every constraint.
inline double nu_default(const sequence_spec& spec, int h) {
    const long long H0 = spec.thinned() ? h0_real(spec.c) : h0_integer(spec.k);
    if (h <= 2 * H0) throw domain_error("nu_default requires h > 2*H0");
    const double delta = ((double)h - 2.0 * (double)H0) / (2.0 * h * (h - 1.0) * (double)H0) / 2.0;
    const double omega0 = 1.0 / (double)h - delta;
    return 0.8 * std::min(1.0 / spec.c_value(), omega0) / 3.0;
}

struct major_arc_report {
    double sup_error = 0.0;
    double bound = 0.0;

    double ratio() const { return sup_error / bound; }
};

// Sup over a 129-point grid of the major arc [-L/N, L/N] of
// |T(alpha) - U(alpha)/c|, against the target scale N^{omega - 2 nu}.
inline major_arc_report major_arc_error(const sequence_spec& spec, double omega, uint64_t N,
                                        double nu) {
    if (spec.k != 1 || spec.primes)
        throw domain_error("major_arc_error is stated for plain k = 1 ground sets");
    if (!(nu > 0.0)) throw domain_error("major_arc_error requires nu > 0");
    const double L = std::pow((double)N, nu);
    const double half = L / (double)N;
    if (half > 0.5) throw domain_error("major_arc_error arc exceeds half the circle");
    weighted_series T = weighted_indicator(spec, N, omega, false);
    // Difference polynomial d = T - U/c, scanned in one pass.
    std::vector<double> d = T.coeffs;
    const double c = spec.c_value();
    for (uint64_t n = 1; n <= N; ++n) d[n] -= std::pow((double)n, omega - 1.0) / c;
    std::vector<double> alphas(129);
    for (int i = 0; i < 129; ++i) alphas[i] = -half + (2.0 * half) * (double)i / 128.0;
    const std::vector<cplx> vals = eval_points(d, alphas);
    major_arc_report rep;
    for (const cplx& v : vals) rep.sup_error = std::max(rep.sup_error, std::abs(v));
    rep.bound = std::pow((double)N, omega - 2.0 * nu);
    return rep;
}

// Sup of |T_sharp| over the grid points of the minor arcs ||alpha|| > L/N,
// on a grid of M = gridFactor * N points. The grid sup undershoots the true
// sup by at most the Bernstein factor (1 + pi x / M).
inline double minor_arc_sup(const sequence_spec& spec, double omega, uint64_t N, double nu,
                            int grid_factor, int top_divisor) {
    if (grid_factor < 4) throw domain_error("minor_arc_sup requires gridFactor >= 4");
    if (!(nu > 0.0)) throw domain_error("minor_arc_sup requires nu > 0");
    weighted_series T = weighted_indicator(spec, N, omega, false);
    const size_t M = (size_t)grid_factor * (size_t)N;
    exp_grid g = exp_sum_grid(T, M, sum_range::top, top_divisor);
    const double L = std::pow((double)N, nu);
    double sup = 0.0;
    for (size_t j = 0; j < M; ++j) {
        const double dist = (double)std::min(j, M - j) / (double)M;
        if (dist <= L / (double)N) continue;
        sup = std::max(sup, std::abs(g.values[j]));
    }
    return sup;
}

inline double bernstein_factor(uint64_t x, size_t M) {
    return 1.0 + M_PI * (double)x / (double)M;
}

struct transfer_report {
    double sup_residual = 0.0;
    double residual_at_zero = 0.0;
    double reference_scale = 0.0;
};

// Full-circle sup of the transfer residual: the floor-power restricted sum
// minus its smoothly weighted unrestricted comparator, measured against the
// power saving x^{1/(ck) - P}.
inline transfer_report transfer_residual(int k, const rat& c, uint64_t x, size_t M,
                                         bool log_weighted) {
    std::optional<double> P = log_weighted ? working_pstar(k, c) : psw_threshold(k, c);
    if (!P) throw domain_error("transfer_residual requires (k,c) inside the admissible table range");
    if (M < 4 * x) throw domain_error("transfer_residual requires M >= 4x");
    const sequence_spec lhs_spec(c, k, log_weighted);
    const sequence_spec rhs_spec(rat(1, 1), k, log_weighted);
    const double cv = c.value();
    std::vector<double> d(x + 1, 0.0);
    seq_detail::for_each_element(lhs_spec, x, [&](uint64_t n) {
        d[n] += log_weighted ? std::log((double)n) : 1.0;
    });
    const double expo = (1.0 / cv - 1.0) / (double)k;
    seq_detail::for_each_element(rhs_spec, x, [&](uint64_t n) {
        double w = std::pow((double)n, expo) / cv;
        if (log_weighted) w *= std::log((double)n);
        d[n] -= w;
    });
    const std::vector<cplx> vals = grid_dft(d, M);
    transfer_report rep;
    for (const cplx& v : vals) rep.sup_residual = std::max(rep.sup_residual, std::abs(v));
    rep.residual_at_zero = std::abs(vals[0]);
    rep.reference_scale = std::pow((double)x, 1.0 / (cv * k) - *P);
    return rep;
}

} // namespace psb
