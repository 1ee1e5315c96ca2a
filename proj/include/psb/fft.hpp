#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "psb/errors.hpp"

namespace psb {

using cplx = std::complex<double>;

namespace fft_detail {

// Iterative radix-2 Cooley-Tukey, in place. size must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool invert) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw internal_error("fft size not a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / double(len) * (invert ? 1.0 : -1.0);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (invert) {
        const double inv_n = 1.0 / double(n);
        for (auto& x : a) x *= inv_n;
    }
}

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace fft_detail

// Linear convolution of real vectors, truncated to out_len coefficients.
// Inputs are pre-truncated to out_len (indices >= out_len cannot contribute
// below out_len), then padded so no cyclic wraparound reaches the kept range.
// The two inputs get separate transforms: packing both into one complex
// transform leaks the larger spectrum into the smaller one (error scales
// with max|A_k|^2, not |A_k||B_k|), which is catastrophic when the factor
// norms are lopsided, e.g. a high convolution power against an indicator.
// A genuine squaring (same vector passed twice) needs only one transform
// and has no crosstalk.
inline std::vector<double> convolve_real(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         size_t out_len) {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
    const size_t la = a.size() < out_len ? a.size() : out_len;
    const size_t lb = b.size() < out_len ? b.size() : out_len;
    const size_t need = la + lb - 1;
    const size_t n = fft_detail::next_pow2(need);
    std::vector<cplx> za(n, cplx(0.0, 0.0));
    for (size_t i = 0; i < la; ++i) za[i] = cplx(a[i], 0.0);
    fft_detail::fft_pow2(za, false);
    if (&a == &b) {
        for (auto& x : za) x *= x;
    } else {
        std::vector<cplx> zb(n, cplx(0.0, 0.0));
        for (size_t i = 0; i < lb; ++i) zb[i] = cplx(b[i], 0.0);
        fft_detail::fft_pow2(zb, false);
        for (size_t k = 0; k < n; ++k) za[k] *= zb[k];
    }
    fft_detail::fft_pow2(za, true);
    std::vector<double> out(out_len, 0.0);
    const size_t keep = need < out_len ? need : out_len;
    for (size_t i = 0; i < keep; ++i) out[i] = za[i].real();
    return out;
}

// Rounds every entry to the nearest integer in place and returns the largest
// deviation seen. A deviation beyond `guard` means the floating convolution
// can no longer be trusted to represent integer counts; abort loudly. The
// certificate is also void once magnitudes approach the double mantissa
// (spacing near 2^46 is already 2^-6), so oversized counts are refused too.
inline constexpr double integral_value_cap = 70368744177664.0; // 2^46

inline double round_integral_guarded(std::vector<double>& v, double guard = 0.3) {
    double worst = 0.0;
    double biggest = 0.0;
    for (auto& x : v) {
        const double r = std::nearbyint(x);
        const double d = std::fabs(x - r);
        if (d > worst) worst = d;
        if (std::fabs(r) > biggest) biggest = std::fabs(r);
        x = r;
    }
    if (biggest > integral_value_cap)
        throw resource_error("integer counts exceed the float-certificate range");
    if (worst > guard) throw internal_error("convolution rounding guard tripped: max deviation " + std::to_string(worst));
    return worst;
}

// h-fold linear self-convolution truncated to out_len, by repeated squaring
// over the binary expansion of h. exact_counts re-rounds (and guards) every
// intermediate so integer counts never accumulate floating drift.
inline std::vector<double> self_convolve_pow(const std::vector<double>& base,
                                             int h, size_t out_len,
                                             bool exact_counts) {
    if (h < 1) throw domain_error("self_convolve_pow requires h >= 1");
    std::vector<double> result;
    std::vector<double> sq(base.begin(), base.begin() + std::min(base.size(), out_len));
    sq.resize(std::min(base.size(), out_len));
    bool result_set = false;
    int bits = h;
    while (bits > 0) {
        if (bits & 1) {
            result = result_set ? convolve_real(result, sq, out_len) : sq;
            result_set = true;
            if (exact_counts && result.size() > 1) round_integral_guarded(result);
        }
        bits >>= 1;
        if (bits > 0) {
            sq = convolve_real(sq, sq, out_len);
            if (exact_counts) round_integral_guarded(sq);
        }
    }
    result.resize(out_len, 0.0);
    return result;
}

// Exact schoolbook convolution on 64-bit unsigned lanes; the fallback when
// counts may exceed the 2^52 float-exactness budget. Quadratic, so callers
// cap the size.
inline std::vector<uint64_t> convolve_exact_u64(const std::vector<uint64_t>& a,
                                                const std::vector<uint64_t>& b,
                                                size_t out_len) {
    std::vector<uint64_t> out(out_len, 0);
    for (size_t i = 0; i < a.size() && i < out_len; ++i) {
        if (a[i] == 0) continue;
        const unsigned __int128 ai = a[i];
        const size_t jmax = std::min(b.size(), out_len - i);
        for (size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            unsigned __int128 add = ai * b[j];
            unsigned __int128 cur = out[i + j];
            if (add + cur > (unsigned __int128)UINT64_MAX)
                throw resource_error("exact convolution overflows 64-bit lanes");
            out[i + j] = (uint64_t)(cur + add);
        }
    }
    return out;
}

// Grid DFT with the e(+n j/M) convention used by exponential sums:
// out[j] = sum_n coeffs[n] * exp(+2 pi i n j / M), j = 0..M-1, for arbitrary M
// (Bluestein chirp-z on top of the power-of-two transform). Chirp phases are
// reduced mod 2M in integers before the trig call, so large indices lose no
// accuracy.
inline std::vector<cplx> grid_dft(const std::vector<double>& coeffs, size_t M) {
    const size_t N = coeffs.size();
    if (M == 0) throw domain_error("grid_dft requires M >= 1");
    if ((M & (M - 1)) == 0) {
        // Power-of-two fast path: plain inverse-sign transform.
        std::vector<cplx> z(M, cplx(0.0, 0.0));
        for (size_t i = 0; i < N && i < M; ++i) z[i] = cplx(coeffs[i], 0.0);
        // Frequencies beyond M alias only if N > M; callers enforce M > N.
        if (N > M) throw domain_error("grid_dft grid smaller than coefficient vector");
        fft_detail::fft_pow2(z, true);
        for (auto& x : z) x *= double(M);
        return z;
    }
    if (N > M) throw domain_error("grid_dft grid smaller than coefficient vector");
    const size_t conv_n = fft_detail::next_pow2(N + M - 1);
    const long long two_m = 2LL * (long long)M;
    auto chirp = [&](long long t) -> cplx {
        // exp(+i pi t^2 / M) with t^2 reduced mod 2M exactly.
        const long long r = (long long)(((__int128)t * t) % two_m);
        const double ang = M_PI * double(r) / double(M);
        return cplx(std::cos(ang), std::sin(ang));
    };
    std::vector<cplx> u(conv_n, cplx(0.0, 0.0));
    for (size_t n = 0; n < N; ++n) u[n] = coeffs[n] * chirp((long long)n);
    std::vector<cplx> v(conv_n, cplx(0.0, 0.0));
    for (size_t t = 0; t < M; ++t) v[t] = std::conj(chirp((long long)t));
    for (size_t t = 1; t < N; ++t) v[conv_n - t] = std::conj(chirp((long long)t));
    fft_detail::fft_pow2(u, false);
    fft_detail::fft_pow2(v, false);
    for (size_t i = 0; i < conv_n; ++i) u[i] *= v[i];
    fft_detail::fft_pow2(u, true);
    std::vector<cplx> out(M);
    for (size_t j = 0; j < M; ++j) out[j] = chirp((long long)j) * u[j];
    return out;
}

} // namespace psb
