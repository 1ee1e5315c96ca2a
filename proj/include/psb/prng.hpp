#pragma once

#include <cstdint>

namespace psb {

// splitmix64 finalizer (Vigna). Used both as a sequential generator and as the
// mixing core of the counter-based per-element stream.
inline uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr uint64_t splitmix64_gamma = 0x9e3779b97f4a7c15ull;

// Sequential splitmix64 stream.
struct splitmix64 {
    uint64_t state;
    explicit splitmix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += splitmix64_gamma;
        return splitmix64_mix(state);
    }
    // Uniform in [0,1) from the top 53 bits.
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }
    // Uniform integer in [lo, hi] (inclusive); rejection-free modulo bias is
    // irrelevant at the ranges used (hi - lo << 2^64).
    long long next_range(long long lo, long long hi) {
        return lo + (long long)(next() % (unsigned long long)(hi - lo + 1));
    }
};

// Counter-based splittable stream keyed by (seed, counter): the stream state
// is one splitmix64 step of the seed, and the output is the stream evaluated
// at the counter. Evaluation order and thread count cannot change the value.
inline uint64_t keyed_bits(uint64_t seed, uint64_t counter) {
    uint64_t key = splitmix64_mix(seed + splitmix64_gamma);
    return splitmix64_mix(key + counter * splitmix64_gamma);
}

inline double keyed_unit(uint64_t seed, uint64_t counter) {
    return double(keyed_bits(seed, counter) >> 11) * 0x1.0p-53;
}

} // namespace psb
