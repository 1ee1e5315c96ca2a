#pragma once

#include <cstdint>
#include <vector>

#include "psb/errors.hpp"

namespace psb {

// Largest sieve we are willing to materialize; beyond this the tooling is
// being asked for something it was not sized for.
inline constexpr uint64_t sieve_cap = 100000000ULL;

// Eratosthenes up to and including `limit`.
inline std::vector<uint64_t> sieve_primes(uint64_t limit) {
    if (limit > sieve_cap) throw resource_error("sieve limit exceeds supported range");
    std::vector<uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (uint64_t p = 2; p * p <= limit; ++p) {
        if (comp[p]) continue;
        for (uint64_t m = p * p; m <= limit; m += p) comp[m] = true;
    }
    for (uint64_t n = 2; n <= limit; ++n)
        if (!comp[n]) primes.push_back(n);
    return primes;
}

// Primality bit-table up to `limit` (index i true iff i prime).
inline std::vector<bool> prime_table(uint64_t limit) {
    if (limit > sieve_cap) throw resource_error("sieve limit exceeds supported range");
    std::vector<bool> isp(limit + 1, true);
    isp[0] = false;
    if (limit >= 1) isp[1] = false;
    for (uint64_t p = 2; p * p <= limit; ++p) {
        if (!isp[p]) continue;
        for (uint64_t m = p * p; m <= limit; m += p) isp[m] = false;
    }
    return isp;
}

namespace prime_detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace prime_detail

// Deterministic Miller-Rabin over the full 64-bit range.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = prime_detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = prime_detail::mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Euler's totient by trial division; inputs here are modulus-sized (small).
inline uint64_t euler_phi(uint64_t n) {
    uint64_t result = n;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

// Moebius function by trial division.
inline int moebius(uint64_t n) {
    if (n == 0) throw domain_error("moebius undefined at 0");
    int mu = 1;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

} // namespace psb
