#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "psb/sequences.hpp"

using namespace psb;

namespace {

using u128 = unsigned __int128;

// p-th power with saturation, enough headroom for every case below.
constexpr u128 pow_saturated = (u128)1 << 126;

u128 pow_sat(uint64_t b, int p) {
    u128 v = 1;
    for (int i = 0; i < p; ++i) {
        if (v > (u128)1 << 120) return pow_saturated;
        v *= b;
    }
    return v;
}

// Largest m with m^p <= X, by binary search on exact integer arithmetic.
// Callers keep X below the saturation sentinel; the doubling cap is a
// backstop so a bad X cannot loop.
uint64_t iroot(u128 X, int p) {
    REQUIRE(X < pow_saturated);
    uint64_t lo = 0, hi = 2;
    while (hi < ((uint64_t)1 << 32) && pow_sat(hi, p) <= X) hi *= 2;
    while (lo + 1 < hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        if (pow_sat(mid, p) <= X) lo = mid;
        else hi = mid;
    }
    return lo;
}

// floor(m^{p/q}) = floor((m^p)^{1/q}), exactly.
uint64_t floor_pow_oracle(uint64_t m, long long p, long long q) {
    return iroot(pow_sat(m, (int)p), (int)q);
}

// t is a floor-power value iff some m satisfies t^q <= m^p < (t+1)^q, i.e.
// the count of m with m^p < (t+1)^q exceeds the count with m^p < t^q.
bool in_floor_image_oracle(uint64_t t, long long p, long long q) {
    const uint64_t hi = iroot(pow_sat(t + 1, (int)q) - 1, (int)p);
    const uint64_t lo = t == 0 ? 0 : iroot(pow_sat(t, (int)q) - 1, (int)p);
    return hi > lo;
}

bool prime_oracle(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Membership decided from scratch: peel the exact k-th power, trial-divide
// for primality, then the integer-root image test.
bool member_oracle(const sequence_spec& spec, uint64_t n) {
    uint64_t t = 0;
    if (spec.k == 1) {
        t = n;
    } else {
        for (uint64_t cand = 1; pow_sat(cand, spec.k) <= n; ++cand)
            if (pow_sat(cand, spec.k) == n) { t = cand; break; }
    }
    if (t == 0) return false;
    if (spec.primes && !prime_oracle(t)) return false;
    if (spec.c == rat(1, 1)) return true;
    return in_floor_image_oracle(t, spec.c.num, spec.c.den);
}

} // namespace

TEST_CASE("floor powers match the integer-root oracle", "[sequences]") {
    const std::vector<rat> cs = {rat(3, 2), rat(6, 5), rat(5, 2), rat(21, 20)};
    for (const rat& c : cs) {
        uint64_t checked = 0;
        for (uint64_t m = 1; m <= 2000; ++m) {
            if (pow_sat(m, (int)c.num) == pow_saturated) break;  // m^21 outgrows u128
            ++checked;
            REQUIRE(floor_pow(m, c) == floor_pow_oracle(m, c.num, c.den));
        }
        REQUIRE(checked >= 50);
    }
    // Beyond the exact-oracle range for c = 21/20, pin values computed with
    // unbounded integer arithmetic: largest t with t^20 <= m^21.
    REQUIRE(floor_pow(100, rat(21, 20)) == 125);
    REQUIRE(floor_pow(500, rat(21, 20)) == 682);
    REQUIRE(floor_pow(1234, rat(21, 20)) == 1761);
    REQUIRE(floor_pow(2000, rat(21, 20)) == 2924);
}

TEST_CASE("membership basics", "[sequences]") {
    const sequence_spec s15(rat(3, 2), 1, false);
    REQUIRE(is_member(s15, 5));
    REQUIRE_FALSE(is_member(s15, 3));
    REQUIRE(is_member(sequence_spec(rat(3, 2), 2, false), 25));
    REQUIRE_THROWS_AS(is_member(s15, 0), domain_error);
}

TEST_CASE("generation matches hand-checked prefixes", "[sequences]") {
    const ground_set g = generate(sequence_spec(rat(3, 2), 1, false), 12);
    REQUIRE(g.elements == std::vector<uint64_t>({1, 2, 5, 8, 11}));

    const ground_set gp = generate(sequence_spec(rat(3, 2), 1, true), 30);
    REQUIRE(gp.elements == std::vector<uint64_t>({2, 5, 11}));

    const ground_set gsq = generate(sequence_spec(rat(1, 1), 2, false), 10);
    REQUIRE(gsq.elements == std::vector<uint64_t>({1, 4, 9}));
}

TEST_CASE("element list and indicator agree", "[sequences]") {
    const ground_set g = generate(sequence_spec(rat(6, 5), 2, true), 20000);
    uint64_t from_ind = 0;
    for (uint64_t n = 0; n < g.indicator.size(); ++n)
        if (g.indicator[n]) ++from_ind;
    REQUIRE(from_ind == g.elements.size());
    for (uint64_t e : g.elements) {
        REQUIRE(e <= 20000);
        REQUIRE(g.indicator[e]);
    }
    for (size_t i = 1; i < g.elements.size(); ++i)
        REQUIRE(g.elements[i - 1] < g.elements[i]);
}

TEST_CASE("round trip against is_member and the oracle", "[sequences]") {
    const std::vector<rat> cs = {rat(1, 1), rat(6, 5), rat(3, 2), rat(5, 2)};
    const uint64_t x_max = 100000;
    const uint64_t oracle_cap = 20000;
    for (const rat& c : cs)
        for (int k = 1; k <= 3; ++k)
            for (int pr = 0; pr <= 1; ++pr) {
                const sequence_spec spec(c, k, pr != 0);
                const ground_set g = generate(spec, x_max);
                uint64_t bad_member = 0, bad_oracle = 0;
                for (uint64_t n = 1; n <= x_max; ++n)
                    if (g.indicator[n] != is_member(spec, n)) ++bad_member;
                for (uint64_t n = 1; n <= oracle_cap; ++n)
                    if (g.indicator[n] != member_oracle(spec, n)) ++bad_oracle;
                INFO("c=" << c.num << "/" << c.den << " k=" << k << " primes=" << pr);
                REQUIRE(bad_member == 0);
                REQUIRE(bad_oracle == 0);
            }
}

TEST_CASE("counting stays within the additive constant", "[sequences]") {
    REQUIRE(count_members(sequence_spec(rat(3, 2), 1, false), 10000) == 464);
    REQUIRE(count_members(sequence_spec(rat(1, 1), 1, false), 7) == 7);
    REQUIRE(count_members(sequence_spec(rat(3, 2), 2, false), 130) == 5);

    for (const rat& c : {rat(3, 2), rat(5, 2)}) {
        const sequence_spec spec(c, 1, false);
        for (double x = 1e3; x <= 1e7 + 1; x *= 10.0) {
            const double cnt = (double)count_members(spec, (uint64_t)x);
            REQUIRE(std::fabs(cnt - std::pow(x, 1.0 / c.value())) <= 2.0);
        }
    }
}

TEST_CASE("counting is monotone", "[sequences]") {
    const sequence_spec spec(rat(6, 5), 1, true);
    uint64_t prev = 0;
    for (uint64_t x = 1; x <= 3000; x += 7) {
        const uint64_t cur = count_members(spec, x);
        REQUIRE(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("prime-restricted counting trend", "[sequences]") {
    const sequence_spec spec(rat(21, 20), 1, true);
    for (double x = 1e5; x <= 1e7 + 1; x *= 10.0) {
        const double cnt = (double)count_members(spec, (uint64_t)x);
        const double ratio = cnt * std::log(x) / std::pow(x, 20.0 / 21.0);
        REQUIRE(ratio >= 0.5);
        REQUIRE(ratio <= 2.0);
    }
}

TEST_CASE("prime sieve", "[sequences]") {
    const std::vector<bool> t = prime_table(10);
    uint64_t cnt = 0;
    for (uint64_t i = 0; i <= 10; ++i)
        if (t[i]) ++cnt;
    REQUIRE(cnt == 4);
    REQUIRE(t[2]);
    REQUIRE(t[7]);
    REQUIRE_FALSE(t[9]);

    const std::vector<bool> big = prime_table(1000000);
    uint64_t pi = 0;
    for (uint64_t i = 0; i <= 1000000; ++i)
        if (big[i]) ++pi;
    REQUIRE(pi == 78498);
}

TEST_CASE("probabilistic primality agrees with trial division", "[sequences]") {
    for (uint64_t n = 0; n <= 5000; ++n) REQUIRE(is_prime_u64(n) == prime_oracle(n));
    REQUIRE(is_prime_u64(1000003));
    REQUIRE_FALSE(is_prime_u64(1000001));  // 101 * 9901
}
