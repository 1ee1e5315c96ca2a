#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "psb/subbase.hpp"

using namespace psb;
using Catch::Approx;

namespace {

sample_plan tiny_plan() {
    sample_plan plan;
    plan.spec = sequence_spec(rat(3, 2), 1, false);
    plan.F = reg_var_fn(1.0, 0.5, 0.0, 0.0);
    plan.h = 5;
    plan.lambda = 1.0;
    plan.x_max = 52;
    plan.seed = 11;
    return plan;
}

// E[r_{A,h}](n) by total enumeration of the 2^m subsets of the candidate
// pool, each weighted by its exact inclusion probability. Ordered tuples,
// so five nested loops over the subset.
std::vector<double> expectation_brute(const sample_plan& plan, uint64_t n_max) {
    std::vector<uint64_t> cand;
    std::vector<double> prob;
    const ground_set g = generate(plan.spec, plan.x_max);
    for (uint64_t x : g.elements)
        if (x >= 16) {
            cand.push_back(x);
            prob.push_back(inclusion_probability(plan, x));
        }
    const size_t m = cand.size();
    REQUIRE(m <= 10);
    REQUIRE(plan.h == 5);
    std::vector<double> expect(n_max + 1, 0.0);
    for (size_t mask = 0; mask < (1ull << m); ++mask) {
        double pm = 1.0;
        std::vector<uint64_t> S;
        for (size_t i = 0; i < m; ++i) {
            if (mask & (1ull << i)) {
                pm *= prob[i];
                S.push_back(cand[i]);
            } else {
                pm *= 1.0 - prob[i];
            }
        }
        if (pm == 0.0 || S.empty()) continue;
        for (uint64_t a : S)
            for (uint64_t b : S)
                for (uint64_t c : S)
                    for (uint64_t d : S)
                        for (uint64_t e : S) {
                            const uint64_t n = a + b + c + d + e;
                            if (n <= n_max) expect[n] += pm;
                        }
    }
    return expect;
}

} // namespace

TEST_CASE("plan thresholds and validation", "[subbase]") {
    // k = 1 real-exponent ground set: threshold 2 H0(c) + 1.
    REQUIRE(plan_min_h(sequence_spec(rat(3, 2), 1, false)) == 5);
    REQUIRE(plan_min_h(sequence_spec(rat(1, 1), 1, false)) == 3);

    sample_plan plan = tiny_plan();
    REQUIRE_NOTHROW(plan.validate());

    sample_plan low_h = tiny_plan();
    low_h.h = 4;
    REQUIRE_THROWS_AS(low_h.validate(), domain_error);

    sample_plan flat = tiny_plan();
    flat.F = reg_var_fn(1.0, 0.0, 0.0, 0.0);  // constant target loses to log x
    REQUIRE_THROWS_AS(flat.validate(), domain_error);

    sample_plan steep = tiny_plan();
    steep.F = reg_var_fn(1.0, 2.5, 0.0, 0.0);  // past the h/(ck) - 1 = 7/3 ceiling
    REQUIRE_THROWS_AS(steep.validate(), domain_error);

    sample_plan small = tiny_plan();
    small.x_max = 15;
    REQUIRE_THROWS_AS(small.validate(), domain_error);
}

TEST_CASE("inclusion probabilities", "[subbase]") {
    const sample_plan plan = tiny_plan();
    // omega - beta = (0.5+1)/5 - 2/3 = -11/30, psi term is 1.
    REQUIRE(inclusion_probability(plan, 52) ==
            Approx(std::pow(52.0, -11.0 / 30.0)).epsilon(1e-12));
    for (uint64_t x : {16ull, 18ull, 41ull, 52ull}) {
        const double p = inclusion_probability(plan, x);
        REQUIRE(p > 0.0);
        REQUIRE(p <= 1.0);
    }
    sample_plan zero = tiny_plan();
    zero.lambda = 0.0;
    REQUIRE(inclusion_probability(zero, 20) == 0.0);
    REQUIRE_THROWS_AS(inclusion_probability(plan, 15), domain_error);
}

TEST_CASE("sampling is seed-deterministic", "[subbase]") {
    sample_plan plan = tiny_plan();
    plan.x_max = 10000;
    plan.lambda = 0.8;
    const sample_result a = sample_subbase(plan);
    const sample_result b = sample_subbase(plan);
    REQUIRE(a.A == b.A);
    REQUIRE(a.probs.candidates == b.probs.candidates);

    plan.seed = 12;
    const sample_result c = sample_subbase(plan);
    REQUIRE(a.A != c.A);

    REQUIRE(!a.A.empty());
    for (uint64_t x : a.A) REQUIRE(x >= 16);
    REQUIRE(std::is_sorted(a.A.begin(), a.A.end()));
    REQUIRE(a.probs.expected_size > 0.0);
    REQUIRE(a.probs.max_p <= 1.0);
    REQUIRE(a.probs.candidates >= a.A.size());
    // Observed size within six sigma of the mean for this fixed seed.
    const double sigma = std::sqrt(a.probs.variance_bound);
    REQUIRE(std::fabs((double)a.A.size() - a.probs.expected_size) < 6.0 * sigma + 1.0);
}

TEST_CASE("expectation with diagonal corrections matches enumeration", "[subbase]") {
    const sample_plan plan = tiny_plan();
    const uint64_t n_max = 260;
    const std::vector<double> brute = expectation_brute(plan, n_max);
    const std::vector<double> exact = expected_rep_exact(plan, n_max);
    REQUIRE(exact.size() == brute.size());
    double worst = 0.0;
    for (uint64_t n = 0; n <= n_max; ++n) worst = std::max(worst, std::fabs(exact[n] - brute[n]));
    REQUIRE(worst < 1e-9);

    // The mean-field convolution prices a five-fold repeat at p^5 instead of
    // p, so it must differ visibly from the exact expectation on diagonal n
    // (e.g. n = 5*18) while agreeing off the diagonal.
    const std::vector<double> plain = expected_rep(plan, n_max);
    double gap = 0.0;
    for (uint64_t n = 0; n <= n_max; ++n) gap = std::max(gap, std::fabs(plain[n] - brute[n]));
    REQUIRE(gap > 1e-3);
}

TEST_CASE("calibration hits the target level", "[subbase]") {
    sample_plan plan;
    plan.spec = sequence_spec(rat(3, 2), 1, false);
    plan.F = reg_var_fn(1.0, 0.5, 0.0, 0.0);
    plan.h = 5;
    plan.x_max = 1 << 14;
    plan.seed = 1;
    const std::vector<std::pair<uint64_t, uint64_t>> windows = {{1 << 12, 1 << 13},
                                                                {1 << 13, 1 << 14}};
    const double lambda = calibrate_lambda(plan, windows, 30);
    REQUIRE(lambda > 0.05);
    REQUIRE(lambda < 5.0);

    // At the calibrated lambda the pooled median of Er(n)/F(n) sits at 1.
    plan.lambda = lambda;
    const std::vector<double> er = expected_rep(plan, 1 << 14);
    std::vector<double> ratios;
    for (const auto& [lo, hi] : windows)
        for (uint64_t n = lo; n <= hi; ++n) ratios.push_back(er[n] / std::sqrt((double)n));
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    REQUIRE(ratios[ratios.size() / 2] == Approx(1.0).margin(0.05));

    REQUIRE_THROWS_AS(calibrate_lambda(plan, windows, 2), domain_error);
    REQUIRE_THROWS_AS(calibrate_lambda(plan, {}, 30), domain_error);

    // Windows that start below 16 h are rejected inside the ratio pass.
    const std::vector<std::pair<uint64_t, uint64_t>> bad = {{32, 1 << 13}};
    REQUIRE_THROWS_AS(calibrate_lambda(plan, bad, 3), domain_error);
}

TEST_CASE("window verification", "[subbase]") {
    const sequence_spec spec(rat(3, 2), 1, false);
    const ground_set g = generate(spec, 2000);
    std::vector<uint64_t> A;
    for (uint64_t x : g.elements)
        if (x >= 16) A.push_back(x);
    const rep_vector r = rep_function(A, 3, 4001);

    const std::vector<std::pair<uint64_t, uint64_t>> windows = {{1000, 2000}, {2000, 4000}};
    const verify_report rep = verify_subbase(
        A, 3, [&](uint64_t n) { return r.values[n]; }, windows);
    REQUIRE(rep.global_pass);
    REQUIRE(rep.per_window.size() == 2);
    for (const window_stats& ws : rep.per_window) {
        REQUIRE(ws.mean_ratio == Approx(1.0).epsilon(1e-12));
        REQUIRE(ws.min_ratio == Approx(1.0).epsilon(1e-12));
        REQUIRE(ws.max_ratio == Approx(1.0).epsilon(1e-12));
    }

    // Inflating the target pushes every ratio to 1/8, outside [0.5, 2].
    const verify_report off = verify_subbase(
        A, 3, [&](uint64_t n) { return 8.0 * r.values[n]; }, windows);
    REQUIRE_FALSE(off.global_pass);

    REQUIRE_THROWS_AS(verify_subbase(A, 3, [](uint64_t) { return 0.0; }, windows), domain_error);
    REQUIRE_THROWS_AS(verify_subbase(A, 3, [&](uint64_t n) { return r.values[n]; },
                                     std::vector<std::pair<uint64_t, uint64_t>>{}),
                      domain_error);

    // Empty sample: zero representation everywhere, so positive targets give
    // zero ratios and the band fails without throwing.
    const verify_report empty = verify_subbase(
        {}, 3, [](uint64_t) { return 1.0; }, windows);
    REQUIRE_FALSE(empty.global_pass);
}
