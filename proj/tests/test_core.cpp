#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "psb/cli_config.hpp"
#include "psb/core.hpp"
#include "psb/prng.hpp"

using namespace psb;
using Catch::Approx;

TEST_CASE("decimal parsing is exact", "[core]") {
    REQUIRE(parse_decimal("1.5") == rat(3, 2));
    REQUIRE(parse_decimal("1.05") == rat(21, 20));
    REQUIRE(parse_decimal("2") == rat(2, 1));
    REQUIRE(parse_decimal("0.0125") == rat(1, 80));
    REQUIRE(parse_decimal("-0.5") == rat(-1, 2));
    REQUIRE_THROWS_AS(parse_decimal(""), domain_error);
    REQUIRE_THROWS_AS(parse_decimal("1.2.3"), domain_error);
    REQUIRE_THROWS_AS(parse_decimal("abc"), domain_error);
    REQUIRE(decimal_string(parse_decimal("1.25")) == "1.25");
    REQUIRE(decimal_string(rat(3, 2)) == "1.5");
}

TEST_CASE("spec validation", "[core]") {
    REQUIRE_NOTHROW(sequence_spec(rat(3, 2), 1, false));
    REQUIRE_NOTHROW(sequence_spec(rat(1, 1), 3, true));
    REQUIRE_THROWS_AS(sequence_spec(rat(2, 1), 1, false), domain_error);
    REQUIRE_THROWS_AS(sequence_spec(rat(9, 10), 1, false), domain_error);
    REQUIRE_THROWS_AS(sequence_spec(rat(3, 2), 0, false), domain_error);
}

TEST_CASE("tuple-length thresholds", "[core]") {
    REQUIRE(h0_integer(1) == 1);
    REQUIRE(h0_integer(4) == 8);
    // k=5 leaves the power-of-two branch: 5*4/2 + floor(sqrt(12)) = 13.
    REQUIRE(h0_integer(5) == 13);
    for (int k = 1; k < 50; ++k) REQUIRE(h0_integer(k) <= h0_integer(k + 1));
    REQUIRE_THROWS_AS(h0_integer(0), domain_error);

    REQUIRE(h0_real(rat(3, 2)) == 2);
    REQUIRE(h0_real(rat(5, 2)) == 21);  // floor(2c)=5, 6*7/2
    REQUIRE(h0_real(rat(37, 10)) == 36);
    REQUIRE_THROWS_AS(h0_real(rat(1, 1)), domain_error);
    REQUIRE_THROWS_AS(h0_real(rat(3, 1)), domain_error);
}

// Independent characterization: K(k) is the largest modulus q such that
// a^k = 1 (mod q) for every a coprime to q. Brute-force the maximum over
// q <= 300 and compare.
static long long brute_cap_K(int k) {
    long long best = 1;
    for (long long q = 1; q <= 300; ++q) {
        bool ok = true;
        for (long long a = 1; a < q && ok; ++a) {
            if (std::gcd(a, q) != 1) continue;
            long long p = 1;
            for (int i = 0; i < k; ++i) p = (p * a) % q;
            if (p % q != 1 % q) ok = false;
        }
        if (ok) best = q;
    }
    return best;
}

TEST_CASE("congruence modulus K(k)", "[core]") {
    REQUIRE(cap_K(2) == 24);
    REQUIRE(cap_K(3) == 2);
    REQUIRE(cap_K(4) == 240);
    REQUIRE(cap_K(5) == 2);
    for (int k = 1; k <= 4; ++k) REQUIRE(cap_K(k) == brute_cap_K(k));
}

TEST_CASE("density loss thresholds", "[core]") {
    const auto p22 = psw_threshold(2, rat(5, 4));
    REQUIRE(p22.has_value());
    REQUIRE(*p22 == Approx(0.0125).epsilon(1e-12));
    const auto p26 = psw_threshold(2, rat(6, 5));
    REQUIRE(p26.has_value());
    REQUIRE(*p26 == Approx(1.0 / 4.8 - 3.0 / 16.0).epsilon(1e-12));
    REQUIRE_FALSE(psw_threshold(2, rat(3, 2)).has_value());
    const auto p3 = psw_threshold(3, rat(21, 20));
    REQUIRE(p3.has_value());
    REQUIRE(*p3 == Approx(8.0 / (45.0 * 1.05) - 1.0 / 6.0).epsilon(1e-10));
    REQUIRE_THROWS_AS(psw_threshold(1, rat(11, 10)), domain_error);
}

TEST_CASE("prime-variant thresholds", "[core]") {
    const auto g1 = pswg_threshold(1, rat(11, 10));
    REQUIRE(g1.has_value());
    REQUIRE(*g1 == Approx((73.0 / 1.1 - 64.0) / 86.0).epsilon(1e-12));
    REQUIRE_FALSE(pswg_threshold(1, rat(6, 5)).has_value());  // 1.2 >= 73/64
    const auto g2 = pswg_threshold(2, rat(21, 20));
    REQUIRE(g2.has_value());
    REQUIRE(*g2 == Approx((82.0 / 1.05 - 75.0) / 174.0).epsilon(1e-12));
    const auto w = working_pstar(2, rat(21, 20));
    REQUIRE(w.has_value());
    REQUIRE(*w == Approx(0.9 * *g2).epsilon(1e-12));
}

TEST_CASE("gamma ratio", "[core]") {
    REQUIRE(gamma_ratio(0.37, 1) == Approx(1.0).epsilon(1e-14));
    REQUIRE(gamma_ratio(0.5, 2) == Approx(M_PI).epsilon(1e-12));
    REQUIRE(gamma_ratio(1.0, 3) == Approx(0.5).epsilon(1e-12));
    for (int i = 1; i <= 30; ++i) {
        const double w = 0.1 * i;
        REQUIRE(gamma_fn(w + 1.0) == Approx(w * gamma_fn(w)).epsilon(1e-12));
    }
    REQUIRE_THROWS_AS(gamma_ratio(0.0, 2), domain_error);
}

TEST_CASE("main term", "[core]") {
    main_term_params p1(1.5, 1, 0.7, false);
    REQUIRE(main_term(p1, 100) == Approx(std::pow(100.0, -0.3) / 1.5).epsilon(1e-12));
    main_term_params p2(1.5, 2, 0.5, false);
    // h*omega = 1 makes the N power drop out: pi / c^2.
    REQUIRE(main_term(p2, 10) == Approx(M_PI / 2.25).epsilon(1e-12));
    REQUIRE(main_term(p2, 123456) == Approx(M_PI / 2.25).epsilon(1e-12));
    main_term_params p3(1.0, 2, 1.0, false);
    REQUIRE(main_term(p3, 10) == Approx(10.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(main_term_params(1.5, 2, 0.0, false), domain_error);
}

TEST_CASE("slowly varying target evaluation", "[core]") {
    REQUIRE(regvar_eval(reg_var_fn(1, 0.5, 0, 0), 100.0) == Approx(10.0).epsilon(1e-12));
    const double e4 = std::exp(4.0);
    REQUIRE(regvar_eval(reg_var_fn(2, 0, 1, 0), e4) == Approx(8.0).epsilon(1e-12));
    REQUIRE(regvar_eval(reg_var_fn(1, 0, 0, 0), 16.0) == Approx(1.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(regvar_eval(reg_var_fn(1, 0.5, 0, 0), 15.0), domain_error);
    REQUIRE_THROWS_AS(reg_var_fn(0.0, 0.5, 0, 0), domain_error);
}

TEST_CASE("target admissibility report", "[core]") {
    const sequence_spec spec(rat(3, 2), 1, false);
    std::vector<double> grid;
    for (double x = 100.0; x <= 1e6; x *= 10.0) grid.push_back(x);

    const regvar_report ok = regvar_admissible(reg_var_fn(1, 0.5, 0, 0), spec, 5, grid);
    REQUIRE(ok.grows_faster_than_log);
    REQUIRE(ok.under_ceiling);
    REQUIRE(ok.ceiling_margin < 1.0);

    const regvar_report flat = regvar_admissible(reg_var_fn(1, 0, 0, 0), spec, 5, grid);
    REQUIRE_FALSE(flat.grows_faster_than_log);

    // Matching exponent with a constant 10x past the ceiling constant.
    const double kappa = 5.0 / 1.5 - 1.0;
    const double big = 10.0 * std::pow(gamma_fn(1.0 + 1.0 / 1.5), 5.0) / gamma_fn(5.0 / 1.5);
    const regvar_report over = regvar_admissible(reg_var_fn(big, kappa, 0, 0), spec, 5, grid);
    REQUIRE_FALSE(over.under_ceiling);
}

TEST_CASE("counter-based randomness", "[core]") {
    REQUIRE(keyed_bits(1, 42) == keyed_bits(1, 42));
    REQUIRE(keyed_bits(1, 42) != keyed_bits(2, 42));
    REQUIRE(keyed_bits(1, 42) != keyed_bits(1, 43));
    for (uint64_t i = 0; i < 1000; ++i) {
        const double u = keyed_unit(7, i);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    splitmix64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const long long v = rng.next_range(3, 17);
        REQUIRE(v >= 3);
        REQUIRE(v <= 17);
    }
    // Streams from equal seeds agree.
    splitmix64 a(9), b(9);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("experiment config round trip", "[core][cli]") {
    experiment_config cfg;
    cfg.command = "circle transfer";
    cfg.flags["--c"] = "1.2";
    cfg.flags["--k"] = "2";
    cfg.flags["--xgrid"] = "1000,10000";
    cfg.seed_list = {3, 5};
    cfg.output_dir = "out";
    cfg.parallelism = 2;

    const std::string j = config_to_json(cfg);
    const experiment_config back = config_from_json(j);
    REQUIRE(back == cfg);
    REQUIRE(config_to_json(back) == j);
    REQUIRE(config_hash(cfg) == config_hash(back));

    experiment_config other = cfg;
    other.flags["--c"] = "1.25";
    REQUIRE(config_hash(other) != config_hash(cfg));
}
