#include <cmath>

#include "doctest.h"
#include "sepint/bounds.hpp"
#include "sepint/enumeration.hpp"

using namespace sepint;

TEST_CASE("kp loop check: published verification points") {
    const auto a = kp_loop_check(std::pow(4.0, 1.25), 1e-4);
    CHECK(a.tail_valid);
    CHECK(a.pass);
    const auto b = kp_loop_check(2.71, 0.05);
    CHECK(b.tail_valid);
    CHECK(b.pass);
    // gamma at 2e^c invalidates the geometric tail; that is not a pass
    const auto c = kp_loop_check(2.0, 1e-4);
    CHECK(!c.tail_valid);
    CHECK(!c.pass);
    CHECK_THROWS_AS(kp_loop_check(-1.0, 1e-4), std::invalid_argument);
}

TEST_CASE("kp loop check is monotone decreasing in gamma") {
    long double prev = kp_loop_check(3.0, 1e-3).lhs;
    for (double g = 3.2; g < 10.0; g += 0.2) {
        const auto r = kp_loop_check(g, 1e-3);
        CHECK(r.lhs < prev);
        prev = r.lhs;
    }
}

TEST_CASE("kp loop coefficients equal the enumeration oracle") {
    for (const auto& [k, nk] : kLoopCountTable) CHECK(nk == count_loops_through_edge(k));
}

TEST_CASE("kp high-temperature check: published verification points") {
    const auto a = kp_ht_check(0.0125, 1e-5);
    CHECK(a.tail_valid);
    CHECK(a.pass);
    const auto b = kp_ht_check(0.1, 0.02);
    CHECK(b.tail_valid);
    CHECK(b.pass);
    const auto z0 = kp_ht_check(0.0, 0.01);
    CHECK(z0.lhs == 0.0L);
    CHECK(z0.pass);
    const auto inv = kp_ht_check(0.5, 0.2);  // 5|z|e^{5a} > 1
    CHECK(!inv.tail_valid);
    CHECK(!inv.pass);
    CHECK_THROWS_AS(kp_ht_check(1.5, 0.01), std::invalid_argument);
}

TEST_CASE("kp high-temperature coefficients equal the enumeration oracle") {
    for (const auto& [k, nk] : kEvenCountTable)
        CHECK(nk == count_even_connected_through_edge(k));
}

TEST_CASE("compression alpha threshold") {
    const auto a = compression_alpha_threshold(4, 8, CompressionRegime::LargeGamma);
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(3.60).epsilon(0.01));

    // infeasible: small product or gamma below 4^{5/4}
    CHECK(!compression_alpha_threshold(1.0, 6.0, CompressionRegime::LargeGamma).has_value());
    CHECK(!compression_alpha_threshold(10.0, 5.0, CompressionRegime::LargeGamma).has_value());

    const auto b = compression_alpha_threshold(6, 1, CompressionRegime::NearOne);
    REQUIRE(b.has_value());
    CHECK(*b > 1.0);
    CHECK(!compression_alpha_threshold(6, 1.2, CompressionRegime::NearOne).has_value());
    CHECK(!compression_alpha_threshold(1.0, 1.0, CompressionRegime::NearOne).has_value());
}

TEST_CASE("alpha threshold is monotone decreasing in lambda within each regime") {
    for (const auto regime : {CompressionRegime::LargeGamma, CompressionRegime::NearOne}) {
        const double gamma = regime == CompressionRegime::LargeGamma ? 8.0 : 1.01;
        double prev = 1e300;
        for (double lam = 4.0; lam <= 60.0; lam *= 1.5) {
            const auto r = compression_alpha_threshold(lam, gamma, regime);
            REQUIRE(r.has_value());
            CHECK(*r < prev);
            prev = *r;
        }
    }
}

TEST_CASE("separation condition") {
    // large gamma always satisfies it once the preconditions hold
    CHECK(separation_condition(1.1, 10.0, 0.45, 1e9));
    // the gamma exponent is negative, so large beta needs gamma > 4^{(1+3d)/4d}:
    // for gamma = 8 that forces delta > 1/3
    CHECK(separation_condition(1.01, 5000.0, 0.34, 8.0));
    CHECK(!separation_condition(1.01, 5000.0, 0.33, 8.0));
    CHECK_THROWS_AS(separation_condition(2.0, 3.0, 0.4, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(separation_condition(1.0, 10.0, 0.6, 8.0), std::invalid_argument);
}

TEST_CASE("integration condition windows") {
    // gamma = 1 sits inside every window
    const auto w1 = integration_condition(1.0, 0.1);
    REQUIRE(w1.has_value());
    CHECK(w1->lo == doctest::Approx(0.125).epsilon(0.01));
    CHECK(w1->hi == doctest::Approx(0.5).epsilon(0.01));

    // gamma = 81/79 with small delta is feasible and epsilon = 0.22 works
    const auto w2 = integration_condition(81.0 / 79.0, 1e-4);
    REQUIRE(w2.has_value());
    CHECK(w2->lo <= 0.22);
    CHECK(0.22 <= w2->hi);

    // beyond the optimum upper bound nothing is feasible
    CHECK(!integration_condition(1.03, 1e-4).has_value());
    CHECK(!integration_condition(0.97, 1e-4).has_value());
    CHECK_THROWS_AS(integration_condition(1.0, 0.3), std::invalid_argument);
}

TEST_CASE("integration epsilon optimum") {
    const auto opt = integration_eps_optimum();
    CHECK(opt.eps == doctest::Approx(0.217812).epsilon(1e-3));
    CHECK(opt.gamma_upper == doctest::Approx(1.02564).epsilon(1e-4));
}

TEST_CASE("regime report aggregates the thresholds") {
    const auto r = regime_report(4.0, 8.0, 0.1);
    REQUIRE(r.alpha_min_large_gamma.has_value());
    CHECK(*r.alpha_min_large_gamma == doctest::Approx(3.59).epsilon(0.01));
    CHECK(!r.alpha_min_near_one.has_value());  // gamma = 8 is far from 1
    CHECK(!r.integration_window.has_value());  // gamma = 8 beyond the bound

    const auto r2 = regime_report(6.0, 1.0, 0.1);
    CHECK(!r2.alpha_min_large_gamma.has_value());
    REQUIRE(r2.alpha_min_near_one.has_value());
    REQUIRE(r2.integration_window.has_value());
}
