#include <cmath>
#include <numbers>

#include "cnsg/bounds.hpp"
#include "cnsg/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cnsg;

TEST_CASE("area constant") {
    const double four_pi = 4 * std::numbers::pi;
    const double c = area_constant(2, 1);
    CHECK(c > four_pi);
    CHECK(c <= four_pi * 1.02);
    CHECK(c == doctest::Approx(four_pi * 1.01).epsilon(1e-12));
    // the sweep-out bound wins once it exceeds the genus term
    CHECK(area_constant(2, 20) == doctest::Approx(20 * 1.01).epsilon(1e-12));
    // genus 1: the genus term vanishes
    CHECK(area_constant(1, 0.5) == doctest::Approx(0.505).epsilon(1e-12));
    CHECK_THROWS_AS(area_constant(0, 1), InvalidInput);
    CHECK_THROWS_AS(area_constant(2, 0), InvalidInput);
    CHECK_THROWS_AS(area_constant(2, 1, 1.0), InvalidInput);
}

TEST_CASE("delta constant") {
    CHECK(std::abs(delta_constant(8, 2) - 0.99) < 1e-9);
    CHECK(std::abs(delta_constant(80, 2) - 1.98) < 1e-9);
    CHECK(delta_constant(8, 2) < std::min(2.0, 8.0 / 8));
    CHECK_THROWS_AS(delta_constant(0, 2), InvalidInput);
    CHECK_THROWS_AS(delta_constant(8, -1), InvalidInput);
}

TEST_CASE("weight budget") {
    CHECK(weight_budget(2, area_constant(2, 1)) == 27);
    CHECK(weight_budget(1.5, 1) == 3);
    CHECK(weight_budget(1.1, 9) == 11);
    CHECK_THROWS_AS(weight_budget(1, 5), InvalidInput);
    CHECK_THROWS_AS(weight_budget(2, 0), InvalidInput);
    CHECK_THROWS_AS(weight_budget(2, 1e12), InvalidInput);
}

TEST_CASE("config files") {
    const BoundsConfig c = load_bounds_config(testing::data("bounds_genus2.cfg"));
    const Bounds b = compute_bounds(c);
    CHECK(b.W == 27);
    CHECK(std::abs(b.delta - 0.99) < 1e-9);
    CHECK(b.C == doctest::Approx(4 * std::numbers::pi * 1.01).epsilon(1e-12));

    CHECK(parse_bounds_config("K = 3 # comment\n\ngenus=3\n").genus == 3);
    CHECK_THROWS_AS(parse_bounds_config("K 3\n"), ParseError);
    CHECK_THROWS_AS(parse_bounds_config("K = three\n"), ParseError);
    CHECK_THROWS_AS(parse_bounds_config("colour = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_bounds_config("genus = 2.5\n"), ParseError);
    CHECK_THROWS_AS(compute_bounds(parse_bounds_config("K = 0.5\n")), InvalidInput);
    CHECK_THROWS_AS(compute_bounds(parse_bounds_config("delta0 = -1\n")), InvalidInput);
    CHECK_THROWS_AS(load_bounds_config("/nonexistent/bounds.cfg"), InvalidInput);
}

TEST_CASE("property: the budget tracks K(C+1) from below") {
    testing::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const double K = 1.0 + (1 + rng.below(1000)) / 100.0;
        const double C = (1 + rng.below(10000)) / 100.0;
        const int W = weight_budget(K, C);
        CHECK(W <= K * (C + 1) + 1e-9);
        CHECK(W + 1 > K * (C + 1));
    }
}
