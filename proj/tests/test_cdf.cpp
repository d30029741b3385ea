#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "subsums/cdf.hpp"
#include "subsums/selftest.hpp"

using namespace subsums;

TEST_CASE("binary bounds at x = 1/2, level 4", "[cdf]") {
    const CdfBounds bounds = cdf_bounds(binary_uniform_model(), Rat(1, 2), 4);
    CHECK(bounds.lo == Rat(7, 16));
    CHECK(bounds.hi == Rat(1, 2));
    CHECK(bounds.x == Rat(1, 2));
    CHECK(bounds.level == 4);
}

TEST_CASE("bounds saturate outside the support", "[cdf]") {
    const Model model = ternary_015_uniform_model();
    for (std::uint32_t n : {0u, 3u, 6u}) {
        const CdfBounds at_zero = cdf_bounds(model, Rat(0), n);
        CHECK(at_zero.lo == 0);
        CHECK(at_zero.hi == 0);

        const CdfBounds below = cdf_bounds(model, Rat(-3, 7), n);
        CHECK(below.lo == 0);
        CHECK(below.hi == 0);

        const CdfBounds above = cdf_bounds(model, tail_sup(model, 0) + Rat(1, 100), n);
        CHECK(above.lo == 1);
        CHECK(above.hi == 1);
    }
}

TEST_CASE("bounds bracket the uniform binary identity", "[cdf]") {
    const Model model = binary_uniform_model();
    for (std::uint32_t n : {4u, 8u, 12u}) {
        const Rat width_bound = Rat(2, int_pow(Int(2), n));
        for (int i = 0; i <= 32; ++i) {
            const Rat x(i, 32);
            const CdfBounds bounds = cdf_bounds(model, x, n);
            CHECK(bounds.lo <= x);
            CHECK(x <= bounds.hi);
            CHECK(bounds.hi - bounds.lo <= width_bound);
        }
    }
}

TEST_CASE("bounds are within [0,1] and ordered", "[cdf]") {
    const Model model = constant_model(3, digit_column({0, 2, 7}),
                                       prob_column({Rat(1, 6), Rat(1, 3), Rat(1, 2)}));
    for (int i = -4; i <= 40; ++i) {
        const CdfBounds bounds = cdf_bounds(model, Rat(i, 10), 5);
        CHECK(bounds.lo >= 0);
        CHECK(bounds.lo <= bounds.hi);
        CHECK(bounds.hi <= 1);
    }
}

TEST_CASE("bounds tighten monotonically in the level", "[cdf]") {
    const Model model = ternary_015_uniform_model();
    for (int i = 0; i <= 10; ++i) {
        const Rat x = Rat(5, 2) * i / 10;
        CdfBounds prev = cdf_bounds(model, x, 0);
        for (std::uint32_t n = 1; n <= 8; ++n) {
            const CdfBounds next = cdf_bounds(model, x, n);
            CHECK(next.lo >= prev.lo);
            CHECK(next.hi <= prev.hi);
            prev = next;
        }
    }
}

TEST_CASE("bounds are monotone in x", "[cdf]") {
    const Model model = ternary_015_skewed_model();
    CdfBounds prev = cdf_bounds(model, Rat(0), 6);
    for (int i = 1; i <= 25; ++i) {
        const CdfBounds next = cdf_bounds(model, Rat(i, 10), 6);
        CHECK(next.lo >= prev.lo);
        CHECK(next.hi >= prev.hi);
        prev = next;
    }
}

TEST_CASE("width bound under the complete-residue hypotheses", "[cdf]") {
    // hi - lo <= (1 + ceil(tail_sup(n) s^n)) s^-n; for digits (0,1,5) the
    // ceiling is ceil(5/2) = 3, so the width is at most 4/3^n.
    const Model model = ternary_015_uniform_model();
    for (std::uint32_t n : {2u, 5u, 8u}) {
        const Rat bound = Rat(4, int_pow(Int(3), n));
        for (int i = 0; i <= 20; ++i) {
            const Rat x = Rat(5, 2) * i / 20;
            const CdfBounds bounds = cdf_bounds(model, x, n);
            CHECK(bounds.hi - bounds.lo <= bound);
        }
    }
}

TEST_CASE("singular example saturates past its active support", "[cdf]") {
    // Probabilities (1/2, 1/2, 0) put all mass on digits {0,1}, whose sums
    // top out at 1/2; the curve is flat at 1 long before tail_sup(0) = 5/2.
    const Model model = ternary_015_skewed_model();
    const CdfBounds bounds = cdf_bounds(model, Rat(3, 5), 6);
    CHECK(bounds.lo == 1);
    CHECK(bounds.hi == 1);
}

TEST_CASE("cdf_curve matches pointwise evaluation", "[cdf]") {
    const Model model = ternary_015_uniform_model();
    std::vector<Rat> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(Rat(5, 2) * i / 10);
    const auto curve = cdf_curve(model, grid, 6);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CdfBounds single = cdf_bounds(model, grid[i], 6);
        CHECK(curve[i].x == grid[i]);
        CHECK(curve[i].lo == single.lo);
        CHECK(curve[i].hi == single.hi);
    }
    CHECK(curve.front().lo == 0);
    CHECK(curve.front().hi == 0);
    CHECK(curve.back().hi == 1);
}

TEST_CASE("lipschitz_check reports exact ratio 1 for residue systems", "[cdf]") {
    const LipschitzReport ternary = lipschitz_check(ternary_015_uniform_model(), 8);
    CHECK(ternary.ratio == 1);
    CHECK(ternary.satisfied);
    CHECK(ternary.max_mass == Rat(1, int_pow(Int(3), 8)));

    CHECK(lipschitz_check(binary_uniform_model(), 0).ratio == 1);

    const Model spread = constant_model(2, digit_column({0, 3}),
                                        prob_column({Rat(1, 2), Rat(1, 2)}));
    CHECK(lipschitz_check(spread, 6).ratio == 1);
}

TEST_CASE("lipschitz_check rejects models outside the guaranteed case", "[cdf]") {
    CHECK_THROWS_AS(lipschitz_check(ternary_015_skewed_model(), 4), unsupported_error);
    CHECK_THROWS_AS(lipschitz_check(ternary_013_uniform_model(), 4), unsupported_error);
}

TEST_CASE("cdf respects the resource guard", "[cdf]") {
    CHECK_THROWS_AS(cdf_bounds(ternary_015_uniform_model(), Rat(1), 40), resource_limit_error);
}
