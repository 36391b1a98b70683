#include "doctest.h"

#include <cmath>

#include "poro/dimension.hpp"
#include "poro/rng.hpp"
#include "poro/sets.hpp"

using namespace poro;

namespace {

// independent oracle for the n=2, l=3 carpet: solve 3(x + x^2 + x^3) = 1 for
// x = 2^-s by plain bisection on x
double carpet23_oracle() {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double x = 0.5 * (lo + hi);
        (3.0 * (x + x * x + x * x * x) < 1.0 ? lo : hi) = x;
    }
    const double x = 0.5 * (lo + hi);
    return -std::log2(x);
}

} // namespace

TEST_CASE("box_counts basics") {
    const DyadicCubeSet full = DyadicCubeSet::full_cube(2, 6);
    const BoxCountSeries s = box_counts(full, {1, 2, 3, 6});
    CHECK(s.counts[0] == 4);
    CHECK(s.counts[1] == 16);
    CHECK(s.counts[2] == 64);
    CHECK(s.counts[3] == std::uint64_t(1) << 12);

    const DyadicCubeSet one = DyadicCubeSet::single_cell(2, 6);
    for (auto c : box_counts(one, {1, 3, 6}).counts) CHECK(c == 1);

    CHECK_THROWS_AS(box_counts(one, {7}), input_error);
}

TEST_CASE("box counts of the 1/3 Cantor raster track the scaling law") {
    const DyadicCubeSet r = rasterize(cantor_ifs(1.0 / 3.0), 11);
    const double dim = std::log(2.0) / std::log(3.0);
    const BoxCountSeries s = box_counts(r, {3, 5, 7, 9});
    for (std::size_t i = 0; i < s.depths.size(); ++i) {
        const double ideal = std::pow(2.0, dim * s.depths[i]);
        CHECK(static_cast<double>(s.counts[i]) >= ideal / 4.0);
        CHECK(static_cast<double>(s.counts[i]) <= ideal * 4.0);
    }
}

TEST_CASE("minkowski_dim calibration") {
    const DimensionEstimate square = minkowski_dim(DyadicCubeSet::full_cube(2, 10), 4, 10);
    CHECK(std::abs(square.value - 2.0) <= 0.01);

    const DimensionEstimate seg = minkowski_dim(DyadicCubeSet::segment(2, 10), 4, 10);
    CHECK(std::abs(seg.value - 1.0) <= 0.02);

    const DyadicCubeSet cantor = rasterize(cantor_ifs(0.3), 11);
    const DimensionEstimate c = minkowski_dim(cantor, 5, 11);
    CHECK(std::abs(c.value - 0.5757166424934450) <= 0.05);

    const DimensionEstimate degenerate = minkowski_dim(DyadicCubeSet::single_cell(2, 8), 4, 8);
    CHECK(degenerate.value == 0.0);
    CHECK(degenerate.stderr_ == 0.0);

    CHECK_THROWS_AS(minkowski_dim(cantor, 9, 11), input_error); // window too short
}

TEST_CASE("moran_dimension closed forms and exactness") {
    CHECK(moran_dimension({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moran_dimension({0.25, 0.25}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(moran_dimension({0.5, 0.5, 0.5}) ==
          doctest::Approx(1.5849625007211562).epsilon(1e-12));

    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> ratios;
        const int count = 2 + static_cast<int>(rng.uniform_index(6));
        for (int i = 0; i < count; ++i) ratios.push_back(rng.uniform(0.05, 0.9));
        const double s = moran_dimension(ratios);
        double total = 0.0;
        for (double r : ratios) total += std::pow(r, s);
        CHECK(std::abs(total - 1.0) <= 1e-10);
    }

    CHECK_THROWS_AS(moran_dimension({}), input_error);
    CHECK_THROWS_AS(moran_dimension({0.5}), input_error);
    CHECK_THROWS_AS(moran_dimension({0.5, 1.2}), input_error);
}

TEST_CASE("corner_carpet_dimension") {
    CHECK(std::abs(corner_carpet_dimension(2, 1) - 1.5849625007211562) <= 1e-9);
    CHECK(std::abs(corner_carpet_dimension(2, 3) - carpet23_oracle()) <= 1e-3);

    // agrees with the Moran solver on the ratio multiset
    for (int l : {1, 2, 3, 4}) {
        const double a = corner_carpet_dimension(2, l);
        const double b = moran_dimension(corner_carpet_ifs(2, l).ratios());
        CHECK(std::abs(a - b) <= 1e-10);
    }

    // increasing in l with supremum n
    double prev = 0.0;
    for (int l = 1; l <= 12; ++l) {
        const double s = corner_carpet_dimension(2, l);
        CHECK(s > prev);
        CHECK(s < 2.0);
        prev = s;
    }
    CHECK(2.0 - prev < 1e-4);
}

TEST_CASE("dimension bounds") {
    CHECK(bound_full(2, 0.1) == doctest::Approx(1.9999549157799722).epsilon(1e-12));
    double prev = 2.0;
    for (double rho : {0.05, 0.15, 0.25, 0.35, 0.45, 0.49}) {
        const double b = bound_full(2, rho);
        CHECK(b < 2.0);
        CHECK(b < prev);
        prev = b;
    }

    CHECK(bound_directed(2, 2, 0.3) == doctest::Approx(bound_full(2, 0.3)).epsilon(1e-12));
    CHECK(bound_directed(2, 1, 0.2) == doctest::Approx(1.9897986055340321).epsilon(1e-12));
    CHECK(bound_directed(3, 1, 0.2) > bound_directed(2, 1, 0.2)); // grows with n
    CHECK(bound_directed(2, 1, 0.3) < bound_directed(2, 1, 0.2)); // falls with rho

    CHECK_THROWS_AS(bound_full(2, 0.6), input_error);
    CHECK_THROWS_AS(bound_directed(2, 3, 0.2), input_error);
}

TEST_CASE("density_profile on the uniform square") {
    const NaturalMeasure mu = natural_measure(DyadicCubeSet::full_cube(2, 8));
    const Vec x{0.5, 0.5};
    const auto prof = density_profile(mu, x, 2.0, {0.4, 0.3, 0.2, 0.1});
    for (const auto& p : prof) {
        // area oracle: mass(B(x,r)) ~ pi r^2, so the ratio approaches pi
        CHECK(std::abs(p.ratio - 3.141592653589793) <= 0.25);
    }

    // s far above the mass dimension: ratios blow up down the ladder
    const auto blow = density_profile(mu, x, 3.5, {0.4, 0.2, 0.1});
    CHECK(blow.back().ratio > 4.0 * blow.front().ratio);

    // s far below: ratios collapse
    const auto fall = density_profile(mu, x, 0.5, {0.4, 0.2, 0.1});
    CHECK(fall.back().ratio < 0.5 * fall.front().ratio);

    CHECK_THROWS_AS(density_profile(mu, x, 2.0, {0.001}), resolution_error);
}
