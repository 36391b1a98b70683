#include "doctest.h"

#include <cmath>
#include <numbers>

#include "poro/geometry.hpp"

using namespace poro;

namespace {

Subspace line(double x, double y) { return Subspace::span(2, {{x, y}}); }

// independent projection oracle: distance from a unit vector of V to W,
// maximized over a dense parameter grid of V's unit sphere (m <= 2)
double subspace_distance_oracle(const Subspace& v, const Subspace& w, int samples = 20000) {
    double best = 0.0;
    if (v.dim() == 1) {
        const Vec& b = v.basis()[0];
        best = dist(b, w.project(b));
    } else if (v.dim() == 2) {
        for (int i = 0; i < samples; ++i) {
            const double t = 2.0 * std::numbers::pi * i / samples;
            Vec x = scaled(v.basis()[0], std::cos(t));
            add_scaled_inplace(x, v.basis()[1], std::sin(t));
            best = std::max(best, dist(x, w.project(x)));
        }
    }
    return best;
}

} // namespace

TEST_CASE("dist_to_subspace hand values") {
    CHECK(dist_to_subspace({3, 4}, line(1, 0)) == doctest::Approx(4.0));
    CHECK(dist_to_subspace({2, 0}, line(1, 0)) == doctest::Approx(0.0).epsilon(1e-10));
    const Subspace plane = Subspace::span(3, {{1, 0, 0}, {0, 1, 0}});
    // hand projection: (1,1,1) - (1,1,0) = (0,0,1)
    CHECK(dist_to_subspace({1, 1, 1}, plane) == doctest::Approx(1.0));
    CHECK_THROWS_AS(dist_to_subspace({1, 1, 1}, line(1, 0)), input_error);
}

TEST_CASE("cone_contains on the planar half-aperture cone") {
    const ConeRegion cone({0, 0}, line(1, 0), 0.5, 1.0);
    CHECK(cone_contains(cone, {0.5, 0.0}));
    CHECK_FALSE(cone_contains(cone, {0.0, 0.5}));
    // dist to axis 0.25 < 0.5 * |(0.6, 0.25)| = 0.5 * 0.65
    CHECK(cone_contains(cone, {0.6, 0.25}));
    CHECK_FALSE(cone_contains(cone, {1.2, 0.1})); // outside the ball
    CHECK_THROWS_AS(cone_contains(cone, {1, 0, 0}), input_error);
}

TEST_CASE("halfspace_cone_contains") {
    const Vec e1{1, 0};
    CHECK(halfspace_cone_contains(HalfSpaceCone({0, 0}, Direction(e1), 0.0), {1, 1}));
    CHECK_FALSE(halfspace_cone_contains(HalfSpaceCone({0, 0}, Direction(e1), 1.0), {1, 1}));
    CHECK(halfspace_cone_contains(HalfSpaceCone({0, 0}, Direction(e1), 0.5), {1, 1}));
    // the apex itself is never contained
    CHECK_FALSE(halfspace_cone_contains(HalfSpaceCone({0, 0}, Direction(e1), 0.0), {0, 0}));
}

TEST_CASE("eta constants") {
    const EtaConstants c1 = eta_constants(1.0);
    CHECK(c1.t == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(c1.gamma == doctest::Approx(0.4472135954999579).epsilon(1e-9));

    const EtaConstants small = eta_constants(0.01);
    CHECK(small.gamma >= 0.01 / std::sqrt(5.0));
    CHECK(small.gamma <= 0.01 / 2.0);

    for (int i = 1; i <= 100; ++i) {
        const double eta = i / 100.0;
        const EtaConstants c = eta_constants(eta);
        CHECK(c.gamma == 1.0 / c.t); // gamma is 1/t by definition, bit for bit
        CHECK(std::abs(c.t * c.gamma - 1.0) <= 3e-16);
        CHECK(c.t >= 2.0);
    }
    CHECK_THROWS_AS(eta_constants(0.0), input_error);
    CHECK_THROWS_AS(eta_constants(1.5), input_error);
}

TEST_CASE("rho constants") {
    const RhoConstants a = rho_constants(0.45);
    CHECK(a.t == doctest::Approx(3.1622776601683795).epsilon(1e-9));
    CHECK(a.delta == doctest::Approx(0.7268298765267793).epsilon(1e-9));

    const RhoConstants b = rho_constants(0.49);
    CHECK(b.delta == doctest::Approx(0.2888661009717182).epsilon(1e-9));

    // delta decreases to 0 as rho approaches 1/2
    double prev = a.delta;
    for (double rho : {0.49, 0.499, 0.4999}) {
        const double d = rho_constants(rho).delta;
        CHECK(d < prev);
        CHECK(d > 0.0);
        prev = d;
    }
    CHECK(prev < 0.03);

    CHECK_THROWS_AS(rho_constants(0.41), input_error); // below sqrt(2)-1
    CHECK_THROWS_AS(rho_constants(0.5), input_error);
}

TEST_CASE("escape inequality eta sqrt(s^2-1) >= 1 + gamma s on a grid") {
    // the geometric fact behind the cone escape bound, sampled densely
    for (int i = 1; i <= 100; ++i) {
        const double eta = i / 100.0;
        const EtaConstants c = eta_constants(eta);
        for (int j = 0; j < 100; ++j) {
            const double s = c.t * (1.0 + j / 25.0);
            CHECK(eta * std::sqrt(s * s - 1.0) >= 1.0 + c.gamma * s - 1e-12);
        }
    }
}

TEST_CASE("subspace_distance") {
    const Subspace v = line(1, 0);
    CHECK(subspace_distance(v, v) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(subspace_distance(line(1, 0), line(0, 1)) == doctest::Approx(1.0));

    const double phi = std::numbers::pi / 6.0;
    const Subspace w = line(std::cos(phi), std::sin(phi));
    CHECK(subspace_distance(v, w) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(subspace_distance(v, w) == doctest::Approx(subspace_distance_oracle(v, w)).epsilon(1e-6));

    // sampled-oracle agreement and symmetry for planes in R^4
    Rng rng(31);
    for (int i = 0; i < 12; ++i) {
        const Subspace a = sample_subspace(4, 2, rng);
        const Subspace b = sample_subspace(4, 2, rng);
        const double d = subspace_distance(a, b);
        CHECK(d == doctest::Approx(subspace_distance(b, a)).epsilon(1e-9));
        CHECK(d >= subspace_distance_oracle(a, b) - 1e-6);
        CHECK(d <= subspace_distance_oracle(a, b) + 1e-3);
    }

    // triangle inequality on sampled triples
    for (int i = 0; i < 40; ++i) {
        const Subspace a = sample_subspace(3, 1, rng);
        const Subspace b = sample_subspace(3, 1, rng);
        const Subspace c = sample_subspace(3, 1, rng);
        CHECK(subspace_distance(a, c) <=
              subspace_distance(a, b) + subspace_distance(b, c) + 1e-8);
    }
}

TEST_CASE("sample_frame determinism and orthonormality") {
    const Frame f1 = sample_frame(4, 4, 99);
    const Frame f2 = sample_frame(4, 4, 99);
    REQUIRE(f1.directions.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(f1.directions[i].coords() == f2.directions[i].coords());
        CHECK(norm(f1.directions[i].coords()) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 0; j < i; ++j)
            CHECK(std::abs(dot(f1.directions[i].coords(), f1.directions[j].coords())) <= 1e-10);
    }
    const Frame g = sample_frame(3, 2, 5);
    CHECK(std::abs(dot(g.directions[0].coords(), g.directions[1].coords())) <= 1e-10);
    CHECK_THROWS_AS(sample_frame(2, 3, 1), input_error);
}

TEST_CASE("cone membership is invariant under rigid motions") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(2);
        const Subspace v = sample_subspace(n, 1, rng);
        Vec apex(n);
        for (auto& c : apex) c = rng.uniform(-1, 1);
        const ConeRegion cone(apex, v, 0.4, 0.8);

        const Subspace q = sample_subspace(n, n, rng); // columns form an orthogonal map
        Vec shift(n);
        for (auto& c : shift) c = rng.uniform(-1, 1);
        const auto apply = [&](const Vec& y) {
            Vec out = shift;
            for (std::size_t i = 0; i < n; ++i) add_scaled_inplace(out, q.basis()[i], y[i]);
            return out;
        };

        std::vector<Vec> moved_basis;
        for (const Vec& b : v.basis()) moved_basis.push_back(sub(apply(b), shift));
        const ConeRegion moved(apply(apex), Subspace::span(n, moved_basis), 0.4, 0.8);

        for (int p = 0; p < 20; ++p) {
            Vec y = apex;
            add_scaled_inplace(y, rng.in_unit_ball(n), 1.2);
            const Vec d = sub(y, apex);
            const double margin =
                std::min(0.8 - norm(d), 0.4 * norm(d) - dist_to_subspace(d, v));
            if (std::abs(margin) < 1e-9) continue; // skip knife-edge samples
            CHECK(cone_contains(cone, y) == cone_contains(moved, apply(y)));
        }
    }
}

TEST_CASE("eta = 1 half-space cone contains almost nothing") {
    Rng rng(123);
    const HalfSpaceCone h({0, 0, 0}, Direction(Vec{0, 0, 1}), 1.0);
    for (int i = 0; i < 2000; ++i)
        CHECK_FALSE(halfspace_cone_contains(h, rng.unit_vec(3)));
}

TEST_CASE("grassmannian_net basics") {
    NetOptions opts;
    opts.seed = 11;
    opts.audit_samples = 2000;

    const auto trivial = grassmannian_net(2, 1, 1.0, opts);
    CHECK(trivial.size() == 1);

    const auto net = grassmannian_net(2, 1, 0.3, opts);
    CHECK(net.size() >= 5); // about pi / (2 asin 0.3) caps are needed
    CHECK(net.size() <= 60);

    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        const Subspace w = sample_subspace(2, 1, rng);
        double best = 2.0;
        for (const auto& v : net) best = std::min(best, subspace_distance(v, w));
        CHECK(best < 0.3);
    }
}

TEST_CASE("net inclusion: X(0, V_i, alpha/2) sits inside X(0, W, alpha)") {
    const double alpha = 0.6;
    NetOptions opts;
    opts.seed = 4;
    opts.audit_samples = 2000;
    const auto net = grassmannian_net(3, 1, alpha / 2.0, opts);

    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const Subspace w = sample_subspace(3, 1, rng);
        double best = 2.0;
        std::size_t best_i = 0;
        for (std::size_t vi = 0; vi < net.size(); ++vi) {
            const double d = subspace_distance(net[vi], w);
            if (d < best) {
                best = d;
                best_i = vi;
            }
        }
        REQUIRE(best < alpha / 2.0);
        const ConeRegion narrow({0, 0, 0}, net[best_i], alpha / 2.0, 1.0);
        const ConeRegion wide({0, 0, 0}, w, alpha, 1.0);
        for (int p = 0; p < 60; ++p) {
            Vec y = rng.in_unit_ball(3);
            if (norm(y) < 1e-6) continue;
            if (cone_contains(narrow, y)) CHECK(cone_contains(wide, y));
        }
    }
}
