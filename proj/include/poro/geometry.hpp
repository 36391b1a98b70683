#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "poro/rng.hpp"
#include "poro/vec.hpp"

namespace poro {

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;

// Unit vector of S^{n-1}. The checked constructor rejects non-unit input;
// Direction::of normalizes.
class Direction {
public:
    explicit Direction(Vec coords);
    static Direction of(Vec coords);

    const Vec& coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }

private:
    struct unchecked_tag {};
    Direction(Vec coords, unchecked_tag) : coords_(std::move(coords)) {}
    Vec coords_;
};

// Linear subspace of R^n given by an orthonormal basis (m vectors). m may be
// 0 (the trivial subspace, empty basis).
class Subspace {
public:
    Subspace(std::size_t n, std::vector<Vec> orthonormal_basis);

    // Orthonormalizes the spanning set; rejects rank-deficient input.
    static Subspace span(std::size_t n, const std::vector<Vec>& spanning);

    std::size_t ambient_dim() const noexcept { return n_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<Vec>& basis() const noexcept { return basis_; }

    Vec project(const Vec& y) const;
    // Orthonormal basis of the orthogonal complement.
    std::vector<Vec> complement_basis() const;

private:
    std::size_t n_;
    std::vector<Vec> basis_;
};

// H(x, theta, eta) = { y : (y - x) . theta > eta |y - x| }. eta = 0 is the
// open half-space H(x, theta).
struct HalfSpaceCone {
    Vec apex;
    Direction theta;
    double eta = 0.0;

    HalfSpaceCone(Vec apex_, Direction theta_, double eta_);
};

// X(x, r, V, alpha) = { y in B(x, r) : dist(y - x, V) < alpha |y - x| }.
// r may be infinity for the unbounded cone X(x, V, alpha). The ball part is
// taken open (strict |y - x| < r); callers needing the closed variant test
// the ball separately with in_closed_ball.
struct ConeRegion {
    Vec apex;
    Subspace axis;
    double alpha = 1.0;
    double radius = 0.0;

    ConeRegion(Vec apex_, Subspace axis_, double alpha_, double radius_);
};

// k orthonormal directions anchored at a point; models the hole directions
// (z_i - x)/|z_i - x| of the k-porosity definition.
struct Frame {
    Vec origin;
    std::vector<Direction> directions;
};

double dist_to_subspace(const Vec& y, const Subspace& v);

// Membership predicates evaluate strict inequalities shifted by `slack`:
// slack > 0 loosens, slack < 0 tightens. Default is the raw float compare.
bool cone_contains(const ConeRegion& cone, const Vec& y, double slack = 0.0);
bool halfspace_cone_contains(const HalfSpaceCone& h, const Vec& y, double slack = 0.0);

// t(eta) = sqrt((eta^2 + 4) / eta^2) and gamma(eta) = 1 / t(eta); the pair
// controlling how far a unit ball must sit before it clears a narrower cone.
struct EtaConstants {
    double t;
    double gamma;
};
EtaConstants eta_constants(double eta);

// t(rho) = 1/sqrt(1 - 2 rho) and the half-space offset delta(rho); defined
// for sqrt(2) - 1 < rho < 1/2, with delta -> 0 as rho -> 1/2.
struct RhoConstants {
    double t;
    double delta;
};
RhoConstants rho_constants(double rho);

// d(V, W) = sup over unit x in V of dist(x, W); computed from the singular
// values of the cross-basis inner-product matrix.
double subspace_distance(const Subspace& v, const Subspace& w);

// Haar-ish random m-subspace of R^n (Gaussian matrix + orthonormalization).
Subspace sample_subspace(std::size_t n, std::size_t m, Rng& rng);

// Deterministic orthonormal k-frame from the seeded generator.
Frame sample_frame(std::size_t n, std::size_t k, std::uint64_t seed);

struct NetOptions {
    std::uint64_t seed = 1;
    int audit_samples = 10000;
    int batch = 128;
    int miss_streak_limit = 512;
    int max_audit_rounds = 40;
    std::size_t max_size = 8192;
};

// Finite eps-net of G(n, m): greedy farthest-point insertion over random
// subspaces, then a randomized audit; audit failures are inserted and the
// audit repeats. Throws verification_error (with the achieved covering
// radius in the message) if the resource caps are hit first.
std::vector<Subspace> grassmannian_net(std::size_t n, std::size_t m, double eps,
                                       const NetOptions& opts = {});

} // namespace poro
