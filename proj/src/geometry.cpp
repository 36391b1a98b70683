#include "poro/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace poro {

namespace {

Eigen::MatrixXd basis_matrix(const Subspace& v) {
    Eigen::MatrixXd b(static_cast<Eigen::Index>(v.ambient_dim()),
                      static_cast<Eigen::Index>(v.dim()));
    for (std::size_t c = 0; c < v.dim(); ++c)
        for (std::size_t r = 0; r < v.ambient_dim(); ++r)
            b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v.basis()[c][r];
    return b;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Returns an empty
// vector when the input is rank deficient.
std::vector<Vec> orthonormalize(std::size_t n, const std::vector<Vec>& spanning) {
    std::vector<Vec> basis;
    basis.reserve(spanning.size());
    for (const Vec& raw : spanning) {
        if (raw.size() != n) return {};
        Vec v = raw;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) add_scaled_inplace(v, b, -dot(v, b));
        const double m = norm(v);
        if (m < 1e-10) return {};
        for (auto& x : v) x /= m;
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

Direction::Direction(Vec coords) : coords_(std::move(coords)) {
    check_dim(coords_.size(), "Direction");
    if (!all_finite(coords_)) throw input_error("Direction: coordinates must be finite");
    if (std::abs(norm(coords_) - 1.0) > kUnitNormTol)
        throw input_error("Direction: vector is not unit length");
}

Direction Direction::of(Vec coords) {
    check_dim(coords.size(), "Direction");
    const double m = norm(coords);
    if (!(m > 0.0) || !all_finite(coords))
        throw input_error("Direction::of: cannot normalize a zero or non-finite vector");
    for (auto& x : coords) x /= m;
    return Direction(std::move(coords), unchecked_tag{});
}

Subspace::Subspace(std::size_t n, std::vector<Vec> orthonormal_basis)
    : n_(n), basis_(std::move(orthonormal_basis)) {
    check_dim(n_, "Subspace");
    if (basis_.size() > n_) throw input_error("Subspace: more basis vectors than ambient dimension");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].size() != n_) throw input_error("Subspace: basis vector dimension mismatch");
        if (std::abs(norm(basis_[i]) - 1.0) > kUnitNormTol)
            throw input_error("Subspace: basis vector is not unit length");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(dot(basis_[i], basis_[j])) > kOrthoTol)
                throw input_error("Subspace: basis is not orthogonal");
    }
}

Subspace Subspace::span(std::size_t n, const std::vector<Vec>& spanning) {
    auto basis = orthonormalize(n, spanning);
    if (basis.empty() && !spanning.empty())
        throw input_error("Subspace::span: spanning set is rank deficient");
    return Subspace(n, std::move(basis));
}

Vec Subspace::project(const Vec& y) const {
    if (y.size() != n_) throw input_error("Subspace::project: dimension mismatch");
    Vec p(n_, 0.0);
    for (const Vec& b : basis_) add_scaled_inplace(p, b, dot(y, b));
    return p;
}

std::vector<Vec> Subspace::complement_basis() const {
    std::vector<Vec> full = basis_;
    std::vector<Vec> comp;
    comp.reserve(n_ - basis_.size());
    for (std::size_t axis = 0; axis < n_ && full.size() < n_; ++axis) {
        Vec e(n_, 0.0);
        e[axis] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : full) add_scaled_inplace(e, b, -dot(e, b));
        const double m = norm(e);
        if (m < 1e-8) continue;
        for (auto& x : e) x /= m;
        full.push_back(e);
        comp.push_back(std::move(e));
    }
    return comp;
}

HalfSpaceCone::HalfSpaceCone(Vec apex_, Direction theta_, double eta_)
    : apex(std::move(apex_)), theta(std::move(theta_)), eta(eta_) {
    if (apex.size() != theta.dim()) throw input_error("HalfSpaceCone: dimension mismatch");
    if (!all_finite(apex)) throw input_error("HalfSpaceCone: apex must be finite");
    if (!(eta >= 0.0 && eta <= 1.0)) throw input_error("HalfSpaceCone: eta must lie in [0, 1]");
}

ConeRegion::ConeRegion(Vec apex_, Subspace axis_, double alpha_, double radius_)
    : apex(std::move(apex_)), axis(std::move(axis_)), alpha(alpha_), radius(radius_) {
    if (apex.size() != axis.ambient_dim()) throw input_error("ConeRegion: dimension mismatch");
    if (!all_finite(apex)) throw input_error("ConeRegion: apex must be finite");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw input_error("ConeRegion: alpha must lie in (0, 1]");
    if (!(radius > 0.0)) throw input_error("ConeRegion: radius must be positive");
}

double dist_to_subspace(const Vec& y, const Subspace& v) {
    if (y.size() != v.ambient_dim()) throw input_error("dist_to_subspace: dimension mismatch");
    Vec res = y;
    for (const Vec& b : v.basis()) add_scaled_inplace(res, b, -dot(res, b));
    return norm(res);
}

bool cone_contains(const ConeRegion& cone, const Vec& y, double slack) {
    check_same_dim(cone.apex, y, "cone_contains");
    const Vec d = sub(y, cone.apex);
    const double m = norm(d);
    if (std::isfinite(cone.radius) && !(m < cone.radius + slack)) return false;
    return dist_to_subspace(d, cone.axis) < cone.alpha * m + slack;
}

bool halfspace_cone_contains(const HalfSpaceCone& h, const Vec& y, double slack) {
    check_same_dim(h.apex, y, "halfspace_cone_contains");
    const Vec d = sub(y, h.apex);
    return dot(d, h.theta.coords()) > h.eta * norm(d) - slack;
}

EtaConstants eta_constants(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw input_error("eta_constants: eta must lie in (0, 1]");
    const double t = std::sqrt((eta * eta + 4.0) / (eta * eta));
    return {t, 1.0 / t};
}

RhoConstants rho_constants(double rho) {
    const double lo = std::sqrt(2.0) - 1.0;
    if (!(rho > lo && rho < 0.5))
        throw input_error("rho_constants: rho must lie in (sqrt(2)-1, 1/2)");
    const double root = std::sqrt(1.0 - 2.0 * rho);
    const double t = 1.0 / root;
    const double delta = (1.0 - rho - std::sqrt(rho * rho + 2.0 * rho - 1.0)) / root;
    return {t, delta};
}

double subspace_distance(const Subspace& v, const Subspace& w) {
    if (v.ambient_dim() != w.ambient_dim())
        throw input_error("subspace_distance: ambient dimension mismatch");
    if (v.dim() != w.dim())
        throw input_error("subspace_distance: subspace dimension mismatch");
    if (v.dim() == 0) return 0.0;
    const Eigen::MatrixXd m = basis_matrix(w).transpose() * basis_matrix(v);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double smin = svd.singularValues().minCoeff();
    return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

Subspace sample_subspace(std::size_t n, std::size_t m, Rng& rng) {
    check_dim(n, "sample_subspace");
    if (m > n) throw input_error("sample_subspace: m exceeds n");
    for (int tries = 0; tries < 64; ++tries) {
        std::vector<Vec> raw;
        raw.reserve(m);
        for (std::size_t i = 0; i < m; ++i) raw.push_back(rng.normal_vec(n));
        auto basis = orthonormalize(n, raw);
        if (basis.size() == m || m == 0) return Subspace(n, std::move(basis));
    }
    throw sampling_error("sample_subspace: failed to draw an independent spanning set");
}

Frame sample_frame(std::size_t n, std::size_t k, std::uint64_t seed) {
    check_dim(n, "sample_frame");
    if (k < 1 || k > n) throw input_error("sample_frame: k must lie in [1, n]");
    Rng rng(seed);
    const Subspace s = sample_subspace(n, k, rng);
    Frame f;
    f.origin = Vec(n, 0.0);
    f.directions.reserve(k);
    for (const Vec& b : s.basis()) f.directions.push_back(Direction(b));
    return f;
}

std::vector<Subspace> grassmannian_net(std::size_t n, std::size_t m, double eps,
                                       const NetOptions& opts) {
    check_dim(n, "grassmannian_net");
    if (m < 1 || m > n - 1)
        throw input_error("grassmannian_net: m must lie in [1, n-1]");
    if (!(eps > 0.0 && eps < 1.0 + 1e-12))
        throw input_error("grassmannian_net: eps must lie in (0, 1]");

    Rng rng(opts.seed);
    std::vector<Subspace> net;
    net.push_back(sample_subspace(n, m, rng));

    auto min_dist = [&](const Subspace& w) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : net) best = std::min(best, subspace_distance(v, w));
        return best;
    };

    // Insert-if-separated keeps the net eps-separated, so termination implies
    // the audit criterion d(net, W) < eps for random W up to sampling.
    int misses = 0;
    while (misses < opts.miss_streak_limit && net.size() < opts.max_size) {
        Subspace far_candidate = sample_subspace(n, m, rng);
        double far_d = min_dist(far_candidate);
        for (int b = 1; b < opts.batch; ++b) {
            Subspace c = sample_subspace(n, m, rng);
            const double d = min_dist(c);
            if (d > far_d) {
                far_d = d;
                far_candidate = std::move(c);
            }
        }
        if (far_d >= eps) {
            net.push_back(std::move(far_candidate));
            misses = 0;
        } else {
            ++misses;
        }
    }

    double achieved = 0.0;
    for (int round = 0; round < opts.max_audit_rounds; ++round) {
        achieved = 0.0;
        std::vector<Subspace> gaps;
        for (int i = 0; i < opts.audit_samples; ++i) {
            Subspace w = sample_subspace(n, m, rng);
            const double d = min_dist(w);
            achieved = std::max(achieved, d);
            if (d >= eps && net.size() + gaps.size() < opts.max_size) gaps.push_back(std::move(w));
        }
        if (gaps.empty()) return net;
        for (auto& g : gaps) net.push_back(std::move(g));
    }

    std::ostringstream msg;
    msg << "grassmannian_net: audit did not converge; achieved covering radius "
        << achieved << " for requested eps " << eps;
    throw verification_error(msg.str());
}

} // namespace poro
