#include "poro/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "poro/errors.hpp"

namespace poro {

namespace {

// Interleaved (Morton) encoding: the depth-j ancestor of a cell is a plain
// right shift by n (depth - j) bits, so shifting preserves the sort order.
std::vector<std::uint64_t> morton_keys(const DyadicCubeSet& set) {
    const std::size_t n = set.ambient_dim();
    const int depth = set.depth();
    const std::uint64_t mask = (std::uint64_t(1) << depth) - 1;
    std::vector<std::uint64_t> keys;
    keys.reserve(set.size());
    for (std::uint64_t key : set.packed_cells()) {
        std::uint64_t coords[kMaxDim];
        std::uint64_t rest = key;
        for (std::size_t a = n; a-- > 0;) {
            coords[a] = rest & mask;
            rest >>= depth;
        }
        std::uint64_t z = 0;
        for (int b = depth - 1; b >= 0; --b)
            for (std::size_t a = 0; a < n; ++a)
                z = (z << 1) | ((coords[a] >> b) & 1);
        keys.push_back(z);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace

BoxCountSeries box_counts(const DyadicCubeSet& set, const std::vector<int>& depths) {
    const std::vector<std::uint64_t> z = morton_keys(set);
    BoxCountSeries series;
    for (int j : depths) {
        if (j < 0 || j > set.depth())
            throw input_error("box_counts: requested depth exceeds raster depth");
        const int shift = static_cast<int>(set.ambient_dim()) * (set.depth() - j);
        std::uint64_t count = 0;
        bool have_prev = false;
        std::uint64_t prev = 0;
        for (std::uint64_t key : z) {
            const std::uint64_t anc = key >> shift;
            if (!have_prev || anc != prev) {
                ++count;
                prev = anc;
                have_prev = true;
            }
        }
        series.depths.push_back(j);
        series.counts.push_back(count);
    }
    return series;
}

DimensionEstimate minkowski_dim(const DyadicCubeSet& set, int depth_lo, int depth_hi) {
    if (depth_hi - depth_lo + 1 < 4)
        throw input_error("minkowski_dim: need at least 4 depths in the window");
    std::vector<int> depths;
    for (int j = depth_lo; j <= depth_hi; ++j) depths.push_back(j);
    const BoxCountSeries series = box_counts(set, depths);

    DimensionEstimate est;
    est.depth_lo = depth_lo;
    est.depth_hi = depth_hi;

    bool constant_one = true;
    for (std::uint64_t c : series.counts)
        if (c != 1) constant_one = false;
    if (constant_one) return est; // a single cube at every depth: dimension 0

    // Regress log2 N_j on j; the slope is the dimension since the grid is
    // dyadic.
    const std::size_t m = series.depths.size();
    double sx = 0, sy = 0;
    std::vector<double> ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        ys[i] = std::log2(static_cast<double>(series.counts[i]));
        sx += series.depths[i];
        sy += ys[i];
    }
    const double xbar = sx / static_cast<double>(m);
    const double ybar = sy / static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = series.depths[i] - xbar;
        sxx += dx * dx;
        sxy += dx * (ys[i] - ybar);
    }
    est.value = sxy / sxx;
    double ss_res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double fit = ybar + est.value * (series.depths[i] - xbar);
        const double resid = ys[i] - fit;
        ss_res += resid * resid;
        est.max_residual = std::max(est.max_residual, std::abs(resid));
    }
    if (m > 2) est.stderr_ = std::sqrt(ss_res / static_cast<double>(m - 2) / sxx);
    return est;
}

double moran_dimension(const std::vector<double>& ratios) {
    if (ratios.size() < 2)
        throw input_error("moran_dimension: need at least two contraction ratios");
    for (double r : ratios)
        if (!(r > 0.0 && r < 1.0))
            throw input_error("moran_dimension: ratios must lie in (0, 1)");

    const auto total = [&](double s) {
        double sum = 0.0;
        for (double r : ratios) sum += std::pow(r, s);
        return sum;
    };

    double lo = 0.0, hi = 1.0;
    while (total(hi) > 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 4096.0) throw input_error("moran_dimension: root search diverged");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double corner_carpet_dimension(std::size_t n, int levels) {
    check_dim(n, "corner_carpet_dimension");
    if (levels < 1) throw input_error("corner_carpet_dimension: levels must be >= 1");
    const double pieces = std::ldexp(1.0, static_cast<int>(n)) - 1.0;
    const auto total = [&](double s) {
        double sum = 0.0;
        for (int i = 1; i <= levels; ++i) sum += std::pow(2.0, -i * s);
        return pieces * sum;
    };
    double lo = 0.0, hi = static_cast<double>(n) + 1.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double bound_full(std::size_t n, double rho) {
    check_dim(n, "bound_full");
    if (!(rho > 0.0 && rho < 0.5)) throw input_error("bound_full: rho must lie in (0, 1/2)");
    const double nn = static_cast<double>(n);
    const double c = (2.0 / (5.0 * std::log(2.0))) * std::pow(2.0, -3.0 * nn) *
                     std::pow(nn, -nn / 2.0);
    return nn - c * std::pow(rho, nn);
}

double bound_directed(std::size_t n, std::size_t m, double rho) {
    check_dim(n, "bound_directed");
    if (m < 1 || m > n) throw input_error("bound_directed: m must lie in [1, n]");
    if (!(rho > 0.0 && rho < 0.5)) throw input_error("bound_directed: rho must lie in (0, 1/2)");
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double c = 2.0 / (5.0 * std::log(2.0));
    return nn - c * std::pow(2.0, -3.0 * mm) * std::pow(nn, -mm / 2.0) * std::pow(rho, mm);
}

std::vector<DensityProfilePoint> density_profile(const NaturalMeasure& mu, const Vec& x,
                                                 double s, const std::vector<double>& scales) {
    if (!(s > 0.0)) throw input_error("density_profile: s must be positive");
    const DyadicCubeSet& set = *mu.base;
    if (x.size() != set.ambient_dim()) throw input_error("density_profile: dimension mismatch");
    const double cell = set.cell_side();
    std::vector<DensityProfilePoint> out;
    out.reserve(scales.size());
    for (double r : scales) {
        if (!(r >= 2.0 * cell))
            throw resolution_error("density_profile: scale below grid validity");
        double mass = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i)
            if (dist(set.cell_center(i), x) < r) mass += mu.weights[i];
        out.push_back({r, mass / std::pow(r, s)});
    }
    return out;
}

} // namespace poro
