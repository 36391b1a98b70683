#pragma once

#include <cstdint>
#include <vector>

#include "poro/geometry.hpp"
#include "poro/sets.hpp"

namespace poro {

// Exact Euclidean distance transform of the cell-center grid: per cell, the
// distance (in unit-cube coordinates) to the nearest marked cell center.
class DistanceField {
public:
    static DistanceField build(const DyadicCubeSet& set);

    std::size_t ambient_dim() const noexcept { return n_; }
    int depth() const noexcept { return depth_; }
    double cell_side() const noexcept { return std::ldexp(1.0, -depth_); }

    double at_cell(std::uint64_t flat_index) const { return data_[flat_index]; }
    const std::vector<double>& data() const noexcept { return data_; }

    // Value at an arbitrary point: nearest grid node inside the cube, plus a
    // conservative quadrature extension for points outside it. Error is
    // bounded by sqrt(n) * 2^-depth.
    double query(const Vec& p) const;

private:
    DistanceField(std::size_t n, int depth, std::vector<double> data)
        : n_(n), depth_(depth), data_(std::move(data)) {}

    std::size_t n_;
    int depth_;
    std::vector<double> data_;
};

struct PorosityParams {
    int frame_budget = 64;  // random frame restarts
    int refine_steps = 32;  // hill-climb rotations per restart
    int scan_cap = 512;     // max grid scan points along a hole ray
    std::uint64_t seed = 1;
    int threads = 1;
};

struct LocalPorosity {
    double value = 0.0;
    std::vector<Vec> frame; // the best hole directions found
};

// Estimate of por_k(A, x, r): best over orthonormal k-frames of the worst
// hole radius along the frame rays, relative to r. Hole centers z = x + d u
// with d in (0, r); the hole radius at z is min(dist-to-set, r - d).
LocalPorosity local_porosity_k(const DyadicCubeSet& set, const DistanceField& field,
                               const Vec& x, double r, int k, const PorosityParams& params);

// Hole center restricted to the affine slice V + {x}; grid search over the
// slice with local refinement.
double directed_porosity(const DyadicCubeSet& set, const DistanceField& field, const Vec& x,
                         double r, const Subspace& v, const PorosityParams& params);

struct PorosityProfile {
    Vec x;
    int k = 1;
    std::vector<double> scales; // strictly decreasing
    std::vector<double> values;
    double grid_slack = 0.0; // 2 sqrt(n) 2^-depth; relative slack is this / r
    std::uint64_t seed = 0;
    int frame_budget = 0;
    int refine_steps = 0;

    double min_value() const; // finite-scale liminf proxy
};

PorosityProfile porosity_profile(const DyadicCubeSet& set, const DistanceField& field,
                                 const Vec& x, int k, const std::vector<double>& scales,
                                 const PorosityParams& params);

struct SetPorosityReport {
    double value = 0.0; // min over sampled points of the profile minimum
    int k = 1;
    std::size_t argmin_sample = 0;
    Vec argmin_point;
    std::vector<PorosityProfile> profiles;
    double grid_slack = 0.0;
    std::uint64_t seed = 0;
};

// por_k(A) proxy: min over sampled marked-cell centers. One-sided bias: the
// finite sample and ladder overestimate the true inf/liminf.
SetPorosityReport set_porosity(const DyadicCubeSet& set, const DistanceField& field, int k,
                               int sample_count, const std::vector<double>& scales,
                               const PorosityParams& params);

// Directed variant of set_porosity along a fixed subspace.
SetPorosityReport directed_set_porosity(const DyadicCubeSet& set, const DistanceField& field,
                                        const Subspace& v, int sample_count,
                                        const std::vector<double>& scales,
                                        const PorosityParams& params);

// Geometric ladder from 0.45 down to min_cells grid cells, factor 3/4.
std::vector<double> default_scale_ladder(int depth, int min_cells = 24);

} // namespace poro
