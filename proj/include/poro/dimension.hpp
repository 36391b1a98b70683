#pragma once

#include <string>
#include <vector>

#include "poro/sets.hpp"

namespace poro {

struct BoxCountSeries {
    std::vector<int> depths;
    std::vector<std::uint64_t> counts; // cubes of side 2^-depth meeting the set
};

struct DimensionEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int depth_lo = 0;
    int depth_hi = 0;
    double max_residual = 0.0; // worst deviation of log2 N_j from the fit line
};

// N_j = number of distinct depth-j ancestors of the marked cells.
BoxCountSeries box_counts(const DyadicCubeSet& set, const std::vector<int>& depths);

// Least-squares slope of log N_j against j log 2 over the given depth window.
DimensionEstimate minkowski_dim(const DyadicCubeSet& set, int depth_lo, int depth_hi);

// Unique s >= 0 with sum r_i^s = 1, by bisection; rejects lists of fewer
// than two ratios (a single contraction pins s = 0 degenerately).
double moran_dimension(const std::vector<double>& ratios);

// Root of (2^n - 1) * sum_{i=1..l} 2^{-i s} = 1; the similarity dimension of
// the nested-corner carpet.
double corner_carpet_dimension(std::size_t n, int levels);

// n - c rho^n with c = (2 / (5 ln 2)) 2^{-3n} n^{-n/2}; upper bound for the
// box dimension of a set that is rho-porous at all small scales.
double bound_full(std::size_t n, double rho);

// n - c 2^{-3m} n^{-m/2} rho^m with the same absolute constant c; the
// directed variant where holes are found along a fixed m-subspace.
double bound_directed(std::size_t n, std::size_t m, double rho);

struct DensityProfilePoint {
    double r;
    double ratio; // mu(B(x, r)) / r^s
};

std::vector<DensityProfilePoint> density_profile(const NaturalMeasure& mu, const Vec& x,
                                                 double s, const std::vector<double>& scales);

struct PorosityDimensionRow {
    std::string label;
    std::size_t n = 0;
    int k = 1;
    double porosity = 0.0;
    double porosity_slack = 0.0;
    double dimension = 0.0;
    double dimension_stderr = 0.0;
    double bound = 0.0; // bound_full at the measured porosity minus slack
};

} // namespace poro
