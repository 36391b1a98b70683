#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poro/geometry.hpp"
#include "poro/sets.hpp"

namespace poro {

struct DensityExperiment {
    double s = 1.0;       // mass-scaling exponent in the ratio mass / r^s
    std::size_t m = 0;    // removed-plane codimension parameter; cones live
                          // around (n - m)-subspaces, m = 0 means no cone
    double alpha = 1.0;   // cone aperture
    double eta = 0.5;     // removed half-space-cone aperture
    std::vector<double> scales;
    int direction_budget = 24;
    int plane_budget = 16;
    int refine_steps = 24;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct RegionMass {
    double mass = 0.0;
    double slack = 0.0; // weight within grid tolerance of a region boundary
};

// mu(cells in X(x, r, V, alpha) minus H(x, theta, eta)); cell membership is
// decided at centers, slack reports the boundary-sensitive weight.
RegionMass region_mass(const NaturalMeasure& mu, const Vec& x, double r, const Subspace* v,
                       double alpha, const Direction& theta, double eta);

struct DensityPointReport {
    Vec x;
    std::vector<double> scales;
    std::vector<double> worst_ratio; // per scale: min over (theta, V) of mass / r^s
    std::vector<double> slack;       // boundary-sensitive weight of the winning region
    double limsup_proxy = 0.0;       // max over the ladder
};

struct DensityReport {
    DensityExperiment experiment;
    std::size_t n = 0;
    std::vector<DensityPointReport> points;
    double inf_over_points = 0.0;
};

// Worst-case conical mass ratios at one point: finite subspace net plus
// sampled directions with adversarial hill-climbing on theta.
DensityPointReport worst_case_density(const NaturalMeasure& mu, const DensityExperiment& exp,
                                      const Vec& x);

// Runs worst_case_density at sample_count support points.
DensityReport density_experiment(const NaturalMeasure& mu, const DensityExperiment& exp,
                                 int sample_count);

struct DensitySweepRow {
    std::string label;
    std::size_t n;
    std::size_t m;
    double s, alpha, eta;
    double inf_worst_ratio;
};

struct DensitySweepEntry {
    std::string label;
    NaturalMeasure mu;
    double s;
};

// Cross product of the measure family with an (alpha, eta) grid.
std::vector<DensitySweepRow> density_sweep(const std::vector<DensitySweepEntry>& family,
                                           const std::vector<double>& alphas,
                                           const std::vector<double>& etas,
                                           const DensityExperiment& base, int sample_count);

std::vector<double> default_density_ladder(int depth);

} // namespace poro
