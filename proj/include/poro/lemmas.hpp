#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poro/geometry.hpp"

namespace poro {

struct TrialReport {
    std::string lemma;
    std::map<std::string, double> params;
    long long trials = 0;
    long long failures = 0;
    double worst_margin = 0.0; // minimum slack observed in the asserted inequality
    std::uint64_t seed = 0;
    std::vector<std::string> counterexamples; // first few failing configurations
};

struct AngleTriple {
    std::size_t i, j, k; // vertex at j
    double angle;        // in [0, pi]
};

// Exhaustive scan over ordered triples; returns the first triple whose vertex
// angle lies in [beta, pi], or nothing.
std::optional<AngleTriple> find_angle_triple(const std::vector<Vec>& points, double beta);

// Published bounds for the smallest q such that any q points in R^n contain
// three points forming an angle of at least beta.
struct AngleRamseyBounds {
    double lower;
    double upper;
};
AngleRamseyBounds angle_ramsey_bounds(std::size_t n, double beta);

// The beta used when covering directions by cones of co-aperture gamma(eta):
// midway between the cone opening angle and pi.
double beta_for_halfspace_cover(double eta);

struct CoverOptions {
    int audit_samples = 100000;
    int batch = 64;
    int miss_streak_limit = 1024;
    int max_audit_rounds = 40;
    std::size_t max_size = 4096;
};

// Directions theta_1..theta_k such that every unit u has u . theta_i > eta
// for some i, i.e. the cones H(0, theta_i, eta) cover R^n minus the origin.
std::vector<Vec> cone_cover_sphere(std::size_t n, double eta, std::uint64_t seed,
                                   const CoverOptions& opts = {});

// Checks: if |z - y| >= t(eta) r and (z - y) . theta <= gamma(eta) |z - y|,
// then the ball B(z, r) misses H(y, theta, eta). Sabotage places z at half
// the required distance, which produces counterexamples for small eta.
TrialReport verify_cone_escape(double eta, long long trials, std::uint64_t seed,
                               bool sabotage = false, int threads = 1);

// Checks: if B(z, rho t r) is contained in B(x, t r) with z = x + d theta,
// then the slab H(x + delta r theta, theta) within B(x, r) is swallowed by
// B(z, rho t r). Sabotage halves delta.
TrialReport verify_halfspace_in_hole(double rho, long long trials, std::uint64_t seed,
                                     bool sabotage = false, int threads = 1);

// Checks: points of the cone X(x, V, alpha) around V = span(theta_1..theta_k)
// that avoid H(x, theta, eta) for theta = -(1/sqrt(k)) sum theta_i and avoid
// every slab H(x + delta r theta_i, theta_i) stay inside B(x, 2 sqrt(n)
// delta r). The cone is not truncated at r: the claim is scale free in
// delta r. Sabotage doubles alpha.
TrialReport verify_corner_containment(std::size_t n, std::size_t k, double rho, double alpha,
                                      double eta, long long trials, std::uint64_t seed,
                                      bool sabotage = false, int threads = 1);

struct ContainmentSearchOptions {
    double rho = 0.47;
    long long audit_trials = 10000;
    std::uint64_t seed = 7;
    int bisection_steps = 16;
    double floor = std::ldexp(1.0, -20);
};

// Largest alpha = eta on a dyadic grid for which verify_corner_containment
// passes its audit; the value does not depend on rho.
std::pair<double, double> containment_parameters(std::size_t n, std::size_t k,
                                                 const ContainmentSearchOptions& opts = {});

enum class GaugeFamily {
    power,          // h(r) = r^s
    power_log,      // h(r) = r^s log(1/r)
    power_over_log, // h(r) = r^m / log(1/r)
};

struct GaugeCheck {
    bool satisfied = false;
    double final_sup = 0.0;          // sup ratio at the smallest eps
    std::vector<double> sups;        // one per eps, eps descending
};

// Evaluates sup over the r grid of h(eps r) / (eps^m h(r)) for each eps and
// decides whether the ratios decrease below 0.01, i.e. whether the gauge
// scales strictly faster than r^m uniformly.
GaugeCheck check_gauge_condition(GaugeFamily family, double s, std::size_t m,
                                 const std::vector<double>& eps_grid,
                                 const std::vector<double>& r_grid);

std::vector<double> default_gauge_eps_grid();
std::vector<double> default_gauge_r_grid();

} // namespace poro
