#include "poro/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poro/errors.hpp"
#include "poro/parallel.hpp"
#include "poro/rng.hpp"

namespace poro {

namespace {

// Signed margins of the three membership inequalities; the cell belongs to
// the region iff all are positive with slack 0.
struct CellMargins {
    double ball;  // r - |y - x|
    double cone;  // alpha |y - x| - dist(y - x, V), or +inf without a cone
    double hspc;  // eta |y - x| - (y - x) . theta  (kept region is the complement)
};

CellMargins margins_at(const Vec& c, const Vec& x, double r, const Subspace* v, double alpha,
                       const Vec& theta, double eta) {
    const Vec d = sub(c, x);
    const double m = norm(d);
    CellMargins out;
    out.ball = r - m;
    out.cone = v ? alpha * m - dist_to_subspace(d, *v) : std::numeric_limits<double>::infinity();
    out.hspc = eta * m - dot(d, theta);
    return out;
}

} // namespace

RegionMass region_mass(const NaturalMeasure& mu, const Vec& x, double r, const Subspace* v,
                       double alpha, const Direction& theta, double eta) {
    const DyadicCubeSet& set = *mu.base;
    if (x.size() != set.ambient_dim() || theta.dim() != set.ambient_dim())
        throw input_error("region_mass: dimension mismatch");
    if (v && v->ambient_dim() != set.ambient_dim())
        throw input_error("region_mass: subspace dimension mismatch");
    if (!(alpha > 0.0 && alpha <= 1.0) || !(eta > 0.0 && eta <= 1.0))
        throw input_error("region_mass: alpha and eta must lie in (0, 1]");

    const double tol = 2.0 * std::sqrt(static_cast<double>(set.ambient_dim())) * set.cell_side();
    RegionMass out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const CellMargins mg = margins_at(set.cell_center(i), x, r, v, alpha,
                                          theta.coords(), eta);
        const bool inside = mg.ball > 0.0 && mg.cone > 0.0 && mg.hspc > 0.0;
        if (inside) out.mass += mu.weights[i];
        const bool tight = std::abs(mg.ball) <= tol || (v && std::abs(mg.cone) <= tol) ||
                           std::abs(mg.hspc) <= tol;
        if (tight) out.slack += mu.weights[i];
    }
    return out;
}

DensityPointReport worst_case_density(const NaturalMeasure& mu, const DensityExperiment& exp,
                                      const Vec& x) {
    const DyadicCubeSet& set = *mu.base;
    const std::size_t n = set.ambient_dim();
    if (exp.m >= n && exp.m != 0)
        throw input_error("worst_case_density: m must be less than n");
    if (exp.scales.empty()) throw input_error("worst_case_density: empty scale ladder");

    Rng rng(exp.seed);

    std::vector<Subspace> planes;
    if (exp.m > 0) {
        // cones around (n - m)-subspaces; net radius alpha/2 mirrors the
        // half-aperture inclusion argument
        NetOptions net_opts;
        net_opts.seed = rng.next_u64();
        net_opts.audit_samples = 2000;
        planes = grassmannian_net(n, n - exp.m, std::max(0.15, exp.alpha / 2.0), net_opts);
        while (static_cast<int>(planes.size()) < exp.plane_budget)
            planes.push_back(sample_subspace(n, n - exp.m, rng));
    }

    std::vector<Vec> thetas;
    thetas.reserve(static_cast<std::size_t>(exp.direction_budget));
    for (int i = 0; i < exp.direction_budget; ++i) thetas.push_back(rng.unit_vec(n));

    DensityPointReport report;
    report.x = x;
    report.scales = exp.scales;
    report.worst_ratio.reserve(exp.scales.size());

    for (double r : exp.scales) {
        const auto mass_for = [&](const Subspace* v, const Vec& th) {
            return region_mass(mu, x, r, v, exp.alpha, Direction(th), exp.eta);
        };
        double worst = std::numeric_limits<double>::infinity();
        double worst_slack = 0.0;
        const std::size_t vcount = exp.m > 0 ? planes.size() : 1;
        for (std::size_t vi = 0; vi < vcount; ++vi) {
            const Subspace* v = exp.m > 0 ? &planes[vi] : nullptr;
            RegionMass best{std::numeric_limits<double>::infinity(), 0.0};
            Vec best_theta = thetas.front();
            for (const Vec& th : thetas) {
                const RegionMass rm = mass_for(v, th);
                if (rm.mass < best.mass) {
                    best = rm;
                    best_theta = th;
                }
            }
            // adversarial polish: rotate theta to shave off more mass
            double sigma = 0.5;
            for (int step = 0; step < exp.refine_steps; ++step) {
                Vec cand = best_theta;
                add_scaled_inplace(cand, rng.unit_vec(n), sigma * std::abs(rng.normal()));
                const double m = norm(cand);
                if (m < 1e-12) continue;
                for (auto& c : cand) c /= m;
                const RegionMass rm = mass_for(v, cand);
                if (rm.mass < best.mass) {
                    best = rm;
                    best_theta = std::move(cand);
                }
                sigma *= 0.88;
            }
            if (best.mass < worst) {
                worst = best.mass;
                worst_slack = best.slack;
            }
        }
        report.worst_ratio.push_back(worst / std::pow(r, exp.s));
        report.slack.push_back(worst_slack);
    }

    report.limsup_proxy = 0.0;
    for (double v : report.worst_ratio) report.limsup_proxy = std::max(report.limsup_proxy, v);
    return report;
}

DensityReport density_experiment(const NaturalMeasure& mu, const DensityExperiment& exp,
                                 int sample_count) {
    if (sample_count < 1) throw input_error("density_experiment: sample count must be >= 1");
    DensityReport report;
    report.experiment = exp;
    report.n = mu.base->ambient_dim();
    report.points.resize(static_cast<std::size_t>(sample_count));

    Rng root(exp.seed);
    parallel_for(static_cast<std::size_t>(sample_count), exp.threads, [&](std::size_t i) {
        Rng rng = root.substream(0xd0 + i);
        const std::size_t cell = static_cast<std::size_t>(rng.uniform_index(mu.base->size()));
        DensityExperiment local = exp;
        local.seed = root.substream(0xce11 + i).next_u64();
        report.points[i] = worst_case_density(mu, local, mu.base->cell_center(cell));
    });

    report.inf_over_points = std::numeric_limits<double>::infinity();
    for (const auto& p : report.points)
        report.inf_over_points = std::min(report.inf_over_points, p.limsup_proxy);
    return report;
}

std::vector<DensitySweepRow> density_sweep(const std::vector<DensitySweepEntry>& family,
                                           const std::vector<double>& alphas,
                                           const std::vector<double>& etas,
                                           const DensityExperiment& base, int sample_count) {
    std::vector<DensitySweepRow> rows;
    for (const auto& entry : family) {
        for (double alpha : alphas) {
            for (double eta : etas) {
                DensityExperiment exp = base;
                exp.s = entry.s;
                exp.alpha = alpha;
                exp.eta = eta;
                const DensityReport rep = density_experiment(entry.mu, exp, sample_count);
                rows.push_back({entry.label, rep.n, exp.m, exp.s, alpha, eta,
                                rep.inf_over_points});
            }
        }
    }
    return rows;
}

std::vector<double> default_density_ladder(int depth) {
    // bottoms out at 8 grid cells to keep the boundary slack moderate
    const double r_min = 8.0 * std::ldexp(1.0, -depth);
    std::vector<double> ladder;
    for (double r = 0.45; r >= r_min && ladder.size() < 16; r *= 0.7) ladder.push_back(r);
    if (ladder.empty()) ladder.push_back(0.45);
    return ladder;
}

} // namespace poro
