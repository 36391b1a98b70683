#include "poro/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "poro/errors.hpp"
#include "poro/parallel.hpp"

namespace poro {

namespace {

constexpr double kMarginTol = 1e-10; // float slack on strict inequalities
constexpr double kPi = std::numbers::pi;

// Unit vector orthogonal to u (and in span{u, hint} when possible).
Vec orthogonal_unit(const Vec& u, const Vec& hint, Rng& rng) {
    Vec e = hint;
    add_scaled_inplace(e, u, -dot(e, u));
    double m = norm(e);
    for (int tries = 0; m < 1e-9 && tries < 64; ++tries) {
        e = rng.unit_vec(u.size());
        add_scaled_inplace(e, u, -dot(e, u));
        m = norm(e);
    }
    if (m < 1e-9) throw sampling_error("orthogonal_unit: degenerate configuration");
    for (auto& x : e) x /= m;
    return e;
}

struct TrialOutcome {
    double margin = std::numeric_limits<double>::infinity();
    bool failed = false;
    std::string note;
};

TrialReport reduce_trials(std::string lemma, std::map<std::string, double> params,
                          long long trials, std::uint64_t seed, int threads,
                          const std::function<TrialOutcome(std::uint64_t)>& run) {
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads,
                 [&](std::size_t i) { outcomes[i] = run(static_cast<std::uint64_t>(i)); });

    TrialReport report;
    report.lemma = std::move(lemma);
    report.params = std::move(params);
    report.trials = trials;
    report.seed = seed;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        report.worst_margin = std::min(report.worst_margin, outcomes[i].margin);
        if (outcomes[i].failed) {
            ++report.failures;
            if (report.counterexamples.size() < 5) {
                std::ostringstream os;
                os << "trial " << i << ": " << outcomes[i].note;
                report.counterexamples.push_back(os.str());
            }
        }
    }
    if (outcomes.empty()) report.worst_margin = 0.0;
    return report;
}

std::size_t trial_dim(Rng& rng) { return 2 + static_cast<std::size_t>(rng.uniform_index(3)); }

} // namespace

std::optional<AngleTriple> find_angle_triple(const std::vector<Vec>& points, double beta) {
    if (points.size() < 3) throw input_error("find_angle_triple: need at least 3 points");
    if (!(beta > 0.0 && beta <= kPi))
        throw input_error("find_angle_triple: beta must lie in (0, pi]");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw input_error("find_angle_triple: duplicate points make angles undefined");

    const std::size_t q = points.size();
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t i = 0; i < q; ++i) {
            if (i == j) continue;
            const Vec a = sub(points[i], points[j]);
            const double na = norm(a);
            for (std::size_t k = i + 1; k < q; ++k) {
                if (k == j) continue;
                const Vec b = sub(points[k], points[j]);
                const double c = std::clamp(dot(a, b) / (na * norm(b)), -1.0, 1.0);
                const double angle = std::acos(c);
                if (angle >= beta) return AngleTriple{i, j, k, angle};
            }
        }
    }
    return std::nullopt;
}

AngleRamseyBounds angle_ramsey_bounds(std::size_t n, double beta) {
    if (n < 1) throw input_error("angle_ramsey_bounds: n must be >= 1");
    if (!(beta > 0.0 && beta < kPi))
        throw input_error("angle_ramsey_bounds: beta must lie in (0, pi)");
    const double e = static_cast<double>(n) - 1.0;
    const double lower = std::pow(2.0, std::pow(kPi / (kPi - beta), e));
    const double upper = std::pow(2.0, std::pow(4.0 * kPi / (kPi - beta), e)) + 1.0;
    return {lower, upper};
}

double beta_for_halfspace_cover(double eta) {
    const double gamma = eta_constants(eta).gamma;
    return (2.0 * std::acos(gamma) + kPi) / 2.0;
}

std::vector<Vec> cone_cover_sphere(std::size_t n, double eta, std::uint64_t seed,
                                   const CoverOptions& opts) {
    check_dim(n, "cone_cover_sphere");
    if (!(eta > 0.0 && eta < 1.0))
        throw input_error("cone_cover_sphere: eta must lie in (0, 1)");

    Rng rng(seed);
    std::vector<Vec> cover;
    cover.push_back(rng.unit_vec(n));

    const auto best_dot = [&](const Vec& u) {
        double best = -2.0;
        for (const Vec& c : cover) best = std::max(best, dot(u, c));
        return best;
    };

    // A direction is inserted only while uncovered, so the cover stays
    // eta-separated and its size is capped by the packing bound.
    int misses = 0;
    while (misses < opts.miss_streak_limit && cover.size() < opts.max_size) {
        Vec worst = rng.unit_vec(n);
        double worst_dot = best_dot(worst);
        for (int b = 1; b < opts.batch; ++b) {
            Vec u = rng.unit_vec(n);
            const double d = best_dot(u);
            if (d < worst_dot) {
                worst_dot = d;
                worst = std::move(u);
            }
        }
        if (worst_dot <= eta) {
            cover.push_back(std::move(worst));
            misses = 0;
        } else {
            ++misses;
        }
    }

    double achieved = 1.0;
    for (int round = 0; round < opts.max_audit_rounds; ++round) {
        std::vector<Vec> gaps;
        achieved = 1.0;
        for (int i = 0; i < opts.audit_samples; ++i) {
            Vec u = rng.unit_vec(n);
            const double d = best_dot(u);
            achieved = std::min(achieved, d);
            if (d <= eta && cover.size() + gaps.size() < opts.max_size) gaps.push_back(std::move(u));
        }
        if (gaps.empty()) return cover;
        for (auto& g : gaps) cover.push_back(std::move(g));
    }

    std::ostringstream msg;
    msg << "cone_cover_sphere: audit did not converge; achieved inner product " << achieved
        << " for requested eta " << eta;
    throw verification_error(msg.str());
}

TrialReport verify_cone_escape(double eta, long long trials, std::uint64_t seed, bool sabotage,
                               int threads) {
    if (trials < 1) throw input_error("verify_cone_escape: trials must be >= 1");
    const EtaConstants ec = eta_constants(eta);
    const double t = ec.t, gamma = ec.gamma;
    Rng root(seed);

    const auto run = [&](std::uint64_t index) {
        Rng rng = root.substream(index);
        const std::size_t n = trial_dim(rng);
        Vec y(n);
        for (auto& c : y) c = rng.uniform(-1.0, 1.0);
        const double r = std::exp(rng.uniform(std::log(0.25), std::log(2.0)));
        const Vec theta = rng.unit_vec(n);

        // distance factor s = |z - y| / r, biased toward the boundary s = t
        double u01 = rng.uniform();
        const double s = sabotage ? 0.5 * t : t + 3.0 * u01 * u01;

        // direction of z - y with cos angle to theta at most gamma
        Vec v;
        if (sabotage || rng.uniform() < 0.5) {
            const double c = sabotage ? gamma : gamma * (1.0 - 0.1 * rng.uniform());
            Vec e = orthogonal_unit(theta, rng.unit_vec(n), rng);
            v = scaled(theta, c);
            add_scaled_inplace(v, e, std::sqrt(std::max(0.0, 1.0 - c * c)));
        } else {
            int tries = 0;
            do {
                v = rng.unit_vec(n);
                if (++tries > 1000)
                    throw sampling_error("verify_cone_escape: direction rejection exhausted");
            } while (dot(v, theta) > gamma);
        }
        Vec z = y;
        add_scaled_inplace(z, v, s * r);

        TrialOutcome out;
        const auto probe = [&](const Vec& w) {
            const Vec d = sub(w, y);
            const double m = norm(d);
            if (m < 1e-12) return;
            const double margin = eta - dot(d, theta) / m;
            if (margin < out.margin) out.margin = margin;
            if (margin < -kMarginTol && !out.failed) {
                out.failed = true;
                std::ostringstream os;
                os << "n=" << n << " s=" << s << " margin=" << margin;
                out.note = os.str();
            }
        };

        // analytic extremal: tangent point of the cone from y around B(z, r)
        if (s > 1.0) {
            const Vec e1 = Direction::of(sub(z, y)).coords();
            Vec e2 = orthogonal_unit(e1, theta, rng);
            const double ca = std::sqrt(s * s - 1.0) / s;
            const double sa = 1.0 / s;
            Vec w = y;
            add_scaled_inplace(w, e1, std::sqrt(s * s - 1.0) * r * ca);
            add_scaled_inplace(w, e2, std::sqrt(s * s - 1.0) * r * sa);
            probe(w);
        }
        for (int i = 0; i < 16; ++i) {
            Vec w = z;
            add_scaled_inplace(w, rng.unit_vec(n), r);
            probe(w);
        }
        for (int i = 0; i < 15; ++i) {
            Vec w = z;
            add_scaled_inplace(w, rng.in_unit_ball(n), r);
            probe(w);
        }
        return out;
    };

    return reduce_trials("cone_escape",
                         {{"eta", eta}, {"sabotage", sabotage ? 1.0 : 0.0}}, trials, seed,
                         threads, run);
}

TrialReport verify_halfspace_in_hole(double rho, long long trials, std::uint64_t seed,
                                     bool sabotage, int threads) {
    if (trials < 1) throw input_error("verify_halfspace_in_hole: trials must be >= 1");
    const RhoConstants rc = rho_constants(rho);
    const double t = rc.t;
    const double delta = sabotage ? 0.5 * rc.delta : rc.delta;
    if (delta >= 1.0)
        throw sampling_error("verify_halfspace_in_hole: slab offset exceeds the ball radius");
    Rng root(seed);

    const auto run = [&](std::uint64_t index) {
        Rng rng = root.substream(index);
        const std::size_t n = trial_dim(rng);
        Vec x(n);
        for (auto& c : x) c = rng.uniform(-1.0, 1.0);
        const double r = std::exp(rng.uniform(std::log(0.25), std::log(2.0)));
        const Vec theta = rng.unit_vec(n);
        const double dmax = (1.0 - rho) * t * r;
        const double d = dmax * std::pow(rng.uniform(), 1.0 / 3.0);
        Vec z = x;
        add_scaled_inplace(z, theta, d);

        TrialOutcome out;
        const auto probe = [&](double y1, double rad_frac, const Vec& eperp) {
            // w = x + r (y1 theta + rho_perp eperp), constrained to B(x, r)
            const double rho_perp = std::sqrt(std::max(0.0, 1.0 - y1 * y1)) * rad_frac;
            Vec w = x;
            add_scaled_inplace(w, theta, y1 * r);
            add_scaled_inplace(w, eperp, rho_perp * r);
            const double margin = (rho * t * r - dist(w, z)) / r;
            if (margin < out.margin) out.margin = margin;
            if (margin < -kMarginTol && !out.failed) {
                out.failed = true;
                std::ostringstream os;
                os << "n=" << n << " d/r=" << d / r << " y1=" << y1 << " margin=" << margin;
                out.note = os.str();
            }
        };

        // extremal: the rim of the slab cap on the sphere |w - x| = r
        probe(delta + 1e-9, 1.0, orthogonal_unit(theta, rng.unit_vec(n), rng));
        for (int i = 0; i < 31; ++i) {
            const double u = rng.uniform();
            const double y1 = delta + (1.0 - delta) * u * u * u;
            const double rad = 1.0 - 0.3 * std::pow(rng.uniform(), 4.0);
            probe(y1, rad, orthogonal_unit(theta, rng.unit_vec(n), rng));
        }
        return out;
    };

    return reduce_trials("halfspace_in_hole",
                         {{"rho", rho}, {"sabotage", sabotage ? 1.0 : 0.0}}, trials, seed,
                         threads, run);
}

TrialReport verify_corner_containment(std::size_t n, std::size_t k, double rho, double alpha,
                                      double eta, long long trials, std::uint64_t seed,
                                      bool sabotage, int threads) {
    check_dim(n, "verify_corner_containment");
    if (k < 1 || k > n) throw input_error("verify_corner_containment: k must lie in [1, n]");
    if (!(alpha > 0.0 && alpha <= 1.0) || !(eta > 0.0 && eta <= 1.0))
        throw input_error("verify_corner_containment: alpha and eta must lie in (0, 1]");
    if (trials < 1) throw input_error("verify_corner_containment: trials must be >= 1");
    const double delta = rho_constants(rho).delta;
    const double alpha_eff = sabotage ? std::min(1.0, 2.0 * alpha) : alpha;
    Rng root(seed);

    const auto run = [&](std::uint64_t index) {
        Rng rng = root.substream(index);
        Vec x(n);
        for (auto& c : x) c = rng.uniform(-1.0, 1.0);
        const double r = std::exp(rng.uniform(std::log(0.25), std::log(2.0)));
        const double dr = delta * r;
        const double target = 2.0 * std::sqrt(static_cast<double>(n)) * dr;

        const Subspace vspan = sample_subspace(n, k, rng);
        const std::vector<Vec>& dirs = vspan.basis();
        Vec theta(n, 0.0);
        for (const Vec& th : dirs) add_scaled_inplace(theta, th, -1.0 / std::sqrt(double(k)));

        TrialOutcome out;
        const auto consider = [&](const Vec& y_minus_x) {
            const double R = norm(y_minus_x);
            if (R < 1e-12) return;
            // region membership: inside the cone, outside H(x, theta, eta),
            // outside every slab H(x + dr theta_i, theta_i)
            if (dist_to_subspace(y_minus_x, vspan) >= alpha_eff * R) return;
            if (dot(y_minus_x, theta) > eta * R) return;
            for (const Vec& th : dirs)
                if (dot(y_minus_x, th) > dr) return;
            const double margin = (target - R) / dr;
            if (margin < out.margin) out.margin = margin;
            if (margin < -kMarginTol && !out.failed) {
                out.failed = true;
                std::ostringstream os;
                os << "n=" << n << " k=" << k << " R/(delta r)=" << R / dr
                   << " margin=" << margin;
                out.note = os.str();
            }
        };

        const auto build = [&](const std::vector<double>& coeff, double wfrac, Rng& prng) {
            Vec y(n, 0.0);
            for (std::size_t i = 0; i < k; ++i) add_scaled_inplace(y, dirs[i], coeff[i]);
            if (n > k && wfrac > 0.0) {
                const double vn = norm(y);
                const double denom = std::sqrt(std::max(1e-12, 1.0 - wfrac * wfrac));
                const double wlen = vn / denom * wfrac;
                Vec w = prng.unit_vec(n);
                for (const Vec& b : dirs) add_scaled_inplace(w, b, -dot(w, b));
                const double wm = norm(w);
                if (wm > 1e-9) add_scaled_inplace(y, w, wlen / wm);
            }
            consider(y);
        };

        const double eps = 1e-6;
        const double ap = (n > k) ? alpha_eff * (1.0 - eps) : 0.0;

        // analytic worst case: all slab coordinates at the cap, one dipped as
        // far as the removed half-space cone allows
        {
            const double p = (double(k) - 1.0) * dr * (1.0 - eps);
            const double q = std::sqrt(double(k)) * eta * (1.0 - eps);
            const double denom = 1.0 - ap * ap - q * q;
            double big_r;
            const double c2 = p * p + (double(k) - 1.0) * dr * dr * (1.0 - eps) * (1.0 - eps);
            if (denom <= 1e-12) {
                big_r = 64.0 * target;
            } else {
                big_r = (2.0 * p * q + std::sqrt(4.0 * p * p * q * q + 4.0 * denom * c2)) /
                        (2.0 * denom);
                if (k == 1) big_r = 0.0; // negative branch degenerates for a single direction
            }
            if (big_r > 0.0) {
                std::vector<double> coeff(k, dr * (1.0 - eps));
                coeff[0] = -(p + q * big_r);
                build(coeff, ap, rng);
            }
            // all-positive corner
            std::vector<double> coeff(k, dr * (1.0 - eps));
            build(coeff, ap, rng);
            if (k == 1 && eta >= std::sqrt(std::max(0.0, 1.0 - ap * ap)) - 1e-12) {
                // single dipped direction unbounded once the cone is wide enough
                std::vector<double> dipped{-(eta * (1.0 - eps)) * 64.0 * target};
                build(dipped, ap, rng);
            }
        }
        // random probes
        for (int i = 0; i < 16; ++i) {
            std::vector<double> coeff(k);
            for (auto& c : coeff) c = dr * (1.0 - 0.7 * (-std::log(rng.uniform())));
            const double wfrac = (n > k) ? ap * std::sqrt(rng.uniform()) : 0.0;
            build(coeff, wfrac, rng);
        }
        return out;
    };

    return reduce_trials("corner_containment",
                         {{"n", double(n)},
                          {"k", double(k)},
                          {"rho", rho},
                          {"alpha", alpha},
                          {"eta", eta},
                          {"sabotage", sabotage ? 1.0 : 0.0}},
                         trials, seed, threads, run);
}

std::pair<double, double> containment_parameters(std::size_t n, std::size_t k,
                                                 const ContainmentSearchOptions& opts) {
    check_dim(n, "containment_parameters");
    if (k < 1 || k > n) throw input_error("containment_parameters: k must lie in [1, n]");

    const auto passes = [&](double u) {
        const TrialReport rep =
            verify_corner_containment(n, k, opts.rho, u, u, opts.audit_trials, opts.seed);
        return rep.failures == 0;
    };

    if (!passes(opts.floor))
        throw verification_error("containment_parameters: no passing values above the floor");
    double lo = opts.floor;
    double hi = 1.0;
    if (passes(hi)) return {hi, hi};
    for (int i = 0; i < opts.bisection_steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? lo : hi) = mid;
    }
    return {lo, lo};
}

GaugeCheck check_gauge_condition(GaugeFamily family, double s, std::size_t m,
                                 const std::vector<double>& eps_grid,
                                 const std::vector<double>& r_grid) {
    if (eps_grid.empty() || r_grid.empty())
        throw input_error("check_gauge_condition: empty grid");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (!(eps_grid[i] < eps_grid[i - 1]))
            throw input_error("check_gauge_condition: eps grid must be strictly decreasing");

    const auto h = [&](double r) -> double {
        switch (family) {
            case GaugeFamily::power:
                return std::pow(r, s);
            case GaugeFamily::power_log:
                return std::pow(r, s) * std::log(1.0 / r);
            case GaugeFamily::power_over_log:
                return std::pow(r, static_cast<double>(m)) / std::log(1.0 / r);
        }
        return 0.0;
    };

    const bool needs_log = family != GaugeFamily::power;
    for (double r : r_grid) {
        if (!(r > 0.0) || (needs_log && !(r < 1.0)))
            throw input_error("check_gauge_condition: gauge undefined or nonpositive on r grid");
        if (!(h(r) > 0.0))
            throw input_error("check_gauge_condition: gauge must be positive on the r grid");
    }

    GaugeCheck check;
    check.sups.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        if (!(eps > 0.0 && eps < 1.0))
            throw input_error("check_gauge_condition: eps must lie in (0, 1)");
        double sup = 0.0;
        for (double r : r_grid)
            sup = std::max(sup, h(eps * r) / (std::pow(eps, static_cast<double>(m)) * h(r)));
        check.sups.push_back(sup);
    }
    check.final_sup = check.sups.back();
    bool decreasing = true;
    for (std::size_t i = 1; i < check.sups.size(); ++i)
        if (check.sups[i] > check.sups[i - 1] * (1.0 + 1e-9)) decreasing = false;
    check.satisfied = decreasing && check.final_sup < 0.01;
    return check;
}

std::vector<double> default_gauge_eps_grid() {
    std::vector<double> eps;
    for (int i = 1; i <= 40; ++i) eps.push_back(std::ldexp(1.0, -i));
    return eps;
}

std::vector<double> default_gauge_r_grid() {
    std::vector<double> r;
    for (int i = 20; i >= 1; --i) r.push_back(std::ldexp(1.0, -i));
    return r;
}

} // namespace poro
