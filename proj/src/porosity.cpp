#include "poro/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poro/errors.hpp"
#include "poro/parallel.hpp"
#include "poro/rng.hpp"

namespace poro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFar = 1e18; // finite "unreached" sentinel keeps the envelope math exact

// Felzenszwalb-Huttenlocher lower envelope of parabolas; one pass per axis
// turns per-axis squared offsets into the full squared distance.
void dt_line(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
             std::vector<double>& z, int len) {
    const auto intersect = [&](int q, int p) {
        return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
               (2.0 * (q - p));
    };
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < len; ++q) {
        double s = intersect(q, v[k]);
        while (k > 0 && s <= z[k]) {
            --k;
            s = intersect(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < len; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = static_cast<double>(q - p) * (q - p) + f[p];
    }
}

} // namespace

DistanceField DistanceField::build(const DyadicCubeSet& set) {
    if (set.size() == 0) throw input_error("DistanceField: empty set");
    const std::size_t n = set.ambient_dim();
    const int depth = set.depth();
    const std::uint64_t grid = std::uint64_t(1) << depth;
    const std::uint64_t total = std::uint64_t(1) << (static_cast<std::uint64_t>(depth) * n);
    if (total > (std::uint64_t(1) << 25))
        throw resource_error("DistanceField: grid exceeds the memory budget");

    std::vector<double> sq(total, kFar);
    for (std::uint64_t key : set.packed_cells()) sq[key] = 0.0;

    const int len = static_cast<int>(grid);
    std::vector<double> f(len), d(len), z(len + 1);
    std::vector<int> v(len);
    // axis a has stride grid^(n-1-a) in the flat layout
    for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t stride = 1;
        for (std::size_t b = a + 1; b < n; ++b) stride *= grid;
        const std::uint64_t lines = total / grid;
        for (std::uint64_t line = 0; line < lines; ++line) {
            // decompose line index into the base offset skipping axis a
            std::uint64_t rest = line;
            std::uint64_t base = 0;
            for (std::size_t b = n; b-- > 0;) {
                if (b == a) continue;
                std::uint64_t bstride = 1;
                for (std::size_t c = b + 1; c < n; ++c) bstride *= grid;
                const std::uint64_t coord = rest % grid;
                rest /= grid;
                base += coord * bstride;
            }
            for (int i = 0; i < len; ++i) f[i] = sq[base + static_cast<std::uint64_t>(i) * stride];
            dt_line(f, d, v, z, len);
            for (int i = 0; i < len; ++i) sq[base + static_cast<std::uint64_t>(i) * stride] = d[i];
        }
    }

    const double cell = std::ldexp(1.0, -depth);
    for (auto& x : sq) x = std::sqrt(x) * cell;
    return DistanceField(n, depth, std::move(sq));
}

double DistanceField::query(const Vec& p) const {
    if (p.size() != n_) throw input_error("DistanceField::query: dimension mismatch");
    const double cell = cell_side();
    const double grid = std::ldexp(1.0, depth_);
    const std::int64_t grid_max = (std::int64_t(1) << depth_) - 1;
    const double lo_center = 0.5 * cell;
    const double hi_center = 1.0 - 0.5 * cell;

    std::uint64_t flat = 0;
    double out2 = 0.0;
    for (std::size_t a = 0; a < n_; ++a) {
        const std::int64_t idx = std::clamp<std::int64_t>(
            static_cast<std::int64_t>(std::llround(p[a] * grid - 0.5)), 0, grid_max);
        flat = (flat << depth_) | static_cast<std::uint64_t>(idx);
        const double off = std::max({0.0, lo_center - p[a], p[a] - hi_center});
        out2 += off * off;
    }
    const double d = data_[flat];
    return std::sqrt(out2 + d * d);
}

namespace {

struct HoleScan {
    double value = 0.0;
    double best_d = 0.0;
};

// max over d in (0, r) of min(distance-to-set at x + d u, r - d)
HoleScan scan_ray(const DistanceField& field, const Vec& x, const Vec& u, double r,
                  int scan_cap) {
    const double cell = field.cell_side();
    int steps = static_cast<int>(std::ceil(r / cell));
    steps = std::clamp(steps, 16, scan_cap);
    const double h = r / steps;

    Vec p(x.size());
    const auto eval = [&](double d) {
        for (std::size_t a = 0; a < x.size(); ++a) p[a] = x[a] + d * u[a];
        return std::min(field.query(p), r - d);
    };

    HoleScan best;
    for (int i = 0; i < steps; ++i) {
        const double d = (i + 0.5) * h;
        const double val = eval(d);
        if (val > best.value) {
            best.value = val;
            best.best_d = d;
        }
    }
    // golden-section polish around the best grid sample
    double a = std::max(1e-12, best.best_d - h);
    double b = std::min(r - 1e-12, best.best_d + h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = eval(c1), f2 = eval(c2);
    for (int it = 0; it < 28; ++it) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = eval(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = eval(c1);
        }
    }
    if (f1 > best.value) {
        best.value = f1;
        best.best_d = c1;
    }
    if (f2 > best.value) {
        best.value = f2;
        best.best_d = c2;
    }
    return best;
}

double frame_value(const DistanceField& field, const Vec& x, const std::vector<Vec>& frame,
                   double r, int scan_cap) {
    double worst = kInf;
    for (const Vec& u : frame) worst = std::min(worst, scan_ray(field, x, u, r, scan_cap).value);
    return worst;
}

std::vector<Vec> random_frame(std::size_t n, std::size_t k, Rng& rng) {
    const Subspace s = sample_subspace(n, k, rng);
    return s.basis();
}

void rotate_pair(std::vector<Vec>& frame, std::size_t p, std::size_t q, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    for (Vec& u : frame) {
        const double up = u[p], uq = u[q];
        u[p] = c * up - s * uq;
        u[q] = s * up + c * uq;
    }
}

void check_point_near_set(const DistanceField& field, const Vec& x) {
    const double tol = std::sqrt(static_cast<double>(field.ambient_dim())) * field.cell_side();
    if (field.query(x) > tol + 1e-12)
        throw input_error("porosity: base point is not within one cell of the set");
}

void check_scale(const DistanceField& field, double r) {
    if (!(r >= 4.0 * field.cell_side()))
        throw resolution_error("porosity: scale r is below 4 grid cells");
    if (!(r <= 0.5 + 1e-12)) throw input_error("porosity: scale r exceeds 1/2");
}

} // namespace

LocalPorosity local_porosity_k(const DyadicCubeSet& set, const DistanceField& field,
                               const Vec& x, double r, int k, const PorosityParams& params) {
    const std::size_t n = set.ambient_dim();
    if (x.size() != n) throw input_error("local_porosity_k: dimension mismatch");
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw input_error("local_porosity_k: k must lie in [1, n]");
    check_point_near_set(field, x);
    check_scale(field, r);

    LocalPorosity best;
    best.value = -kInf;

    if (n == 1) {
        for (double sign : {1.0, -1.0}) {
            std::vector<Vec> frame{Vec{sign}};
            const double val = frame_value(field, x, frame, r, params.scan_cap);
            if (val > best.value) {
                best.value = val;
                best.frame = frame;
            }
        }
        best.value /= r;
        return best;
    }

    Rng root(params.seed);
    for (int restart = 0; restart < std::max(1, params.frame_budget); ++restart) {
        Rng rng = root.substream(static_cast<std::uint64_t>(restart));
        std::vector<Vec> frame = random_frame(n, static_cast<std::size_t>(k), rng);
        double val = frame_value(field, x, frame, r, params.scan_cap);
        double sigma = 0.5;
        for (int step = 0; step < params.refine_steps; ++step) {
            std::vector<Vec> trial = frame;
            const std::size_t p = rng.uniform_index(n);
            std::size_t q = rng.uniform_index(n - 1);
            if (q >= p) ++q;
            rotate_pair(trial, p, q, sigma * rng.normal());
            const double tval = frame_value(field, x, trial, r, params.scan_cap);
            if (tval > val) {
                val = tval;
                frame = std::move(trial);
            }
            sigma *= 0.9;
        }
        if (val > best.value) {
            best.value = val;
            best.frame = frame;
        }
    }
    best.value /= r;
    return best;
}

double directed_porosity(const DyadicCubeSet& set, const DistanceField& field, const Vec& x,
                         double r, const Subspace& v, const PorosityParams& /*params*/) {
    // the slice search is a deterministic grid scan; no budgets consumed
    const std::size_t n = set.ambient_dim();
    if (x.size() != n || v.ambient_dim() != n)
        throw input_error("directed_porosity: dimension mismatch");
    if (v.dim() < 1) throw input_error("directed_porosity: subspace must have dimension >= 1");
    check_point_near_set(field, x);
    check_scale(field, r);

    const std::size_t m = v.dim();
    const double step = field.cell_side();
    const std::int64_t span = static_cast<std::int64_t>(std::floor(r / step));
    double pts = 1.0;
    for (std::size_t a = 0; a < m; ++a) pts *= static_cast<double>(2 * span + 1);
    if (pts > 8e6) throw resource_error("directed_porosity: slice grid exceeds the budget");

    Vec coeff(m, 0.0);
    Vec z(n);
    const auto eval = [&](const Vec& c) {
        double c2 = 0.0;
        for (double ci : c) c2 += ci * ci;
        const double d = std::sqrt(c2);
        if (d >= r) return -kInf;
        z = x;
        for (std::size_t a = 0; a < m; ++a) add_scaled_inplace(z, v.basis()[a], c[a]);
        return std::min(field.query(z), r - d);
    };

    double best = 0.0;
    Vec best_coeff(m, 0.0);
    std::vector<std::int64_t> idx(m, -span);
    for (;;) {
        for (std::size_t a = 0; a < m; ++a) coeff[a] = static_cast<double>(idx[a]) * step;
        const double val = eval(coeff);
        if (val > best) {
            best = val;
            best_coeff = coeff;
        }
        std::size_t a = m;
        bool done = false;
        while (a-- > 0) {
            if (++idx[a] <= span) break;
            idx[a] = -span;
            if (a == 0) done = true;
        }
        if (done) break;
    }

    // coordinate-wise golden polish around the best slice node
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int round = 0; round < 2; ++round) {
        for (std::size_t a = 0; a < m; ++a) {
            double lo = best_coeff[a] - step, hi = best_coeff[a] + step;
            Vec c = best_coeff;
            double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
            c[a] = c1;
            double f1 = eval(c);
            c[a] = c2;
            double f2 = eval(c);
            for (int it = 0; it < 20; ++it) {
                if (f1 < f2) {
                    lo = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = lo + gr * (hi - lo);
                    c[a] = c2;
                    f2 = eval(c);
                } else {
                    hi = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = hi - gr * (hi - lo);
                    c[a] = c1;
                    f1 = eval(c);
                }
            }
            const double fm = std::max(f1, f2);
            if (fm > best) {
                best = fm;
                best_coeff[a] = (f1 > f2) ? c1 : c2;
            }
        }
    }
    return best / r;
}

double PorosityProfile::min_value() const {
    double m = kInf;
    for (double v : values) m = std::min(m, v);
    return values.empty() ? 0.0 : m;
}

PorosityProfile porosity_profile(const DyadicCubeSet& set, const DistanceField& field,
                                 const Vec& x, int k, const std::vector<double>& scales,
                                 const PorosityParams& params) {
    if (scales.empty()) throw input_error("porosity_profile: empty scale ladder");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] < scales[i - 1]))
            throw input_error("porosity_profile: scales must be strictly decreasing");

    PorosityProfile profile;
    profile.x = x;
    profile.k = k;
    profile.scales = scales;
    profile.grid_slack = 2.0 * std::sqrt(static_cast<double>(set.ambient_dim())) * set.cell_side();
    profile.seed = params.seed;
    profile.frame_budget = params.frame_budget;
    profile.refine_steps = params.refine_steps;
    profile.values.reserve(scales.size());
    for (double r : scales)
        profile.values.push_back(local_porosity_k(set, field, x, r, k, params).value);
    return profile;
}

namespace {

SetPorosityReport sampled_min_report(const DyadicCubeSet& set, const DistanceField& field,
                                     int sample_count, const std::vector<double>& scales,
                                     const PorosityParams& params, int k,
                                     const Subspace* directed) {
    if (sample_count < 1) throw input_error("set_porosity: sample count must be >= 1");
    if (scales.empty()) throw input_error("set_porosity: empty scale ladder");

    SetPorosityReport report;
    report.k = k;
    report.seed = params.seed;
    report.grid_slack = 2.0 * std::sqrt(static_cast<double>(set.ambient_dim())) * set.cell_side();
    report.profiles.resize(static_cast<std::size_t>(sample_count));

    Rng root(params.seed);
    parallel_for(static_cast<std::size_t>(sample_count), params.threads, [&](std::size_t i) {
        Rng rng = root.substream(0x9000 + i);
        const std::size_t cell = static_cast<std::size_t>(rng.uniform_index(set.size()));
        const Vec x = set.cell_center(cell);
        PorosityParams local = params;
        local.seed = root.substream(0xf00d + i).next_u64();
        if (directed) {
            PorosityProfile p;
            p.x = x;
            p.k = k;
            p.scales = scales;
            p.grid_slack = report.grid_slack;
            p.seed = local.seed;
            for (double r : scales)
                p.values.push_back(directed_porosity(set, field, x, r, *directed, local));
            report.profiles[i] = std::move(p);
        } else {
            report.profiles[i] = porosity_profile(set, field, x, k, scales, local);
        }
    });

    report.value = kInf;
    for (std::size_t i = 0; i < report.profiles.size(); ++i) {
        const double m = report.profiles[i].min_value();
        if (m < report.value) {
            report.value = m;
            report.argmin_sample = i;
            report.argmin_point = report.profiles[i].x;
        }
    }
    return report;
}

} // namespace

SetPorosityReport set_porosity(const DyadicCubeSet& set, const DistanceField& field, int k,
                               int sample_count, const std::vector<double>& scales,
                               const PorosityParams& params) {
    return sampled_min_report(set, field, sample_count, scales, params, k, nullptr);
}

SetPorosityReport directed_set_porosity(const DyadicCubeSet& set, const DistanceField& field,
                                        const Subspace& v, int sample_count,
                                        const std::vector<double>& scales,
                                        const PorosityParams& params) {
    return sampled_min_report(set, field, sample_count, scales, params,
                              static_cast<int>(v.dim()), &v);
}

std::vector<double> default_scale_ladder(int depth, int min_cells) {
    const double cell = std::ldexp(1.0, -depth);
    const double r_min = std::max(4.0 * cell, static_cast<double>(min_cells) * cell);
    std::vector<double> ladder;
    for (double r = 0.45; r >= r_min && ladder.size() < 24; r *= 0.75) ladder.push_back(r);
    if (ladder.empty()) ladder.push_back(std::max(4.0 * cell, 0.45));
    return ladder;
}

} // namespace poro
