#include "poro/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "poro/errors.hpp"

namespace poro {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw input_error("CsvTable: row arity mismatch");
    rows_.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config_echo,
                               std::uint64_t seed) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config_echo"] = config_echo;
    j["seed"] = seed;
    return j;
}

nlohmann::json to_json(const TrialReport& report) {
    nlohmann::json j;
    j["lemma"] = report.lemma;
    j["params"] = report.params;
    j["trials"] = report.trials;
    j["failures"] = report.failures;
    j["worst_margin"] = report.worst_margin;
    j["seed"] = report.seed;
    if (!report.counterexamples.empty()) j["counterexamples"] = report.counterexamples;
    return j;
}

nlohmann::json to_json(const SetPorosityReport& report) {
    nlohmann::json j;
    j["value"] = report.value;
    j["k"] = report.k;
    j["grid_slack"] = report.grid_slack;
    j["seed"] = report.seed;
    j["argmin_point"] = report.argmin_point;
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& p : report.profiles) {
        nlohmann::json pj;
        pj["x"] = p.x;
        pj["scales"] = p.scales;
        pj["values"] = p.values;
        profiles.push_back(std::move(pj));
    }
    j["profiles"] = std::move(profiles);
    return j;
}

nlohmann::json to_json(const DimensionEstimate& est) {
    nlohmann::json j;
    j["value"] = est.value;
    j["stderr"] = est.stderr_;
    j["depth_lo"] = est.depth_lo;
    j["depth_hi"] = est.depth_hi;
    j["max_residual"] = est.max_residual;
    return j;
}

nlohmann::json to_json(const DensityReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["s"] = report.experiment.s;
    j["m"] = report.experiment.m;
    j["alpha"] = report.experiment.alpha;
    j["eta"] = report.experiment.eta;
    j["seed"] = report.experiment.seed;
    j["inf_over_points"] = report.inf_over_points;
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        nlohmann::json pj;
        pj["x"] = p.x;
        pj["scales"] = p.scales;
        pj["worst_ratio"] = p.worst_ratio;
        pj["slack"] = p.slack;
        pj["limsup_proxy"] = p.limsup_proxy;
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    return j;
}

namespace {

std::vector<std::string> coord_header(std::size_t n, const char* prefix) {
    std::vector<std::string> h;
    for (std::size_t a = 0; a < n; ++a) h.push_back(std::string(prefix) + std::to_string(a));
    return h;
}

} // namespace

CsvTable porosity_csv(const SetPorosityReport& report, std::size_t n) {
    std::vector<std::string> header = coord_header(n, "x");
    for (const char* c : {"r", "k", "value", "slack", "seed"}) header.push_back(c);
    CsvTable table(std::move(header));
    for (const auto& p : report.profiles) {
        for (std::size_t si = 0; si < p.scales.size(); ++si) {
            std::vector<std::string> row;
            for (std::size_t a = 0; a < n; ++a) row.push_back(fmt_double(p.x[a]));
            row.push_back(fmt_double(p.scales[si]));
            row.push_back(std::to_string(p.k));
            row.push_back(fmt_double(p.values[si]));
            row.push_back(fmt_double(p.grid_slack / p.scales[si]));
            row.push_back(std::to_string(report.seed));
            table.add_row(std::move(row));
        }
    }
    return table;
}

CsvTable density_csv(const DensityReport& report, const std::string& label) {
    std::vector<std::string> header{"label", "n", "m", "s", "alpha", "eta"};
    for (const auto& h : coord_header(report.n, "x")) header.push_back(h);
    for (const char* c : {"r", "worst_ratio", "slack", "seed"}) header.push_back(c);
    CsvTable table(std::move(header));
    for (const auto& p : report.points) {
        for (std::size_t si = 0; si < p.scales.size(); ++si) {
            std::vector<std::string> row{label, std::to_string(report.n),
                                         std::to_string(report.experiment.m),
                                         fmt_double(report.experiment.s),
                                         fmt_double(report.experiment.alpha),
                                         fmt_double(report.experiment.eta)};
            for (std::size_t a = 0; a < report.n; ++a) row.push_back(fmt_double(p.x[a]));
            row.push_back(fmt_double(p.scales[si]));
            row.push_back(fmt_double(p.worst_ratio[si]));
            row.push_back(fmt_double(si < p.slack.size() ? p.slack[si] : 0.0));
            row.push_back(std::to_string(report.experiment.seed));
            table.add_row(std::move(row));
        }
    }
    return table;
}

CsvTable density_sweep_csv(const std::vector<DensitySweepRow>& rows) {
    CsvTable table({"label", "n", "m", "s", "alpha", "eta", "inf_worst_ratio"});
    for (const auto& r : rows) {
        table.add_row({r.label, std::to_string(r.n), std::to_string(r.m), fmt_double(r.s),
                       fmt_double(r.alpha), fmt_double(r.eta), fmt_double(r.inf_worst_ratio)});
    }
    return table;
}

std::vector<PorosityDimensionRow> porosity_dimension_table(const std::vector<TableEntry>& family,
                                                           const TableOptions& opts) {
    std::vector<PorosityDimensionRow> rows;
    rows.reserve(family.size());
    for (const auto& entry : family) {
        const DyadicCubeSet& set = entry.set;
        PorosityDimensionRow row;
        row.label = entry.label;
        row.n = set.ambient_dim();
        row.k = entry.k;

        const DistanceField field = DistanceField::build(set);
        const auto ladder = default_scale_ladder(set.depth(), opts.ladder_min_cells);
        const SetPorosityReport por =
            set_porosity(set, field, entry.k, opts.samples, ladder, opts.porosity);
        row.porosity = por.value;
        row.porosity_slack = por.grid_slack / ladder.back();

        const int hi = set.depth();
        const int lo = std::max(2, hi - opts.dim_window);
        const DimensionEstimate dim = minkowski_dim(set, lo, hi);
        row.dimension = dim.value;
        row.dimension_stderr = dim.stderr_;

        const double rho = std::clamp(row.porosity - row.porosity_slack, 1e-9, 0.5 - 1e-12);
        row.bound = bound_full(row.n, rho);
        rows.push_back(std::move(row));
    }
    return rows;
}

CsvTable porosity_dimension_csv(const std::vector<PorosityDimensionRow>& rows) {
    CsvTable table({"label", "n", "k", "porosity", "porosity_slack", "dimension",
                    "dimension_stderr", "bound_full"});
    for (const auto& r : rows) {
        table.add_row({r.label, std::to_string(r.n), std::to_string(r.k), fmt_double(r.porosity),
                       fmt_double(r.porosity_slack), fmt_double(r.dimension),
                       fmt_double(r.dimension_stderr), fmt_double(r.bound)});
    }
    return table;
}

} // namespace poro
