#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "poro/density.hpp"
#include "poro/dimension.hpp"
#include "poro/lemmas.hpp"
#include "poro/porosity.hpp"

namespace poro {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest round-trip decimal; identical bytes for identical doubles.
std::string fmt_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);
    std::string to_string() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Envelope all JSON reports share: tool_version, config echo, seed.
nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config_echo,
                               std::uint64_t seed);

nlohmann::json to_json(const TrialReport& report);
nlohmann::json to_json(const SetPorosityReport& report);
nlohmann::json to_json(const DimensionEstimate& est);
nlohmann::json to_json(const DensityReport& report);

CsvTable porosity_csv(const SetPorosityReport& report, std::size_t n);
CsvTable density_csv(const DensityReport& report, const std::string& label);
CsvTable density_sweep_csv(const std::vector<DensitySweepRow>& rows);

struct TableEntry {
    std::string label;
    DyadicCubeSet set;
    int k = 1;
};

struct TableOptions {
    int samples = 48;
    PorosityParams porosity;
    int ladder_min_cells = 24;
    int dim_window = 6; // regression uses the deepest (window+1) depths
};

// One row per set: measured porosity, box dimension, and the porosity-based
// dimension bound evaluated at the measured value minus the grid slack.
std::vector<PorosityDimensionRow> porosity_dimension_table(const std::vector<TableEntry>& family,
                                                           const TableOptions& opts);

CsvTable porosity_dimension_csv(const std::vector<PorosityDimensionRow>& rows);

} // namespace poro
