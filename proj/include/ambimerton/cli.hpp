// Command-line front end: config ingestion, the policy / regions /
// verify / minimax subcommands, and JSON / CSV / SVG emitters. The
// report builders are plain functions so they can be exercised without
// spawning the binary.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ambimerton/closed_form.hpp"
#include "ambimerton/model.hpp"
#include "ambimerton/montecarlo.hpp"
#include "ambimerton/pde.hpp"

namespace ambimerton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitNumeric = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string axis;  // "mu_lo" or "r_lo"
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

struct McSection {
    McConfig config;
    PriorGridSpec prior_grid;
    PolicyGridSpec policy_grid;
};

struct RunConfig {
    AmbiguitySpec spec;
    CrraParams crra;
    double x0 = 1.0;
    std::optional<Grid1D> grid;
    std::optional<McSection> mc;
    std::optional<SweepSpec> sweep;
    double verify_tolerance = 1e-3;

    RunConfig(AmbiguitySpec spec_, CrraParams crra_)
        : spec(std::move(spec_)), crra(crra_) {}

    /// Grid from the config, or the standard [0.01 x0, 100 x0] log grid.
    Grid1D resolved_grid() const;
};

struct OutputOptions {
    std::string format = "json";  // json | csv | svg
    std::string out_path;         // empty = stdout
    bool reproducible = false;
    std::optional<std::uint64_t> seed;
    int threads = 0;  // 0 = AMBIMERTON_THREADS env var, else 1
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

int resolve_threads(const OutputOptions& options);

// -- policy ---------------------------------------------------------------

nlohmann::ordered_json policy_report(const RunConfig& config);

// -- regions --------------------------------------------------------------

struct RegionRow {
    double param;
    std::string regime;
    double pi_star;
};

struct RegionBoundary {
    double value;
    std::string label;
};

struct RegionDiagram {
    std::string axis;
    std::vector<RegionRow> rows;
    std::vector<RegionBoundary> boundaries;
};

RegionDiagram region_sweep(const RunConfig& config);
std::string sweep_csv(const RegionDiagram& diagram);
std::string sweep_svg(const RegionDiagram& diagram);

// -- verify ---------------------------------------------------------------

struct VerifyOutcome {
    nlohmann::ordered_json report;
    bool pass = false;
    ValueSurface surface;
};

VerifyOutcome run_verify(const RunConfig& config);
std::string surface_csv(const ValueSurface& surface);

// -- minimax ----------------------------------------------------------------

struct MinimaxOutcome {
    nlohmann::ordered_json report;
    bool pass = false;
    MinimaxReport table;
};

MinimaxOutcome run_minimax(const RunConfig& config, const OutputOptions& options);
std::string minimax_csv(const MinimaxReport& table);

// -- subcommands ------------------------------------------------------------

int cmd_policy(const RunConfig& config, const OutputOptions& options, std::ostream& log);
int cmd_regions(const RunConfig& config, const OutputOptions& options, std::ostream& log);
int cmd_verify(const RunConfig& config, const OutputOptions& options, std::ostream& log);
int cmd_minimax(const RunConfig& config, const OutputOptions& options, std::ostream& log);

}  // namespace ambimerton::cli
