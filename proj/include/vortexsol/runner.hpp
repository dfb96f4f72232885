#pragma once

#include "vortexsol/bounds.hpp"
#include "vortexsol/solution.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vortexsol {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitConvergence = 3,
    kExitValidation = 4,
};

enum class RunMode { solve, direct, bounds, sweep };
enum class SweepTable { photon, charge };

std::string to_string(RunMode mode);
RunMode parse_run_mode(const std::string& text);
std::string to_string(SweepTable table);
SweepTable parse_sweep_table(const std::string& text);

/// Everything needed to reproduce a run. Defaults follow the reference
/// setup: R = 40, twenty basis functions, m = 1.
struct RunConfig {
    RunMode mode = RunMode::solve;
    ProblemParams params;
    int basis_size = 20;
    int panels = 64;
    int order = 8;
    SolverConfig solver;
    int jobs = 1;
    SweepTable table = SweepTable::photon;
    std::string out_dir = "out";
};

/// Set one flat key (flag name without dashes) from its text value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are errors.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::string& path);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

nlohmann::json bounds_to_json(const BoundsReport& report);
nlohmann::json decay_to_json(const DecayFit& fit);
std::string bounds_to_text(const BoundsReport& report);

struct ResultRecord {
    RunConfig config;
    std::optional<SolitonSolution> solution;
    std::optional<BoundsReport> bounds;
    std::optional<DecayFit> decay;
    std::string profile_csv_path;
    std::string record_path;
    double wall_clock_s = 0.0;
    std::string error;
    int exit_code = kExitOk;
    std::string cell_label;
    nlohmann::json failure;   // last iterate of a failed solve
};

/// The record proper: config echo, solution summary, bounds, decay, version.
nlohmann::json record_to_json(const ResultRecord& record);
/// Side file: N(A), triviality, timings, platform, error text, last iterate.
nlohmann::json diagnostics_to_json(const ResultRecord& record);

/// Header `r,A`, one row per output sample.
std::string profile_csv(const SolitonSolution& solution);

std::string platform_note();

ResultRecord run_solve(const RunConfig& config);
ResultRecord run_direct(const RunConfig& config);
ResultRecord run_bounds(const RunConfig& config);

struct SweepResult {
    std::vector<ResultRecord> cells;
    std::string summary_csv;
    std::string summary_path;
    int exit_code = kExitOk;
};

/// Cell values of the two reference tables.
std::vector<double> sweep_values(SweepTable table);

/// One constrained solve per cell on a pool of `config.jobs` workers; cell
/// files are written independently and the summary after all finish.
SweepResult run_sweep(const RunConfig& config);

/// `n0,lambda,a_max` or `m,lambda,a_max`, rows in cell order.
std::string summary_csv(SweepTable table, const std::vector<ResultRecord>& cells);

} // namespace vortexsol
