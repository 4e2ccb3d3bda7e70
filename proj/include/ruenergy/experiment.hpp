#pragma once

#include "ruenergy/config.hpp"
#include "ruenergy/error.hpp"
#include "ruenergy/linkbudget.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ruenergy::experiment {

struct ExperimentSpec {
    std::string command;      // papr, evm-sweep, min-backoff, crossover, sweep-se, optimize-ee
    std::string config_path;  // empty: built-in defaults
    std::vector<std::string> overrides; // "section.key=value"
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool plot = false;
};

const std::vector<std::string>& commands();

/// Exit status for an error category: 2 config, 3 infeasible,
/// 4 nonconvergence, 1 anything else.
int exit_code(ErrorCode code);

/// Loads the scenario, applies overrides, seed and trials.
ScenarioConfig resolve_config(const ExperimentSpec& spec);

/// Minimum backoff per waveform at `evm_req_db`, measured unless pinned by
/// optimizer.b_min_cp_db / optimizer.b_min_dft_db.
linkbudget::ModeBackoff resolve_backoff(const ScenarioConfig& cfg, double evm_req_db);

/// Runs one experiment, writes its CSVs, plots and manifest into out_dir.
/// Throws ruenergy::Error on failure.
void run(const ExperimentSpec& spec);

/// run() with errors mapped to exit codes and logged.
int run_and_report(const ExperimentSpec& spec);

} // namespace ruenergy::experiment
