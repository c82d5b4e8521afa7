#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace bessbid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitSolverError = 3;

// Each command writes below config.output_dir and finishes with a manifest.
// Errors propagate as bessbid::Error.
void cmd_ingest(const RunConfig& config);
void cmd_forecast(const RunConfig& config);
void cmd_simulate_meb(const RunConfig& config);
void cmd_optimize(const RunConfig& config);
void cmd_export_lp(const RunConfig& config);
void cmd_experiment(const RunConfig& config);
// Synthetic hourly data, frequency traces, scenarios and a matching run
// config, for demos and fixtures.
void cmd_synth(const RunConfig& config);

// Reads BESSBID_LOG_LEVEL (trace, debug, info, warn, error, off).
void configure_logging();

// Full command line including argv[0]; returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace bessbid::cli
