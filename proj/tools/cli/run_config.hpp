#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/experiment_harness.hpp"
#include "bessbid/market_data.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/revenue_forecaster.hpp"
#include "bessbid/scheduling_model.hpp"

namespace bessbid::cli {

struct HourlySource {
  std::filesystem::path path;
  CsvSchema schema;
  std::string tag() const;  // "<zone>_<market>"
};

struct ExperimentRun {
  std::string name;
  gen::Regime regime = gen::Regime::Y2019;
  exp::ScenarioSource source = exp::ScenarioSource::Original;
  exp::BidMode bids = exp::BidMode::Single;
  sched::SocMode soc_mode = sched::SocMode::Fixed;
};

struct ExperimentConfig {
  gen::Regime regime = gen::Regime::Y2019;
  TimePoint start;
  std::size_t days = 7;
  std::size_t scenarios_per_day = 1;
  std::size_t history_hours = 336;
  std::vector<ExperimentRun> runs;
  std::vector<std::pair<std::string, std::string>> comparisons;
};

struct SynthConfig {
  gen::Regime regime = gen::Regime::Y2019;
  TimePoint start;
  std::size_t weeks = 5;
  std::string zone = "SE3";
  std::size_t scenarios = 1;
  std::size_t hours = 24;
};

// Typed view of the JSON run configuration. Relative paths are resolved
// against the directory of the config file.
struct RunConfig {
  nlohmann::json raw;  // effective config after defaults and overrides
  std::filesystem::path base_dir;

  std::uint64_t seed = 42;
  std::filesystem::path output_dir;
  unsigned threads = 1;
  int utc_offset_hours = 0;

  std::vector<HourlySource> hourly;
  std::vector<std::filesystem::path> frequency;
  std::filesystem::path scenarios;

  forecast::BacktestOptions backtest;
  sched::BessParams bess;
  sched::BidStructure bids;
  exp::BidMode bid_mode = exp::BidMode::Single;
  std::vector<double> freq_levels;
  std::vector<double> spot_levels;
  droop::DroopConfig droop;
  milp::MipOptions solver;
  ExperimentConfig experiment;
  SynthConfig synth;
};

nlohmann::json default_config();

// "/json/pointer=value"; the value is parsed as JSON and falls back to a
// plain string. Throws ConfigError.
void apply_override(nlohmann::json& config, const std::string& assignment);

// Merges `user` over the defaults, applies overrides and converts. Throws
// ConfigError on type or value errors.
RunConfig make_run_config(const nlohmann::json& user, const std::vector<std::string>& overrides,
                          const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

// Throws DataError naming the first referenced input path that does not exist.
void check_paths_exist(const RunConfig& config);

}  // namespace bessbid::cli
