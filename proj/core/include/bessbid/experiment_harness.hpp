#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/revenue_forecaster.hpp"
#include "bessbid/scenario_generator.hpp"
#include "bessbid/scheduling_model.hpp"

namespace bessbid::exp {

enum class ScenarioSource { Original, Forecast };
enum class BidMode { Single, Multi };

const char* to_string(ScenarioSource s);
const char* to_string(BidMode b);
ScenarioSource scenario_source_from_string(const std::string& s);
BidMode bid_mode_from_string(const std::string& s);

struct DayData {
  TimePoint start;
  std::vector<sched::Scenario> original;
  // One-price-point forecast scenario; empty when no forecast is available.
  std::vector<sched::Scenario> forecast;
  // One trace per original scenario; the forecast scenario uses the first.
  std::vector<FrequencyTrace> traces;
};

struct ExperimentData {
  std::vector<DayData> days;
};

struct DataSpec {
  gen::Regime regime = gen::Regime::Y2019;
  TimePoint start;  // first simulated day, 00:00 UTC
  std::size_t days = 7;
  std::size_t scenarios_per_day = 1;
  std::uint64_t seed = 42;
  bool with_forecast = false;
  std::size_t history_hours = 336;  // GAM training window before each week
  forecast::WeeklyModelOptions model{};
};

// Synthetic days from the regime generator. With forecasts enabled, a GAM is
// fitted per market on the history preceding each week and its one-week-ahead
// prices form the forecast scenario.
ExperimentData make_experiment_data(const DataSpec& spec);

struct ExperimentSpec {
  std::string name = "run";
  ScenarioSource source = ScenarioSource::Original;
  BidMode bids = BidMode::Single;
  sched::SocMode soc_mode = sched::SocMode::Fixed;
  std::vector<double> freq_levels;  // empty: defaults for the bid mode
  std::vector<double> spot_levels;
  sched::BessParams params{};
  std::optional<double> bid_max;
  double epsilon = 1e-3;
  droop::DroopConfig droop{};
  milp::MipOptions solver{};
  unsigned threads = 1;

  sched::BidStructure bid_structure() const;
};

inline constexpr std::size_t kShareN = 0, kShareD = 1, kShareSDch = 2, kShareSCh = 3, kShareIdle = 4;

struct DayResult {
  TimePoint start;
  std::string status;
  double profit = 0.0;  // expected objective
  double cost = 0.0;    // expected spot charging payments
  double acceptance_hours = 0.0;  // probability-weighted accepted hours
  std::array<std::size_t, 5> hours_by_market{};  // bid hours per N, D, S_DCH, S_CH, idle
  long nodes = 0;
  double bound = 0.0;
  double total_slack = 0.0;
  std::size_t violations = 0;
  std::vector<int> bid_pairs;  // pair index per hour, -1 idle
};

struct ExperimentReport {
  std::string name;
  ExperimentSpec spec;
  std::vector<DayResult> days;
  double profit = 0.0;
  double cost = 0.0;
  double acceptance_hours = 0.0;
  std::array<double, 5> shares{};  // percent of hours, N, D, S_DCH, S_CH, idle
  std::size_t hours = 0;
  bool partial = false;  // some day ended on a limit or failed
  std::vector<std::string> flags;
};

// Solves one instance per day (in parallel when threads > 1) and aggregates
// in date order.
ExperimentReport run_experiment(const ExperimentSpec& spec, const ExperimentData& data);

struct Delta {
  double a = 0.0;
  double b = 0.0;
  double absolute = 0.0;  // a - b
  double percent = 0.0;   // (a - b) / |b| * 100; 0 when both are 0
};

struct Comparison {
  std::string a;
  std::string b;
  Delta profit;
  Delta cost;
  Delta acceptance_hours;
  std::array<double, 5> share_points{};  // a - b in percentage points
};

// Throws ConfigError when the reports cover different horizons.
Comparison compare(const ExperimentReport& a, const ExperimentReport& b);
Delta delta(double a, double b);

std::string report_json(const ExperimentReport& report);
std::string comparisons_json(const std::vector<Comparison>& comparisons);
// run,day,profit,cost,acceptance_hours,n_hours,d_hours,sdch_hours,sch_hours,idle_hours
void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);
// a,b,metric,value_a,value_b,delta,delta_pct
void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& comparisons);

}  // namespace bessbid::exp
