#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/markets.hpp"
#include "bessbid/milp/linear_program.hpp"

namespace bessbid::sched {

enum class SocMode { Fixed, Flexible };

const char* to_string(SocMode m);
SocMode soc_mode_from_string(const std::string& s);

struct BessParams {
  double e_min = 0.0;  // MWh
  double e_max = 1.0;
  double soc_start = 0.5;
  double soc_end = 0.5;
  double ilf = 0.10;
  int step_minutes = 15;
  std::size_t hours = 24;
  SocMode soc_mode = SocMode::Fixed;
  // Objective weight on delivery slack; zero keeps the plain revenue objective.
  double slack_penalty = 0.0;

  // Throws ConfigError.
  void validate() const;
  std::size_t steps() const { return hours * static_cast<std::size_t>(60 / step_minutes); }
  int steps_per_hour() const { return 60 / step_minutes; }
};

struct Scenario {
  double probability = 1.0;
  // clearing[market][hour]
  std::array<std::vector<double>, 4> clearing;
  std::vector<double> c_up;    // FCR-N up-regulation energy price per hour
  std::vector<double> c_down;  // FCR-N down-regulation energy price per hour
  std::string frequency_trace;  // path, informational

  double price(MarketId m, std::size_t h) const {
    return clearing[static_cast<std::size_t>(m)][h];
  }
  std::vector<double>& prices(MarketId m) { return clearing[static_cast<std::size_t>(m)]; }
  const std::vector<double>& prices(MarketId m) const {
    return clearing[static_cast<std::size_t>(m)];
  }
};

// Throws DataError on bad probabilities, negative or non-finite prices or
// series shorter than `hours`.
void validate_scenarios(const std::vector<Scenario>& scenarios, std::size_t hours);

inline const std::vector<double> kSingleFreqLevels{0.9};
inline const std::vector<double> kSingleSpotLevels{0.8};
inline const std::vector<double> kMultiFreqLevels{0.9, 0.6, 0.3};
inline const std::vector<double> kMultiSpotLevels{0.8, 0.6, 0.4};

struct BidStructure {
  std::vector<MarketPower> pairs;
  double bid_min = 0.0;
  std::optional<double> bid_max;  // default: 1.5 x max clearing price
  double epsilon = 1e-3;

  static BidStructure single();
  static BidStructure multi();
  static BidStructure from_levels(const std::vector<double>& freq, const std::vector<double>& spot);

  double resolved_bid_max(const std::vector<Scenario>& scenarios) const;
  // Throws ConfigError.
  void validate() const;
};

// Family-level big-M values; each row uses its own value, never above these.
struct BigM {
  double acceptance = 0.0;
  double availability = 0.0;
  double slack = 0.0;
  double energy = 0.0;
};

BigM compute_big_m(const BidStructure& structure, const std::vector<Scenario>& scenarios,
                   const BessParams& params, const droop::MebTable& meb);

struct ModelOptions {
  // Fix acceptance binaries whose value follows from the price bounds.
  bool preprocess = true;
  // Add valid rows that tie the FCR-N energy payment and w_ok to the
  // accepted FCR-N pair. They only remove solutions with w_ok = 1 in hours
  // without an accepted FCR-N bid, which never pay more.
  bool strengthen = true;
};

struct MilpInstance {
  milp::LinearProgram lp;
  BessParams params;
  BidStructure structure;  // bid_max resolved
  std::vector<Scenario> scenarios;
  droop::MebTable meb;
  BigM big_m;

  std::size_t S = 0, H = 0, T = 0, K = 0;

  std::vector<int> x_bid;      // h*K+k
  std::vector<int> x_price;    // h
  std::vector<int> x_acc;      // (s*H+h)*K+k
  std::vector<int> z_dch;      // s*T+t
  std::vector<int> z_ch;
  std::vector<int> z_net;
  std::vector<int> z_soc;
  std::vector<int> z_soc_end;  // s
  std::vector<int> s_dch;
  std::vector<int> s_ch;
  std::vector<int> w_ok;        // s*H+h
  std::vector<int> w_avail;     // (s*H+h)*K+k, -1 for spot pairs
  std::vector<int> w_spot_dch;  // s*H+h
  std::vector<int> w_spot_ch;
  std::vector<int> w_energy;

  std::size_t sh(std::size_t s, std::size_t h) const { return s * H + h; }
  std::size_t shk(std::size_t s, std::size_t h, std::size_t k) const { return (s * H + h) * K + k; }
  std::size_t st(std::size_t s, std::size_t t) const { return s * T + t; }
  std::size_t hk(std::size_t h, std::size_t k) const { return h * K + k; }
  std::size_t hour_of_step(std::size_t t) const { return t / static_cast<std::size_t>(params.steps_per_hour()); }
};

// Throws ConfigError/DataError on inconsistent inputs (empty pair set, MEB
// table that does not match, short price series).
MilpInstance build_instance(const BessParams& params, const BidStructure& structure,
                            const std::vector<Scenario>& scenarios, const droop::MebTable& meb,
                            const ModelOptions& options = {});

struct Solution {
  std::size_t S = 0, H = 0, T = 0, K = 0;
  std::vector<int> x_bid;
  std::vector<double> x_price;
  std::vector<int> x_acc;
  std::vector<double> z_dch, z_ch, z_net, z_soc, s_dch, s_ch;
  std::vector<int> w_ok;
  std::vector<double> w_avail;
  std::vector<double> w_spot_dch, w_spot_ch, w_energy;
  double objective = 0.0;

  // Index of the pair bid in hour h, or -1.
  int bid_pair(std::size_t h) const;
};

// Binaries are rounded; x must be a full column vector of instance.lp.
Solution extract_solution(const MilpInstance& instance, const std::vector<double>& x);

// Flat column vector for instance.lp built from a structured solution.
std::vector<double> to_column_vector(const MilpInstance& instance, const Solution& sol);

struct Violation {
  std::string id;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double total_slack = 0.0;
  double recomputed_objective = 0.0;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_solution(const Solution& sol, const MilpInstance& instance,
                                   double tolerance = 1e-6);

// Objective recomputed from the payment variables and slacks.
double objective_from_payments(const Solution& sol, const MilpInstance& instance);

struct SettlementRow {
  std::size_t scenario = 0;
  std::size_t hour = 0;
  int pair = -1;  // -1 means no accepted bid
  double availability = 0.0;
  double spot_revenue = 0.0;
  double spot_cost = 0.0;
  double energy = 0.0;
  double total() const { return availability + spot_revenue - spot_cost + energy; }
};

struct Settlement {
  std::vector<SettlementRow> rows;  // one per (scenario, hour)
  std::vector<double> scenario_totals;
  double expected_total = 0.0;
};

Settlement settle(const Solution& sol, const MilpInstance& instance);

}  // namespace bessbid::sched
