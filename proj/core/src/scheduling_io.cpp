#include "bessbid/scheduling_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid::sched {

using nlohmann::json;
using detail::format_double;

namespace {

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw DataError(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError(where + "[" + std::to_string(i) + "] is not a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Scenario scenario_from_json(const json& j, std::size_t index) {
  const std::string where = "scenario " + std::to_string(index);
  if (!j.is_object()) throw DataError(where + " is not an object");
  Scenario sc;
  if (!j.contains("probability") || !j["probability"].is_number()) throw DataError(where + ": missing probability");
  sc.probability = j["probability"].get<double>();
  if (!j.contains("clearing_prices") || !j["clearing_prices"].is_object()) {
    throw DataError(where + ": missing clearing_prices object");
  }
  for (const auto& [key, value] : j["clearing_prices"].items()) {
    MarketId m;
    try {
      m = market_from_string(key);
    } catch (const Error&) {
      throw DataError(where + ": unknown market '" + key + "'");
    }
    sc.prices(m) = numbers(value, where + ".clearing_prices." + key);
  }
  std::size_t hours = 0;
  for (MarketId m : kAllMarkets) hours = std::max(hours, sc.prices(m).size());
  for (MarketId m : kAllMarkets) {
    if (sc.prices(m).empty()) sc.prices(m).assign(hours, 0.0);
  }
  sc.c_up = j.contains("c_up") ? numbers(j["c_up"], where + ".c_up") : std::vector<double>(hours, 0.0);
  sc.c_down = j.contains("c_down") ? numbers(j["c_down"], where + ".c_down") : std::vector<double>(hours, 0.0);
  if (j.contains("frequency_trace")) {
    if (!j["frequency_trace"].is_string()) throw DataError(where + ": frequency_trace must be a path string");
    sc.frequency_trace = j["frequency_trace"].get<std::string>();
  }
  return sc;
}

}  // namespace

std::vector<Scenario> parse_scenarios_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("scenario JSON: ") + e.what());
  }
  std::vector<Scenario> out;
  const json* list = &j;
  if (j.is_object() && j.contains("scenarios")) list = &j["scenarios"];
  if (list->is_array()) {
    for (std::size_t i = 0; i < list->size(); ++i) out.push_back(scenario_from_json((*list)[i], i));
  } else {
    out.push_back(scenario_from_json(*list, 0));
  }
  return out;
}

std::vector<Scenario> load_scenarios_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto scenarios = parse_scenarios_json(ss.str());
  for (auto& sc : scenarios) {
    if (!sc.frequency_trace.empty() && std::filesystem::path(sc.frequency_trace).is_relative()) {
      sc.frequency_trace = (path.parent_path() / sc.frequency_trace).string();
    }
  }
  return scenarios;
}

std::string scenarios_to_json(const std::vector<Scenario>& scenarios) {
  json arr = json::array();
  for (const auto& sc : scenarios) {
    json prices = json::object();
    for (MarketId m : kAllMarkets) prices[to_string(m)] = sc.prices(m);
    json j{{"probability", sc.probability}, {"clearing_prices", prices}, {"c_up", sc.c_up}, {"c_down", sc.c_down}};
    if (!sc.frequency_trace.empty()) j["frequency_trace"] = sc.frequency_trace;
    arr.push_back(std::move(j));
  }
  return json{{"scenarios", arr}}.dump(2) + "\n";
}

std::string solution_to_json(const Solution& sol, const MilpInstance& in, const SolveSummary& summary) {
  const auto settlement = settle(sol, in);
  json hours = json::array();
  for (std::size_t h = 0; h < in.H; ++h) {
    const int k = sol.bid_pair(h);
    json hour{{"hour", h}};
    hour["bid"] = k < 0 ? json(nullptr) : json(label(in.structure.pairs[static_cast<std::size_t>(k)]));
    hour["price"] = k < 0 ? json(nullptr) : json(sol.x_price[h]);
    json per_s = json::array();
    for (std::size_t s = 0; s < in.S; ++s) {
      const auto& row = settlement.rows[s * in.H + h];
      per_s.push_back({{"scenario", s},
                       {"accepted", k >= 0 && sol.x_acc[in.shk(s, h, static_cast<std::size_t>(k))] == 1},
                       {"w_ok", sol.w_ok[in.sh(s, h)] == 1},
                       {"availability", row.availability},
                       {"spot_revenue", row.spot_revenue},
                       {"spot_cost", row.spot_cost},
                       {"energy", row.energy}});
    }
    hour["scenarios"] = std::move(per_s);
    hours.push_back(std::move(hour));
  }
  double total_slack = 0.0;
  for (std::size_t i = 0; i < sol.s_dch.size(); ++i) total_slack += sol.s_dch[i] + sol.s_ch[i];
  json j{{"status", summary.status},
         {"objective", sol.objective},
         {"bound", summary.bound},
         {"nodes", summary.nodes},
         {"expected_settlement", settlement.expected_total},
         {"scenario_totals", settlement.scenario_totals},
         {"total_slack", total_slack},
         {"hours", std::move(hours)}};
  return j.dump(2) + "\n";
}

void write_solution_csv(std::ostream& out, const Solution& sol, const MilpInstance& in) {
  out << "s,t,hour,soc,z_dch,z_ch,z_net,s_dch,s_ch\n";
  for (std::size_t s = 0; s < in.S; ++s) {
    for (std::size_t t = 0; t < in.T; ++t) {
      const auto i = in.st(s, t);
      out << s << ',' << t << ',' << in.hour_of_step(t) << ',' << format_double(sol.z_soc[i]) << ','
          << format_double(sol.z_dch[i]) << ',' << format_double(sol.z_ch[i]) << ','
          << format_double(sol.z_net[i]) << ',' << format_double(sol.s_dch[i]) << ','
          << format_double(sol.s_ch[i]) << '\n';
    }
  }
}

}  // namespace bessbid::sched
