#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bessbid/scheduling_model.hpp"

namespace bessbid::sched {

// Accepts a single scenario object, an array of them, or {"scenarios": [...]}.
// Throws DataError naming the offending field.
std::vector<Scenario> parse_scenarios_json(std::string_view text);
std::vector<Scenario> load_scenarios_json(const std::filesystem::path& path);
std::string scenarios_to_json(const std::vector<Scenario>& scenarios);

struct SolveSummary {
  std::string status;
  double bound = 0.0;
  long nodes = 0;
};

// Bids, prices, acceptance, payments and objective.
std::string solution_to_json(const Solution& sol, const MilpInstance& instance,
                             const SolveSummary& summary);

// s,t,hour,soc,z_dch,z_ch,z_net,s_dch,s_ch per model step.
void write_solution_csv(std::ostream& out, const Solution& sol, const MilpInstance& instance);

}  // namespace bessbid::sched
