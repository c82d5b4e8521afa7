#pragma once

#include <cstddef>

#include "bessbid/milp/simplex.hpp"
#include "bessbid/scheduling_model.hpp"

namespace bessbid::sched {

struct OracleLimits {
  // Upper bound on the number of enumerated per-hour bid/price/acceptance
  // assignments.
  std::size_t max_assignments = 1'000'000;
  milp::LpOptions lp{};
};

struct OracleResult {
  double objective = 0.0;
  Solution solution;
  std::size_t assignments = 0;
  std::size_t flow_solves = 0;
};

// Exhaustive search over bids, breakpoint prices and the acceptance patterns
// they allow, with the remaining energy flows solved as small LPs built from
// the instance data (not from instance.lp). Throws SolverError when the
// enumeration exceeds the cap.
OracleResult brute_force_oracle(const MilpInstance& instance, const OracleLimits& limits = {});

}  // namespace bessbid::sched
