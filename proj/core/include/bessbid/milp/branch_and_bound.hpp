#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bessbid/milp/linear_program.hpp"
#include "bessbid/milp/simplex.hpp"

namespace bessbid::milp {

struct MipProgress {
  long node = 0;
  double bound = 0.0;      // original sense
  double incumbent = 0.0;  // original sense; NaN when none
  double gap = 0.0;        // relative; +inf when no incumbent
};

struct MipOptions {
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  long node_limit = 1'000'000;
  double time_limit_seconds = 0.0;  // 0 disables
  double integrality_tolerance = 1e-6;
  LpOptions lp{.primal_tolerance = 1e-8};
  long log_every = 0;  // 0 disables progress callbacks
  std::function<void(const MipProgress&)> on_progress;
  bool record_nodes = false;
};

enum class MipStatus { Optimal, GapReached, Infeasible, Limit, Unbounded, NumericalFailure };

const char* to_string(MipStatus s);

struct NodeRecord {
  long id = 0;
  long parent = -1;
  double bound = 0.0;  // LP objective at the node, original sense
};

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = 0.0;
  double bound = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  std::vector<NodeRecord> explored;
  std::string diagnostics;
};

// Best-first branch and bound with dual-simplex warm starts. Branches on the
// most fractional integer column (lowest index on ties).
MipResult branch_and_bound(const LinearProgram& lp, const MipOptions& options = {});

// "node=<n> bound=<b> incumbent=<i> gap=<g>"
std::string format_progress(const MipProgress& p);

}  // namespace bessbid::milp
