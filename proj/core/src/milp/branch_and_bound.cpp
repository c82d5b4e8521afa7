#include "bessbid/milp/branch_and_bound.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

namespace bessbid::milp {

const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "OPTIMAL";
    case MipStatus::GapReached: return "GAP_REACHED";
    case MipStatus::Infeasible: return "INFEASIBLE";
    case MipStatus::Limit: return "LIMIT";
    case MipStatus::Unbounded: return "UNBOUNDED";
    case MipStatus::NumericalFailure: return "NUMERICAL_FAILURE";
  }
  return "?";
}

std::string format_progress(const MipProgress& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "node=%ld bound=%.10g incumbent=%.10g gap=%.3e", p.node, p.bound,
                p.incumbent, p.gap);
  return buf;
}

namespace {

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  long id = 0;
  long parent = -1;
  double bound = 0.0;  // minimization form, inherited from the parent LP
  std::vector<BoundChange> changes;
  Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MipResult branch_and_bound(const LinearProgram& lp, const MipOptions& options) {
  lp.validate();
  const auto start = std::chrono::steady_clock::now();
  const double sign = lp.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;
  const int n = lp.num_cols();

  std::vector<int> integer_cols;
  for (int j = 0; j < n; ++j) {
    if (lp.is_integer(j)) integer_cols.push_back(j);
  }

  SimplexSolver solver(lp, options.lp);
  std::vector<double> cur_lo(static_cast<std::size_t>(n)), cur_hi(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    cur_lo[static_cast<std::size_t>(j)] = lp.col_lower(j);
    cur_hi[static_cast<std::size_t>(j)] = lp.col_upper(j);
  }

  MipResult result;
  double incumbent = std::numeric_limits<double>::infinity();  // minimization form
  double pruned_bound = std::numeric_limits<double>::infinity();
  bool numerical_trouble = false;

  auto cutoff = [&] {
    if (!result.has_incumbent) return std::numeric_limits<double>::infinity();
    return incumbent - std::max(options.abs_gap, options.rel_gap * std::abs(incumbent));
  };

  auto apply_bounds = [&](const std::vector<BoundChange>& changes) {
    std::vector<double> lo(integer_cols.size()), hi(integer_cols.size());
    for (std::size_t k = 0; k < integer_cols.size(); ++k) {
      lo[k] = lp.col_lower(integer_cols[k]);
      hi[k] = lp.col_upper(integer_cols[k]);
    }
    for (const auto& c : changes) {
      // Changes are cumulative and always tighten, so the last one wins.
      const auto it = std::lower_bound(integer_cols.begin(), integer_cols.end(), c.col);
      const auto k = static_cast<std::size_t>(it - integer_cols.begin());
      lo[k] = c.lower;
      hi[k] = c.upper;
    }
    for (std::size_t k = 0; k < integer_cols.size(); ++k) {
      const auto j = static_cast<std::size_t>(integer_cols[k]);
      if (cur_lo[j] != lo[k] || cur_hi[j] != hi[k]) {
        solver.set_bounds(integer_cols[k], lo[k], hi[k]);
        cur_lo[j] = lo[k];
        cur_hi[j] = hi[k];
      }
    }
  };

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  auto report = [&](long node, double bound_min) {
    if (!options.on_progress) return;
    MipProgress p;
    p.node = node;
    p.bound = sign * bound_min;
    p.incumbent = result.has_incumbent ? sign * incumbent : std::numeric_limits<double>::quiet_NaN();
    p.gap = result.has_incumbent
                ? std::abs(incumbent - bound_min) / std::max(1.0, std::abs(incumbent))
                : std::numeric_limits<double>::infinity();
    options.on_progress(p);
  };

  auto solve_node = [&]() -> LpStatus {
    LpStatus st = solver.solve();
    if (st == LpStatus::NumericalFailure || st == LpStatus::IterationLimit) {
      // Cold restart from the slack basis of a fresh solver.
      SimplexSolver fresh(lp, options.lp);
      for (int j : integer_cols) {
        fresh.set_bounds(j, cur_lo[static_cast<std::size_t>(j)], cur_hi[static_cast<std::size_t>(j)]);
      }
      st = fresh.solve();
      if (st == LpStatus::Optimal) {
        solver.set_basis(fresh.basis());
        st = solver.solve();
      }
    }
    return st;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{next_id++, -1, -std::numeric_limits<double>::infinity(), {}, {}});
  MipStatus limit_status = MipStatus::Optimal;

  while (!open.empty()) {
    if (result.nodes >= options.node_limit ||
        (options.time_limit_seconds > 0.0 && elapsed() > options.time_limit_seconds)) {
      limit_status = MipStatus::Limit;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= cutoff()) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    ++result.nodes;
    apply_bounds(node.changes);
    if (!node.basis.head.empty()) solver.set_basis(node.basis);
    const LpStatus st = solve_node();
    if (st == LpStatus::Infeasible) continue;
    if (st == LpStatus::Unbounded) {
      if (node.parent < 0) {
        result.status = MipStatus::Unbounded;
        result.lp_iterations = solver.iterations();
        return result;
      }
      continue;
    }
    if (st != LpStatus::Optimal) {
      numerical_trouble = true;
      result.diagnostics = std::string("node ") + std::to_string(node.id) + ": " + to_string(st) +
                           " " + solver.diagnostics();
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    const double value = sign * solver.objective();
    if (options.record_nodes) result.explored.push_back({node.id, node.parent, sign * value});
    if (options.log_every > 0 && result.nodes % options.log_every == 0) report(result.nodes, value);
    if (value >= cutoff()) {
      pruned_bound = std::min(pruned_bound, value);
      continue;
    }
    const auto x = solver.primal();

    int branch_col = -1;
    double best_dist = options.integrality_tolerance;
    for (int j : integer_cols) {
      const double v = x[static_cast<std::size_t>(j)];
      const double dist = std::abs(v - std::round(v));
      if (dist > best_dist) {
        best_dist = dist;
        branch_col = j;
      }
    }

    if (branch_col < 0) {
      // Integral: fix integers and polish the continuous part.
      const Basis basis = solver.basis();
      std::vector<BoundChange> fixed = node.changes;
      for (int j : integer_cols) {
        const double r = std::round(x[static_cast<std::size_t>(j)]);
        fixed.push_back({j, r, r});
      }
      apply_bounds(fixed);
      const LpStatus pst = solve_node();
      if (pst == LpStatus::Optimal) {
        auto px = solver.primal();
        for (int j : integer_cols) px[static_cast<std::size_t>(j)] = std::round(px[static_cast<std::size_t>(j)]);
        const double pv = sign * lp.evaluate_objective(px);
        if (pv < incumbent) {
          incumbent = pv;
          result.has_incumbent = true;
          result.x = std::move(px);
        }
      } else {
        numerical_trouble = true;
        result.diagnostics = "polish solve failed at node " + std::to_string(node.id);
      }
      solver.set_basis(basis);
      continue;
    }

    const double v = x[static_cast<std::size_t>(branch_col)];
    const auto bc = static_cast<std::size_t>(branch_col);
    const Basis basis = solver.basis();
    Node down{next_id++, node.id, value, node.changes, basis};
    down.changes.push_back({branch_col, cur_lo[bc], std::floor(v)});
    Node up{next_id++, node.id, value, std::move(node.changes), basis};
    up.changes.push_back({branch_col, std::ceil(v), cur_hi[bc]});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double bound = pruned_bound;
  while (!open.empty()) {
    bound = std::min(bound, open.top().bound);
    open.pop();
  }
  if (result.has_incumbent) bound = std::min(bound, incumbent);
  result.lp_iterations = solver.iterations();

  if (!result.has_incumbent) {
    result.status = limit_status == MipStatus::Limit ? MipStatus::Limit
                    : numerical_trouble              ? MipStatus::NumericalFailure
                                                     : MipStatus::Infeasible;
    result.bound = sign * bound;
    return result;
  }
  result.objective = sign * incumbent;
  result.bound = sign * bound;
  if (limit_status == MipStatus::Limit) {
    result.status = MipStatus::Limit;
  } else if (incumbent - bound <= 1e-9 * std::max(1.0, std::abs(incumbent))) {
    result.status = MipStatus::Optimal;
  } else {
    result.status = MipStatus::GapReached;
  }
  if (options.log_every > 0) report(result.nodes, bound);
  return result;
}

}  // namespace bessbid::milp
