#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bessbid/milp/linear_program.hpp"

namespace bessbid::milp {

struct LpOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  long max_iterations = 2'000'000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  long degenerate_limit = 10'000;
  int refactor_interval = 64;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> x;          // structural values
  std::vector<double> row_duals;  // d(objective)/d(rhs) in the original sense
  double objective = 0.0;         // original sense
  long iterations = 0;
  std::string diagnostics;
};

// Status of every column (structural first, then one logical per row).
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

struct Basis {
  std::vector<int> head;  // basic variable of each row position
  std::vector<VarStatus> status;
};

// Bounded-variable revised simplex over [A -I](x, r) = 0 with box bounds on
// structurals and row activities. Primal simplex (composite phase 1) and a
// dual simplex for warm starts after bound changes share one basis
// factorization. Objective is minimized internally.
class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, LpOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  // Structural bounds only. The basis is kept; values are adjusted lazily.
  void set_bounds(int col, double lower, double upper);
  double lower(int col) const;
  double upper(int col) const;

  LpStatus solve();

  Basis basis() const;
  // Loads a basis; falls back to the slack basis if it is singular.
  void set_basis(const Basis& basis);

  // Valid after solve() returned Optimal.
  std::vector<double> primal() const;
  std::vector<double> row_duals() const;
  double objective() const;
  long iterations() const;
  const std::string& diagnostics() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace bessbid::milp
