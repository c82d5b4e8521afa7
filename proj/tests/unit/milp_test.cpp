#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "bessbid/error.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/milp/lp_format.hpp"
#include "bessbid/milp/simplex.hpp"

namespace bessbid::milp {
namespace {

TEST(Simplex, SingleBoundedVariable) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, kInf, 1);
  lp.add_row("cap", {{x, 1}}, RowSense::LessEqual, 3);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
  EXPECT_NEAR(r.row_duals[0], 1.0, 1e-12);
}

TEST(Simplex, ContradictoryRowsAreInfeasible) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, kInf, 1);
  lp.add_row("lo", {{x, 1}}, RowSense::GreaterEqual, 2);
  lp.add_row("hi", {{x, 1}}, RowSense::LessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(Simplex, UnboundedDetected) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, kInf, 1);
  const int y = lp.add_column("y", 0, kInf, 0);
  lp.add_row("r", {{x, 1}, {y, -1}}, RowSense::LessEqual, 1);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

// Two plants (supply 20, 30), three markets (demand 10, 25, 15).
TEST(Simplex, TransportationToy) {
  const double cost[2][3] = {{8, 6, 10}, {9, 5, 3}};
  const double supply[2] = {20, 30}, demand[3] = {10, 25, 15};
  LinearProgram lp;
  lp.sense = ObjectiveSense::Minimize;
  int v[2][3];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) v[i][j] = lp.add_column("x" + std::to_string(i) + std::to_string(j), 0, kInf, cost[i][j]);
  }
  for (int i = 0; i < 2; ++i) lp.add_row("s" + std::to_string(i), {{v[i][0], 1}, {v[i][1], 1}, {v[i][2], 1}}, RowSense::LessEqual, supply[i]);
  for (int j = 0; j < 3; ++j) lp.add_row("d" + std::to_string(j), {{v[0][j], 1}, {v[1][j], 1}}, RowSense::Equal, demand[j]);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  // Market 0 must come from plant 0 (8 < 9), market 2 from plant 1 (3 < 10),
  // market 1 fills the rest of plant 1 first (5 < 6): 260 in total.
  EXPECT_NEAR(r.objective, 10 * 8 + 10 * 6 + 15 * 5 + 15 * 3, 1e-9);
  EXPECT_LE(lp.max_violation(r.x), 1e-9);
}

// Random dense LPs: the optimum must satisfy weak duality against the duals
// and stay feasible.
TEST(Simplex, RandomLpsSatisfyStrongDuality) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 30; ++it) {
    LinearProgram lp;
    const int n = 6, m = 4;
    for (int j = 0; j < n; ++j) lp.add_column("x" + std::to_string(j), 0, 1 + 4 * u(rng), u(rng));
    std::vector<double> b;
    for (int i = 0; i < m; ++i) {
      std::vector<Term> row;
      for (int j = 0; j < n; ++j) row.push_back({j, u(rng)});
      b.push_back(1 + 2 * u(rng));
      lp.add_row("r" + std::to_string(i), row, RowSense::LessEqual, b.back());
    }
    const auto r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_LE(lp.max_violation(r.x), 1e-9);
    // Reduced costs c_j - y^T A_j decide which bound each column sits at.
    double dual = 0.0;
    for (int i = 0; i < m; ++i) {
      EXPECT_GE(r.row_duals[static_cast<std::size_t>(i)], -1e-9);
      dual += r.row_duals[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < n; ++j) {
      double rc = lp.objective(j);
      for (int i = 0; i < m; ++i) {
        for (const auto& t : lp.row(i)) {
          if (t.col == j) rc -= r.row_duals[static_cast<std::size_t>(i)] * t.coef;
        }
      }
      dual += std::max(0.0, rc) * lp.col_upper(j);
    }
    EXPECT_NEAR(dual, r.objective, 1e-8);
  }
}

TEST(BranchAndBound, IntegralRootNeedsOneNode) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, 1, 2, true);
  const int y = lp.add_column("y", 0, 1, 1, true);
  lp.add_row("r", {{x, 1}, {y, 1}}, RowSense::LessEqual, 2);
  const auto r = branch_and_bound(lp);
  EXPECT_EQ(r.status, MipStatus::Optimal);
  EXPECT_EQ(r.nodes, 1);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
}

TEST(BranchAndBound, TwoItemKnapsack) {
  // Weights 3 and 4, capacity 5, values 4 and 5: LP takes both fractionally,
  // the integer optimum takes the heavier item.
  LinearProgram lp;
  const int a = lp.add_column("a", 0, 1, 4, true);
  const int b = lp.add_column("b", 0, 1, 5, true);
  lp.add_row("cap", {{a, 3}, {b, 4}}, RowSense::LessEqual, 5);
  const auto r = branch_and_bound(lp);
  EXPECT_EQ(r.status, MipStatus::Optimal);
  EXPECT_NEAR(r.objective, 5.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
  EXPECT_GT(r.nodes, 1);
}

TEST(BranchAndBound, InfeasibleIntegerProgram) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, 1, 1, true);
  lp.add_row("half", {{x, 2}}, RowSense::Equal, 1);
  const auto r = branch_and_bound(lp);
  EXPECT_EQ(r.status, MipStatus::Infeasible);
  EXPECT_FALSE(r.has_incumbent);
}

LinearProgram random_knapsack(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(1.0, 10.0);
  LinearProgram lp;
  std::vector<Term> w1, w2;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const int c = lp.add_column("x" + std::to_string(j), 0, 1, u(rng), true);
    const double w = u(rng);
    total += w;
    w1.push_back({c, w});
    w2.push_back({c, u(rng)});
  }
  lp.add_row("w1", w1, RowSense::LessEqual, total / 2.5);
  lp.add_row("w2", w2, RowSense::LessEqual, total / 2.0);
  return lp;
}

double enumerate(const LinearProgram& lp) {
  const int n = lp.num_cols();
  double best = -kInf;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
    if (lp.max_violation(x) <= 1e-12) best = std::max(best, lp.evaluate_objective(x));
  }
  return best;
}

TEST(BranchAndBound, MatchesEnumerationAndBoundsAreMonotone) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 20; ++it) {
    const auto lp = random_knapsack(rng, 10);
    MipOptions opt;
    opt.record_nodes = true;
    const auto r = branch_and_bound(lp, opt);
    ASSERT_EQ(r.status, MipStatus::Optimal);
    EXPECT_NEAR(r.objective, enumerate(lp), 1e-9);
    std::map<long, double> bound;
    for (const auto& n : r.explored) bound[n.id] = n.bound;
    ASSERT_FALSE(r.explored.empty());
    EXPECT_GE(r.explored.front().bound, r.objective - 1e-9);
    for (const auto& n : r.explored) {
      if (n.parent >= 0 && bound.count(n.parent)) {
        EXPECT_LE(n.bound, bound[n.parent] + 1e-9);
      }
    }
  }
}

TEST(BranchAndBound, Deterministic) {
  std::mt19937_64 rng(10);
  const auto lp = random_knapsack(rng, 14);
  const auto a = branch_and_bound(lp);
  const auto b = branch_and_bound(lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(BranchAndBound, NodeLimitReportsLimit) {
  std::mt19937_64 rng(11);
  const auto lp = random_knapsack(rng, 16);
  MipOptions opt;
  opt.node_limit = 1;
  const auto r = branch_and_bound(lp, opt);
  EXPECT_TRUE(r.status == MipStatus::Limit || r.status == MipStatus::Optimal);
  EXPECT_GE(r.bound, r.objective - 1e-9);
}

TEST(LpFormat, OneVariableProgram) {
  LinearProgram lp;
  const int x = lp.add_column("x", 0, 4, 3);
  lp.add_row("c1", {{x, 2}}, RowSense::LessEqual, 5);
  const auto text = export_lp_text(lp);
  EXPECT_EQ(text.substr(0, text.find("Subject To")), "Maximize\n obj: 3 x\n");
  EXPECT_NE(text.find(" c1: 2 x <= 5\n"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(LpFormat, ExportParseExportIsAFixpoint) {
  std::mt19937_64 rng(12);
  auto lp = random_knapsack(rng, 6);
  const int f = lp.add_column("free_y", -kInf, kInf, -0.25);
  const int g = lp.add_column("g", -2, 7.5, 0, true);
  lp.add_row("eq", {{f, 1}, {g, -1}}, RowSense::Equal, 0.125);
  lp.add_row("ge", {{0, 1}, {g, 1}}, RowSense::GreaterEqual, -1);
  const auto text = export_lp_text(lp);
  const auto back = parse_lp_text(text);
  EXPECT_EQ(export_lp_text(back), text);
  ASSERT_EQ(back.num_cols(), lp.num_cols());
  for (int j = 0; j < lp.num_cols(); ++j) {
    EXPECT_EQ(back.col_name(j), lp.col_name(j));
    EXPECT_EQ(back.col_lower(j), lp.col_lower(j));
    EXPECT_EQ(back.col_upper(j), lp.col_upper(j));
    EXPECT_EQ(back.is_integer(j), lp.is_integer(j));
  }
  EXPECT_NEAR(branch_and_bound(back).objective, branch_and_bound(lp).objective, 1e-9);
}

TEST(LpFormat, RejectsBadNames) {
  LinearProgram lp;
  lp.add_column("1x", 0, 1, 1);
  EXPECT_THROW(export_lp_text(lp), SolverError);
  LinearProgram dup;
  dup.add_column("x", 0, 1, 1);
  dup.add_column("x", 0, 1, 1);
  EXPECT_THROW(validate_lp_names(dup), SolverError);
  LinearProgram kw;
  kw.add_column("End", 0, 1, 1);
  EXPECT_THROW(validate_lp_names(kw), SolverError);
}

TEST(LpFormat, ParseErrorsCarryLineNumbers) {
  try {
    parse_lp_text("Maximize\n obj: x\nSubject To\n c1: x <=\nEnd\n");
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(LinearProgram, ValidateRejectsNan) {
  LinearProgram lp;
  lp.add_column("x", 0, 1, std::nan(""));
  EXPECT_THROW(lp.validate(), SolverError);
}

}  // namespace
}  // namespace bessbid::milp
