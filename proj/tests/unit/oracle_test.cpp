#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bessbid/error.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/oracle.hpp"
#include "test_support.hpp"

namespace bessbid::sched {
namespace {

testing::TinyInstance one_pair(MarketPower pair, double n, double d, double sdch, double sch, std::size_t hours) {
  testing::TinyInstance t;
  t.params.hours = hours;
  t.structure.pairs = {pair};
  Scenario sc;
  sc.prices(MarketId::N).assign(hours, n);
  sc.prices(MarketId::D).assign(hours, d);
  sc.prices(MarketId::SDch).assign(hours, sdch);
  sc.prices(MarketId::SCh).assign(hours, sch);
  sc.c_up.assign(hours, 0.0);
  sc.c_down.assign(hours, 0.0);
  t.scenarios = {sc};
  t.traces = {gen::flat_frequency(TimePoint{}, hours)};
  return t;
}

TEST(Oracle, NoProfitableBidGivesZero) {
  const auto in = one_pair({MarketId::SCh, 0.8}, 0, 0, 0, 30, 2).build();
  const auto r = brute_force_oracle(in);
  EXPECT_EQ(r.objective, 0.0);
}

TEST(Oracle, SingleFcrnHourClosedForm) {
  // Pay-as-bid: the best bid equals the clearing price, revenue power x price.
  const auto in = one_pair({MarketId::N, 0.9}, 20, 0, 0, 0, 1).build();
  const auto r = brute_force_oracle(in);
  EXPECT_NEAR(r.objective, 18.0, 1e-12);
  EXPECT_NEAR(r.solution.x_price[0], 20.0, 1e-12);
  EXPECT_TRUE(validate_solution(r.solution, in).ok());
}

TEST(Oracle, ZeroSpotPricesNeverDischarge) {
  testing::TinyInstance t = one_pair({MarketId::SDch, 0.8}, 5, 0, 0, 0, 3);
  t.structure.pairs.push_back({MarketId::N, 0.5});
  const auto in = t.build();
  const auto r = brute_force_oracle(in);
  for (std::size_t h = 0; h < in.H; ++h) EXPECT_NE(r.solution.bid_pair(h), 0);
  EXPECT_NEAR(r.objective, 3 * 0.5 * 5, 1e-9);
}

TEST(Oracle, CapIsEnforced) {
  std::mt19937_64 rng(3);
  const auto in = testing::random_tiny_instance(rng).build();
  EXPECT_THROW(brute_force_oracle(in, {.max_assignments = 1}), SolverError);
}

TEST(Oracle, AgreesWithBranchAndBound) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 20; ++it) {
    const auto t = testing::random_tiny_instance(rng);
    const auto in = t.build();
    const auto o = brute_force_oracle(in);
    const auto b = milp::branch_and_bound(in.lp);
    ASSERT_TRUE(b.has_incumbent);
    EXPECT_NEAR(b.objective, o.objective, 1e-6 * std::max(1.0, std::abs(o.objective))) << "instance " << it;
    EXPECT_TRUE(validate_solution(o.solution, in).ok());
  }
}

}  // namespace
}  // namespace bessbid::sched
