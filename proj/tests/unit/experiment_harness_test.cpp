#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "bessbid/error.hpp"
#include "bessbid/experiment_harness.hpp"
#include "bessbid/scenario_generator.hpp"

namespace bessbid::exp {
namespace {

ExperimentData constant_days(const sched::Scenario& sc, std::size_t days, std::uint64_t seed) {
  ExperimentData data;
  for (std::size_t d = 0; d < days; ++d) {
    DayData day;
    day.start = TimePoint{} + std::chrono::hours{24 * static_cast<long>(d)};
    day.original = {sc};
    day.traces = {gen::synthetic_frequency(day.start, 24, seed + d, 0.3, 0.02)};
    data.days.push_back(day);
  }
  return data;
}

double share_sum(const ExperimentReport& r) { return std::accumulate(r.shares.begin(), r.shares.end(), 0.0); }

TEST(Experiment, DominantFcrnIsBidEveryHour) {
  ExperimentSpec spec;
  const auto r = run_experiment(spec, constant_days(gen::dominance_scenario(), 2, 1));
  EXPECT_EQ(r.shares[kShareN], 100.0);
  EXPECT_NEAR(share_sum(r), 100.0, 1e-9);
  EXPECT_FALSE(r.partial);
}

TEST(Experiment, AllZeroPricesStayIdle) {
  sched::Scenario sc;
  for (MarketId m : kAllMarkets) sc.prices(m).assign(24, 0.0);
  sc.c_up.assign(24, 0.0);
  sc.c_down.assign(24, 0.0);
  ExperimentSpec spec;
  const auto r = run_experiment(spec, constant_days(sc, 1, 2));
  EXPECT_EQ(r.profit, 0.0);
  EXPECT_EQ(r.acceptance_hours, 0.0);
  EXPECT_EQ(r.shares[kShareIdle], 100.0);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  DataSpec ds;
  ds.regime = gen::Regime::Y2021;
  ds.days = 3;
  ds.seed = 5;
  const auto data = make_experiment_data(ds);
  ExperimentSpec one;
  one.threads = 1;
  ExperimentSpec three = one;
  three.threads = 3;
  const auto a = run_experiment(one, data);
  const auto b = run_experiment(three, data);
  ASSERT_EQ(a.days.size(), b.days.size());
  for (std::size_t d = 0; d < a.days.size(); ++d) {
    EXPECT_EQ(a.days[d].profit, b.days[d].profit);
    EXPECT_EQ(a.days[d].bid_pairs, b.days[d].bid_pairs);
  }
  EXPECT_EQ(report_json(a), report_json(b));
}

TEST(Compare, PercentDeltas) {
  EXPECT_NEAR(delta(130, 100).percent, 30.0, 1e-12);
  EXPECT_NEAR(delta(96, 100).percent, -4.0, 1e-12);
  EXPECT_EQ(delta(0, 0).percent, 0.0);
  EXPECT_EQ(delta(5, -10).absolute, 15.0);
  EXPECT_NEAR(delta(5, -10).percent, 150.0, 1e-12);
}

TEST(Compare, SelfComparisonIsZero) {
  ExperimentSpec spec;
  const auto r = run_experiment(spec, constant_days(gen::fcrd_spike_scenario(), 1, 3));
  const auto c = compare(r, r);
  EXPECT_EQ(c.profit.percent, 0.0);
  EXPECT_EQ(c.cost.absolute, 0.0);
  for (double p : c.share_points) EXPECT_EQ(p, 0.0);
}

TEST(Compare, DifferentHorizonsRejected) {
  ExperimentSpec spec;
  const auto a = run_experiment(spec, constant_days(gen::dominance_scenario(), 1, 1));
  const auto b = run_experiment(spec, constant_days(gen::dominance_scenario(), 2, 1));
  EXPECT_THROW(compare(a, b), ConfigError);
}

TEST(Report, CsvHasOneRowPerDay) {
  ExperimentSpec spec;
  const auto r = run_experiment(spec, constant_days(gen::dominance_scenario(), 2, 1));
  std::ostringstream out;
  write_report_csv(out, {r});
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.substr(0, text.find('\n')), "run,day,profit,cost,acceptance_hours,n_hours,d_hours,sdch_hours,sch_hours,idle_hours");
}

}  // namespace
}  // namespace bessbid::exp
