#include <cmath>
#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/experiment_harness.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/milp/lp_format.hpp"
#include "bessbid/milp/simplex.hpp"
#include "bessbid/revenue_forecaster.hpp"
#include "bessbid/scenario_generator.hpp"
#include "test_support.hpp"

namespace {

using namespace bessbid;

LogRevenueSeries weekly_series(std::size_t hours) {
  const TimePoint monday{std::chrono::sys_days{std::chrono::year{2021} / 1 / 4}};
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 0.05);
  std::vector<HourlyRecord> recs;
  for (std::size_t i = 0; i < hours; ++i) {
    const auto t = monday + std::chrono::hours{static_cast<long>(i)};
    const double v = std::sin(2 * std::numbers::pi * hour_of_day(t) / 24.0) + 0.3 * day_of_week(t) / 7.0 + z(rng);
    recs.push_back({t, std::exp(v), 1.0, 0});
  }
  return to_log_revenue(make_hourly_series("SE3", RevenueMarket::Spot, recs));
}

void BM_GamWeeklyFit(benchmark::State& state) {
  const auto s = weekly_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forecast::fit_weekly_model(s));
}
BENCHMARK(BM_GamWeeklyFit)->Arg(336)->Arg(672)->Unit(benchmark::kMillisecond);

sched::MilpInstance full_day(gen::Regime regime, std::size_t scenarios) {
  exp::DataSpec ds;
  ds.regime = regime;
  ds.days = 1;
  ds.scenarios_per_day = scenarios;
  ds.seed = 3;
  const auto data = exp::make_experiment_data(ds);
  exp::ExperimentSpec spec;
  const auto meb = droop::build_meb(data.days[0].traces, spec.bid_structure().pairs, spec.params.step_minutes,
                                    spec.params.hours, spec.droop);
  return sched::build_instance(spec.params, spec.bid_structure(), data.days[0].original, meb);
}

void BM_RootLpFullDay(benchmark::State& state) {
  const auto in = full_day(gen::Regime::Y2019, 1);
  for (auto _ : state) benchmark::DoNotOptimize(milp::solve_lp(in.lp));
}
BENCHMARK(BM_RootLpFullDay)->Unit(benchmark::kMillisecond);

void BM_BranchAndBoundFullDay(benchmark::State& state) {
  const auto in = full_day(state.range(0) == 0 ? gen::Regime::Y2019 : gen::Regime::Y2021, 1);
  for (auto _ : state) benchmark::DoNotOptimize(milp::branch_and_bound(in.lp));
}
BENCHMARK(BM_BranchAndBoundFullDay)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BranchAndBoundTiny(benchmark::State& state) {
  std::mt19937_64 rng(42);
  std::vector<sched::MilpInstance> instances;
  for (int i = 0; i < 20; ++i) instances.push_back(testing::random_tiny_instance(rng).build());
  for (auto _ : state) {
    for (const auto& in : instances) benchmark::DoNotOptimize(milp::branch_and_bound(in.lp));
  }
}
BENCHMARK(BM_BranchAndBoundTiny)->Unit(benchmark::kMillisecond);

void BM_BuildMeb(benchmark::State& state) {
  const auto cfg = gen::RegimeConfig::for_regime(gen::Regime::Y2019);
  const auto day = gen::generate_day(cfg, TimePoint{}, 0, 3, 7, 24);
  const auto pairs = sched::BidStructure::multi().pairs;
  for (auto _ : state) benchmark::DoNotOptimize(droop::build_meb(day.traces, pairs, static_cast<int>(state.range(0)), 24));
}
BENCHMARK(BM_BuildMeb)->Arg(1)->Arg(15)->Unit(benchmark::kMicrosecond);

void BM_LpExportParse(benchmark::State& state) {
  const auto in = full_day(gen::Regime::Y2019, 1);
  for (auto _ : state) benchmark::DoNotOptimize(milp::parse_lp_text(milp::export_lp_text(in.lp)));
}
BENCHMARK(BM_LpExportParse)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
