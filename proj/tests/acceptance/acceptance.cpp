// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/error.hpp"
#include "bessbid/experiment_harness.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "bessbid/milp/lp_format.hpp"
#include "bessbid/oracle.hpp"
#include "bessbid/revenue_forecaster.hpp"
#include "bessbid/scenario_generator.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace bessbid;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 1. Smooth weekly signal with interaction, fitted on three weeks and scored
// on the fourth.
Outcome gam_recovery() {
  const auto t0 = Clock::now();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const TimePoint monday{std::chrono::sys_days{std::chrono::year{2021} / 1 / 4}};
  std::mt19937_64 rng(2021);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<HourlyRecord> recs;
  for (std::size_t i = 0; i < 4 * forecast::kHoursPerWeek; ++i) {
    const auto t = monday + std::chrono::hours{static_cast<long>(i)};
    const double sh = std::sin(two_pi * hour_of_day(t) / 24.0), cd = std::cos(two_pi * day_of_week(t) / 7.0);
    recs.push_back({t, std::exp(0.8 * sh + 0.4 * cd + 0.2 * sh * cd + noise(rng)), 1.0, 0});
  }
  const auto series = to_log_revenue(make_hourly_series("SE3", RevenueMarket::Spot, recs));
  forecast::BacktestOptions opt;
  opt.train_hours = 3 * forecast::kHoursPerWeek;
  const auto bt = forecast::backtest(series, opt);
  const double secs = seconds_since(t0);
  if (bt.weeks.size() != 1) return {false, "expected one held-out week"};
  const double r2 = bt.window_adjusted_r2[0], m = bt.weeks[0].mape;
  return {r2 >= 0.90 && m <= 0.05 && secs <= 30.0,
          fmt("adjusted R2 %.4f (>= 0.90), held-out MAPE %.2f%% (<= 5%%), %.2f s (<= 30 s)", r2, 100 * m, secs)};
}

// 2. Library MAPE against a plain loop in long double.
Outcome mape_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 500);
  std::uniform_real_distribution<double> mag(-3.0, 3.0);
  std::bernoulli_distribution neg(0.2);
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> a(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::pow(10.0, mag(rng)) * (neg(rng) ? -1 : 1);
      f[i] = std::pow(10.0, mag(rng)) * (neg(rng) ? -1 : 1);
    }
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::fabs(static_cast<long double>(a[i]) - f[i]) / std::fabs(static_cast<long double>(a[i]));
    }
    const double direct = static_cast<double>(sum / static_cast<long double>(n));
    worst = std::max(worst, std::abs(forecast::mape(a, f) - direct) / std::abs(direct));
  }
  return {worst <= 1e-12, fmt("1000 vectors, worst relative difference %.3g (<= 1e-12)", worst)};
}

struct TinyRun {
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  double worst_rel = 0.0;
  double slowest = 0.0;
  std::size_t validated = 0;
  std::size_t invalid = 0;
  std::string first_violation;
};

void check_incumbent(TinyRun& r, const std::vector<double>& x, const sched::MilpInstance& in) {
  const auto rep = sched::validate_solution(sched::extract_solution(in, x), in, 1e-6);
  ++r.validated;
  if (!rep.ok()) {
    ++r.invalid;
    if (r.first_violation.empty()) r.first_violation = rep.violations.front().id;
  }
}

// Shared by criteria 3 and 4: 60 random instances solved both ways.
const TinyRun& tiny_runs() {
  static const TinyRun run = [] {
    TinyRun r;
    std::mt19937_64 rng(20240601);
    while (r.instances < 60) {
      const auto t = testing::random_tiny_instance(rng);
      const auto in = t.build();
      sched::OracleResult o;
      try {
        o = sched::brute_force_oracle(in);
      } catch (const SolverError&) {
        continue;  // over the enumeration cap
      }
      ++r.instances;
      const auto t0 = Clock::now();
      const auto b = milp::branch_and_bound(in.lp);
      r.slowest = std::max(r.slowest, seconds_since(t0));
      if (!b.has_incumbent) {
        ++r.mismatches;
        continue;
      }
      const double d = rel_diff(b.objective, o.objective);
      r.worst_rel = std::max(r.worst_rel, d);
      if (d > 1e-6) ++r.mismatches;
      check_incumbent(r, b.x, in);
    }
    return r;
  }();
  return run;
}

Outcome milp_oracle() {
  const auto& r = tiny_runs();
  return {r.mismatches == 0 && r.slowest <= 5.0,
          fmt("%zu instances, %zu mismatches, worst relative gap %.3g (<= 1e-6), slowest solve %.3f s (<= 5 s)",
              r.instances, r.mismatches, r.worst_rel, r.slowest)};
}

// 4. Tiny-instance incumbents plus full 24 h days from both regimes.
Outcome constraint_fidelity() {
  TinyRun r = tiny_runs();
  for (auto regime : {gen::Regime::Y2019, gen::Regime::Y2021}) {
    exp::DataSpec ds;
    ds.regime = regime;
    ds.days = 3;
    ds.seed = 11;
    const auto data = exp::make_experiment_data(ds);
    for (auto mode : {sched::SocMode::Fixed, sched::SocMode::Flexible}) {
      for (const auto& day : data.days) {
        exp::ExperimentSpec spec;
        spec.soc_mode = mode;
        spec.params.soc_mode = mode;
        const auto meb = droop::build_meb(day.traces, spec.bid_structure().pairs, spec.params.step_minutes,
                                          spec.params.hours, spec.droop);
        const auto in = sched::build_instance(spec.params, spec.bid_structure(), day.original, meb);
        const auto b = milp::branch_and_bound(in.lp, spec.solver);
        if (b.has_incumbent) check_incumbent(r, b.x, in);
      }
    }
  }
  return {r.invalid == 0 && r.validated >= r.instances + 12,
          fmt("%zu incumbents validated at 1e-6, %zu with violations%s%s", r.validated, r.invalid,
              r.first_violation.empty() ? "" : ", first ", r.first_violation.c_str())};
}

// 5. Zero MEBs on a flat trace; linearity in power and saturation on random
// frequencies.
Outcome droop_laws() {
  const std::vector<MarketPower> pairs{{MarketId::N, 1.0}, {MarketId::D, 1.0}, {MarketId::N, 0.3}, {MarketId::D, 0.7}};
  const auto flat = gen::flat_frequency(TimePoint{}, 24);
  const auto fm = droop::build_meb(std::span(&flat, 1), pairs, 1, 24);
  double flat_max = 0.0;
  for (std::size_t t = 0; t < fm.steps(); ++t) {
    for (std::size_t k = 0; k < pairs.size(); ++k) flat_max = std::max({flat_max, fm.dch(0, t, k), fm.ch(0, t, k)});
  }

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(49.0, 51.0);
  std::vector<double> hz(1020);  // 17 h, the first 1000 samples plus a partial-hour pad
  for (auto& v : hz) v = u(rng);
  const auto trace = make_frequency_trace(TimePoint{}, hz);
  const auto m = droop::build_meb(std::span(&trace, 1), pairs, 1, 17);
  const droop::DroopConfig cfg;
  double lin = 0.0, sat = 0.0, bound = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) {
    // Linearity: the 0.3 and 0.7 blocks scale the unit blocks.
    lin = std::max({lin, std::abs(m.dch(0, t, 2) - 0.3 * m.dch(0, t, 0)), std::abs(m.ch(0, t, 2) - 0.3 * m.ch(0, t, 0)),
                    std::abs(m.dch(0, t, 3) - 0.7 * m.dch(0, t, 1)), std::abs(m.ch(0, t, 3) - 0.7 * m.ch(0, t, 1))});
    // Saturation: full activation past the limits, never more than full power.
    const double f = hz[t];
    const double n = droop::fcr_n_activation(f, cfg), d = droop::fcr_d_activation(f, cfg);
    if (std::abs(f - cfg.nominal_hz) >= cfg.fcrn_full_activation_hz) {
      sat = std::max(sat, std::abs(std::abs(n) - 1.0));
    }
    if (f <= cfg.fcrd_full_hz) sat = std::max(sat, std::abs(d - 1.0));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      bound = std::max(bound, m.dch(0, t, k) + m.ch(0, t, k) - pairs[k].power / 60.0);
    }
  }
  return {flat_max == 0.0 && lin <= 1e-12 && sat <= 1e-12 && bound <= 1e-12,
          fmt("flat-trace max block %.3g (== 0), linearity residual %.3g, saturation residual %.3g, power bound excess "
              "%.3g (all <= 1e-12, 1000 samples)",
              flat_max, lin, sat, bound)};
}

exp::ExperimentData days_with(const sched::Scenario& sc, std::size_t days, gen::Regime regime) {
  const auto cfg = gen::RegimeConfig::for_regime(regime);
  exp::ExperimentData data;
  for (std::size_t d = 0; d < days; ++d) {
    exp::DayData day;
    day.start = TimePoint{} + std::chrono::hours{24 * static_cast<long>(d)};
    day.original = {sc};
    day.traces = {gen::generate_day(cfg, day.start, 0, 1, 100 + d, 24).traces[0]};
    data.days.push_back(day);
  }
  return data;
}

// 6. Scenario where FCR-N pays most in every hour, and one with FCR-D spikes.
Outcome dominance() {
  exp::ExperimentSpec spec;
  const auto n = exp::run_experiment(spec, days_with(gen::dominance_scenario(), 3, gen::Regime::Y2019));
  const auto d = exp::run_experiment(spec, days_with(gen::fcrd_spike_scenario(), 3, gen::Regime::Y2021));
  const double n_share = n.shares[exp::kShareN], d_share = d.shares[exp::kShareD], idle = d.shares[exp::kShareIdle];
  return {n_share == 100.0 && d_share >= 90.0 && idle <= 5.0 && !n.partial && !d.partial,
          fmt("dominance scenario N share %.1f%% (== 100%%); FCR-D spike D share %.1f%% (>= 90%%), idle %.1f%% (<= 5%%)",
              n_share, d_share, idle)};
}

// 7. Flexible end SOC relaxes the fixed one, day by day.
Outcome soc_ordering() {
  exp::DataSpec ds;
  ds.regime = gen::Regime::Y2019;
  ds.days = 20;
  ds.seed = 77;
  const auto data = exp::make_experiment_data(ds);
  exp::ExperimentSpec fixed;
  fixed.threads = 4;
  exp::ExperimentSpec flexible = fixed;
  flexible.soc_mode = sched::SocMode::Flexible;
  const auto a = exp::run_experiment(fixed, data);
  const auto b = exp::run_experiment(flexible, data);
  std::size_t violated = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.days.size(); ++i) {
    const double fx = a.days[i].profit, fl = b.days[i].profit;
    // Both solves stop within rel_gap of their own bound.
    const double tol = fixed.solver.rel_gap * std::max(1.0, std::abs(b.days[i].bound)) + fixed.solver.abs_gap;
    worst = std::max(worst, fx - fl);
    if (fl < fx - tol) ++violated;
  }
  return {violated == 0 && a.days.size() == 20 && !a.partial && !b.partial,
          fmt("%zu paired days, %zu with flexible < fixed beyond the gap, largest shortfall %.3g", a.days.size(),
              violated, std::max(0.0, worst))};
}

// 8. LP files solved by HiGHS.
Outcome cross_solver() {
  const auto dir = testing::scratch_dir("acceptance_lp");
  std::mt19937_64 rng(808);
  std::vector<double> ours;
  std::string cmd = "python3 \"" BESSBID_SOURCE_DIR "/tools/highs_solve.py\"";
  for (int i = 0; i < 5; ++i) {
    const auto in = testing::random_tiny_instance(rng).build();
    const auto path = dir / ("toy" + std::to_string(i) + ".lp");
    std::ofstream(path) << milp::export_lp_text(in.lp);
    ours.push_back(milp::branch_and_bound(in.lp).objective);
    cmd += " \"" + path.string() + "\"";
  }
  cmd += " > \"" + (dir / "highs.txt").string() + "\" 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    std::ifstream err(dir / "highs.txt");
    std::string line;
    std::getline(err, line);
    return {false, "external solver failed: " + line};
  }
  std::ifstream res(dir / "highs.txt");
  std::string path, status;
  double obj = 0.0, worst = 0.0;
  std::size_t agreed = 0;
  for (std::size_t i = 0; i < ours.size() && (res >> path >> status >> obj); ++i) {
    const double d = rel_diff(obj, ours[i]);
    worst = std::max(worst, d);
    if (status == "Optimal" && d <= 1e-6) ++agreed;
  }
  return {agreed == 5, fmt("HiGHS agrees on %zu/5 toy models, worst relative difference %.3g (<= 1e-6)", agreed, worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every file of two output trees, compared byte for byte.
bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  std::vector<fs::path> left, right;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) left.push_back(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) right.push_back(fs::relative(e.path(), b));
  }
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  if (left != right || left.empty()) return false;
  files += left.size();
  for (const auto& rel : left) {
    if (slurp(a / rel) != slurp(b / rel)) return false;
  }
  return true;
}

// 9. Two separate processes per command.
Outcome determinism() {
  const auto dir = testing::scratch_dir("acceptance_det");
  const std::string exe = "\"" BESSBID_CLI_PATH "\"";
  auto sh = [&](const std::string& args) {
    return std::system(("BESSBID_LOG_LEVEL=error " + exe + " " + args + " > /dev/null 2>&1").c_str());
  };
  if (sh("synth --set /synth/weeks=3 /synth/hours=6 /seed=9 -o \"" + (dir / "data").string() + "\"") != 0) {
    return {false, "synth failed"};
  }
  const auto cfg = (dir / "data" / "synth" / "run.json").string();
  std::size_t files = 0;
  for (const std::string cmd : {"forecast", "optimize"}) {
    const auto a = dir / (cmd + "_a"), b = dir / (cmd + "_b");
    if (sh(cmd + " -c \"" + cfg + "\" -o \"" + a.string() + "\"") != 0 ||
        sh(cmd + " -c \"" + cfg + "\" -o \"" + b.string() + "\"") != 0) {
      return {false, cmd + " failed"};
    }
    if (!same_tree(a, b, files)) return {false, cmd + " outputs differ between runs"};
  }
  return {true, fmt("forecast and optimize: %zu output files byte-identical across two runs", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"GAM recovery", gam_recovery},
      {"MAPE oracle", mape_oracle},
      {"MILP-oracle equivalence", milp_oracle},
      {"constraint fidelity", constraint_fidelity},
      {"droop laws", droop_laws},
      {"dominance behavior", dominance},
      {"SOC-mode ordering", soc_ordering},
      {"cross-solver check", cross_solver},
      {"end-to-end determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
