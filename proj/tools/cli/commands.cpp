#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bessbid/error.hpp"
#include "bessbid/milp/lp_format.hpp"
#include "bessbid/scenario_generator.hpp"
#include "bessbid/scheduling_io.hpp"
#include "output_set.hpp"

namespace bessbid::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class F>
std::string to_text(F&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

// The output location is not part of the run, so it stays out of the saved
// config and its hash.
std::string effective_config_text(const RunConfig& config) {
  auto raw = config.raw;
  raw.erase("output_dir");
  return raw.dump(2) + "\n";
}

void finish(OutputSet& out, const RunConfig& config, const std::string& command) {
  const auto text = effective_config_text(config);
  out.write("config.json", text);
  out.write_manifest(command, text);
  spdlog::info("{}: wrote manifest to {}", command, (out.root() / "manifest.json").string());
}

std::vector<FrequencyTrace> load_traces(const std::vector<std::filesystem::path>& paths) {
  std::vector<FrequencyTrace> traces;
  for (const auto& p : paths) traces.push_back(load_frequency_csv(p));
  return traces;
}

struct Model {
  std::vector<sched::Scenario> scenarios;
  sched::MilpInstance instance;
};

// Scenario s uses its own trace path, else data/frequency[s], else the single
// configured trace.
Model build_model(const RunConfig& config) {
  if (config.scenarios.empty()) throw ConfigError("data/scenarios is not set");
  Model m;
  m.scenarios = sched::load_scenarios_json(config.scenarios);
  std::vector<FrequencyTrace> traces;
  for (std::size_t s = 0; s < m.scenarios.size(); ++s) {
    std::filesystem::path p = m.scenarios[s].frequency_trace;
    if (p.empty() && s < config.frequency.size()) p = config.frequency[s];
    if (p.empty() && config.frequency.size() == 1) p = config.frequency[0];
    if (p.empty()) throw DataError("scenario " + std::to_string(s) + " has no frequency trace");
    if (!std::filesystem::exists(p)) throw DataError("input file not found: " + p.string());
    traces.push_back(load_frequency_csv(p));
  }
  const auto meb = droop::build_meb(traces, config.bids.pairs, config.bess.step_minutes, config.bess.hours,
                                    config.droop);
  m.instance = sched::build_instance(config.bess, config.bids, m.scenarios, meb);
  spdlog::info("model: {} columns, {} rows, {} scenarios", m.instance.lp.num_cols(), m.instance.lp.num_rows(),
               m.scenarios.size());
  return m;
}

json violations_json(const sched::ValidationReport& report) {
  json v = json::array();
  for (const auto& x : report.violations) v.push_back({{"id", x.id}, {"residual", x.residual}});
  return v;
}

}  // namespace

void configure_logging() {
  auto logger = spdlog::get("bessbid");
  if (!logger) {
    logger = spdlog::stderr_color_mt("bessbid");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("BESSBID_LOG_LEVEL"); env && *env) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when asked for.
    if (level == spdlog::level::off && std::string(env) != "off") level = spdlog::level::info;
  }
  spdlog::set_level(level);
}

void cmd_ingest(const RunConfig& config) {
  if (config.hourly.empty() && config.frequency.empty()) throw ConfigError("nothing to ingest: data/hourly and data/frequency are empty");
  OutputSet out(config.output_dir);
  ordered_json summary = ordered_json::array();
  for (const auto& src : config.hourly) {
    const auto series = load_hourly_csv(src.path, src.schema);
    const auto logrev = to_log_revenue(series, config.utc_offset_hours);
    auto rejections = series.rejections;
    rejections.insert(rejections.end(), logrev.rejections.begin(), logrev.rejections.end());
    const auto tag = src.tag();
    out.write("ingest/" + tag + "_hourly.csv", to_text([&](std::ostream& o) { write_hourly_csv(o, series, src.schema); }));
    out.write("ingest/" + tag + "_log_revenue.csv", to_text([&](std::ostream& o) { write_log_revenue_csv(o, logrev); }));
    out.write("ingest/" + tag + "_rejections.jsonl",
              to_text([&](std::ostream& o) { write_rejections_jsonl(o, rejections); }));
    summary.push_back({{"source", src.path.filename().string()},
                       {"zone", series.zone},
                       {"market", to_string(series.market)},
                       {"records", series.records.size()},
                       {"gaps", series.gaps.size()},
                       {"rejected_rows", series.rejections.size()},
                       {"log_revenue_points", logrev.size()},
                       {"nonpositive_revenue", logrev.rejections.size()}});
    spdlog::info("ingest {}: {} records, {} gaps, {} rejections", tag, series.records.size(), series.gaps.size(),
                 rejections.size());
  }
  for (const auto& p : config.frequency) {
    const auto trace = load_frequency_csv(p);
    double lo = kFrequencyUpperBound, hi = kFrequencyLowerBound;
    for (double f : trace.hz) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    summary.push_back({{"source", p.filename().string()},
                       {"start", format_rfc3339(trace.start)},
                       {"minutes", trace.hz.size()},
                       {"hours", trace.hours()},
                       {"min_hz", lo},
                       {"max_hz", hi}});
  }
  out.write("ingest/summary.json", summary.dump(2) + "\n");
  finish(out, config, "ingest");
}

void cmd_forecast(const RunConfig& config) {
  if (config.hourly.empty()) throw ConfigError("data/hourly is empty");
  OutputSet out(config.output_dir);
  for (const auto& src : config.hourly) {
    const auto series = load_hourly_csv(src.path, src.schema);
    const auto logrev = to_log_revenue(series, config.utc_offset_hours);
    const auto result = forecast::backtest(logrev, config.backtest);
    if (result.weeks.empty()) {
      throw DataError(src.path.string() + ": series too short for one " + std::to_string(config.backtest.train_hours) +
                      "+" + std::to_string(config.backtest.horizon_hours) + " h window");
    }
    const auto tag = src.tag();
    out.write("forecast/" + tag + "_backtest.csv", to_text([&](std::ostream& o) { forecast::write_backtest_csv(o, result); }));
    out.write("forecast/" + tag + "_summary.json", forecast::backtest_summary_json(result, logrev) + "\n");
    out.write("forecast/" + tag + "_actual_vs_forecast.csv",
              to_text([&](std::ostream& o) { forecast::write_actual_vs_forecast_csv(o, result); }));
    out.write("forecast/" + tag + "_smoothers.csv",
              to_text([&](std::ostream& o) { forecast::write_smoother_csv(o, result.fits.back()); }));
    out.write("forecast/" + tag + "_gamfit.json", gam::to_json(result.fits.back()) + "\n");
    spdlog::info("forecast {}: {} weeks, mean adjusted R2 {:.4f}", tag, result.weeks.size(), result.mean_adjusted_r2);
  }
  finish(out, config, "forecast");
}

void cmd_simulate_meb(const RunConfig& config) {
  if (config.frequency.empty()) throw ConfigError("data/frequency is empty");
  const auto traces = load_traces(config.frequency);
  const auto table = droop::build_meb(traces, config.bids.pairs, config.bess.step_minutes, config.bess.hours, config.droop);
  OutputSet out(config.output_dir);
  out.write("meb/meb.csv", to_text([&](std::ostream& o) { droop::write_meb_csv(o, table); }));
  spdlog::info("simulate-meb: {} scenarios x {} steps x {} pairs", table.scenarios(), table.steps(), table.pair_count());
  finish(out, config, "simulate-meb");
}

void cmd_optimize(const RunConfig& config) {
  const auto model = build_model(config);
  const auto& in = model.instance;
  auto options = config.solver;
  options.on_progress = [](const milp::MipProgress& p) { spdlog::info("{}", milp::format_progress(p)); };
  const auto res = milp::branch_and_bound(in.lp, options);
  spdlog::info("optimize: status {} objective {} bound {} nodes {}", milp::to_string(res.status), res.objective,
               res.bound, res.nodes);
  if (!res.has_incumbent) {
    throw SolverError(std::string("no feasible plan: solver status ") + milp::to_string(res.status) +
                      (res.diagnostics.empty() ? "" : " (" + res.diagnostics + ")"));
  }
  const auto sol = sched::extract_solution(in, res.x);
  const auto report = sched::validate_solution(sol, in);
  OutputSet out(config.output_dir);
  const sched::SolveSummary summary{milp::to_string(res.status), res.bound, res.nodes};
  out.write("optimize/solution.json", sched::solution_to_json(sol, in, summary) + "\n");
  out.write("optimize/solution.csv", to_text([&](std::ostream& o) { sched::write_solution_csv(o, sol, in); }));
  ordered_json v;
  v["ok"] = report.ok();
  v["violations"] = violations_json(report);
  v["total_slack"] = report.total_slack;
  v["recomputed_objective"] = report.recomputed_objective;
  out.write("optimize/validation.json", v.dump(2) + "\n");
  finish(out, config, "optimize");
  if (!report.ok()) {
    throw SolverError("solution fails validation with " + std::to_string(report.violations.size()) +
                      " violations, first " + report.violations.front().id);
  }
}

void cmd_export_lp(const RunConfig& config) {
  const auto model = build_model(config);
  OutputSet out(config.output_dir);
  out.write("export/model.lp", milp::export_lp_text(model.instance.lp));
  finish(out, config, "export-lp");
}

void cmd_experiment(const RunConfig& config) {
  const auto& ex = config.experiment;
  if (ex.runs.empty()) throw ConfigError("experiment/runs is empty");
  bool any_forecast = false;
  std::set<gen::Regime> regimes;
  for (const auto& r : ex.runs) {
    any_forecast = any_forecast || r.source == exp::ScenarioSource::Forecast;
    regimes.insert(r.regime);
  }
  std::map<gen::Regime, exp::ExperimentData> data;
  for (auto regime : regimes) {
    exp::DataSpec ds;
    ds.regime = regime;
    ds.start = ex.start;
    ds.days = ex.days;
    ds.scenarios_per_day = ex.scenarios_per_day;
    ds.seed = config.seed;
    ds.with_forecast = any_forecast;
    ds.history_hours = ex.history_hours;
    ds.model = config.backtest.model;
    spdlog::info("experiment: generating {} data ({} days)", gen::to_string(regime), ex.days);
    data.emplace(regime, exp::make_experiment_data(ds));
  }

  std::vector<exp::ExperimentReport> reports;
  for (const auto& r : ex.runs) {
    exp::ExperimentSpec spec;
    spec.name = r.name;
    spec.source = r.source;
    spec.bids = r.bids;
    spec.soc_mode = r.soc_mode;
    spec.freq_levels = config.freq_levels;
    spec.spot_levels = config.spot_levels;
    spec.params = config.bess;
    spec.bid_max = config.bids.bid_max;
    spec.epsilon = config.bids.epsilon;
    spec.droop = config.droop;
    spec.solver = config.solver;
    spec.threads = config.threads;
    reports.push_back(exp::run_experiment(spec, data.at(r.regime)));
    spdlog::info("experiment {}: profit {:.4f}{}", r.name, reports.back().profit,
                 reports.back().partial ? " (partial)" : "");
  }
  auto find = [&](const std::string& name) -> const exp::ExperimentReport& {
    for (const auto& rep : reports) {
      if (rep.name == name) return rep;
    }
    throw ConfigError("comparison refers to unknown run '" + name + "'");
  };
  std::vector<exp::Comparison> comparisons;
  for (const auto& [a, b] : ex.comparisons) comparisons.push_back(exp::compare(find(a), find(b)));

  // A flexible end SOC relaxes the fixed one, so its profit can only be
  // higher; checked per day on every fixed/flexible pair.
  ordered_json ordering = ordered_json::array();
  for (std::size_t i = 0; i < ex.runs.size(); ++i) {
    for (std::size_t j = 0; j < ex.runs.size(); ++j) {
      const auto& fx = ex.runs[i];
      const auto& fl = ex.runs[j];
      if (fx.soc_mode != sched::SocMode::Fixed || fl.soc_mode != sched::SocMode::Flexible) continue;
      if (fx.regime != fl.regime || fx.source != fl.source || fx.bids != fl.bids) continue;
      std::size_t violated = 0;
      for (std::size_t d = 0; d < reports[i].days.size(); ++d) {
        const double a = reports[i].days[d].profit, b = reports[j].days[d].profit;
        const double tol = config.solver.rel_gap * std::max(1.0, std::abs(a)) + config.solver.abs_gap + 1e-9;
        if (b < a - tol) ++violated;
      }
      if (violated > 0) spdlog::warn("flexible run {} earns less than fixed run {} on {} days", fl.name, fx.name, violated);
      ordering.push_back({{"fixed", fx.name}, {"flexible", fl.name}, {"days_violated", violated}});
    }
  }

  OutputSet out(config.output_dir);
  ordered_json report;
  report["runs"] = ordered_json::array();
  for (const auto& rep : reports) report["runs"].push_back(ordered_json::parse(exp::report_json(rep)));
  report["comparisons"] = ordered_json::parse(exp::comparisons_json(comparisons));
  report["soc_ordering"] = ordering;
  out.write("experiment/report.json", report.dump(2) + "\n");
  out.write("experiment/runs.csv", to_text([&](std::ostream& o) { exp::write_report_csv(o, reports); }));
  out.write("experiment/comparisons.csv", to_text([&](std::ostream& o) { exp::write_comparison_csv(o, comparisons); }));
  finish(out, config, "experiment");
}

void cmd_synth(const RunConfig& config) {
  const auto& sy = config.synth;
  if (sy.weeks == 0 || sy.hours == 0 || sy.scenarios == 0) throw ConfigError("synth weeks, hours and scenarios must be positive");
  const auto cfg = gen::RegimeConfig::for_regime(sy.regime);
  OutputSet out(config.output_dir);
  const std::size_t hours = sy.weeks * forecast::kHoursPerWeek;
  ordered_json hourly = ordered_json::array();
  for (auto market : {RevenueMarket::Spot, RevenueMarket::FcrN}) {
    const auto series = gen::synthetic_hourly_series(cfg, sy.zone, market, sy.start, hours,
                                                     config.seed + static_cast<std::uint64_t>(market));
    const std::string name = sy.zone + "_" + to_string(market) + ".csv";
    CsvSchema schema;
    schema.zone = sy.zone;
    schema.market = market;
    out.write("synth/" + name, to_text([&](std::ostream& o) { write_hourly_csv(o, series, schema); }));
    hourly.push_back({{"path", name}, {"zone", sy.zone}, {"market", to_string(market)}});
  }
  // Scenario day directly follows the hourly history.
  const TimePoint day = sy.start + std::chrono::hours{static_cast<long>(hours)};
  auto gd = gen::generate_day(cfg, day, day_of_week(day, 0), sy.scenarios, config.seed, sy.hours);
  ordered_json freq = ordered_json::array();
  for (std::size_t s = 0; s < gd.scenarios.size(); ++s) {
    const std::string name = "frequency_s" + std::to_string(s) + ".csv";
    out.write("synth/" + name, to_text([&](std::ostream& o) { write_frequency_csv(o, gd.traces[s]); }));
    gd.scenarios[s].frequency_trace = name;
    freq.push_back(name);
  }
  out.write("synth/scenarios.json", sched::scenarios_to_json(gd.scenarios) + "\n");
  ordered_json run;
  run["seed"] = config.seed;
  run["output_dir"] = "out";
  run["data"] = {{"hourly", hourly}, {"frequency", freq}, {"scenarios", "scenarios.json"}};
  run["bess"] = {{"hours", sy.hours}};
  out.write("synth/run.json", run.dump(2) + "\n");
  finish(out, config, "synth");
}

int run_cli(const std::vector<std::string>& args) {
  configure_logging();
  CLI::App app{"Bid scheduling for a battery in Nordic spot and frequency reserve markets", "bessbid"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"ingest", "Validate hourly and frequency inputs and write cleaned series", cmd_ingest},
      {"forecast", "Rolling one-week-ahead GAM backtest", cmd_forecast},
      {"simulate-meb", "Market energy blocks from frequency traces", cmd_simulate_meb},
      {"optimize", "Build and solve the bidding MILP", cmd_optimize},
      {"experiment", "Run study designs on synthetic regimes", cmd_experiment},
      {"export-lp", "Write the bidding MILP in LP format", cmd_export_lp},
      {"synth", "Write synthetic inputs and a matching run config", cmd_synth},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-c,--config", config_path, "JSON run config")->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "Override a config value: /json/pointer=value")->take_all();
    sub->add_option("-o,--output", output_dir, "Output directory (overrides output_dir)");
    apps.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDataError;
  }

  try {
    for (std::size_t i = 0; i < apps.size(); ++i) {
      if (!apps[i]->parsed()) continue;
      RunConfig config = config_path.empty()
                             ? make_run_config(json::object(), overrides, std::filesystem::current_path())
                             : load_run_config(config_path, overrides);
      if (!output_dir.empty()) config.output_dir = std::filesystem::absolute(output_dir);
      check_paths_exist(config);
      subs[i].run(config);
      return kExitOk;
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return (e.kind() == ErrorKind::Data || e.kind() == ErrorKind::Config) ? kExitDataError : kExitSolverError;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kExitSolverError;
  }
  return kExitDataError;
}

}  // namespace bessbid::cli
