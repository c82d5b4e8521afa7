#include "bessbid/experiment_harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "bessbid/error.hpp"
#include "bessbid/milp/branch_and_bound.hpp"
#include "text_util.hpp"

namespace bessbid::exp {

using detail::format_double;
using nlohmann::json;

const char* to_string(ScenarioSource s) { return s == ScenarioSource::Original ? "original" : "forecast"; }
const char* to_string(BidMode b) { return b == BidMode::Single ? "single" : "multi"; }

ScenarioSource scenario_source_from_string(const std::string& s) {
  if (s == "original") return ScenarioSource::Original;
  if (s == "forecast" || s == "gam") return ScenarioSource::Forecast;
  throw ConfigError("unknown scenario source '" + s + "' (expected original or forecast)");
}

BidMode bid_mode_from_string(const std::string& s) {
  if (s == "single") return BidMode::Single;
  if (s == "multi") return BidMode::Multi;
  throw ConfigError("unknown bid mode '" + s + "' (expected single or multi)");
}

sched::BidStructure ExperimentSpec::bid_structure() const {
  const bool multi = bids == BidMode::Multi;
  const auto& f = !freq_levels.empty() ? freq_levels : (multi ? sched::kMultiFreqLevels : sched::kSingleFreqLevels);
  const auto& s = !spot_levels.empty() ? spot_levels : (multi ? sched::kMultiSpotLevels : sched::kSingleSpotLevels);
  auto b = sched::BidStructure::from_levels(f, s);
  b.bid_max = bid_max;
  b.epsilon = epsilon;
  return b;
}

namespace {

constexpr MarketId kForecastMarkets[] = {MarketId::SDch, MarketId::N, MarketId::D};

std::vector<double> gam_week_forecast(const std::vector<double>& prices, const std::vector<TimePoint>& times,
                                      std::size_t begin, std::size_t end, TimePoint week_start,
                                      const forecast::WeeklyModelOptions& model) {
  std::vector<HourlyRecord> records;
  for (std::size_t i = begin; i < end; ++i) records.push_back({times[i], prices[i], 1.0, i});
  const auto series = to_log_revenue(make_hourly_series("synthetic", RevenueMarket::Spot, std::move(records)));
  const auto fit = forecast::fit_weekly_model(series, 0, series.size(), model);
  return forecast::forecast_week(fit, week_start, 0).forecast;
}

}  // namespace

ExperimentData make_experiment_data(const DataSpec& spec) {
  if (spec.days == 0) throw ConfigError("experiment needs at least one day");
  if (spec.scenarios_per_day == 0) throw ConfigError("experiment needs at least one scenario per day");
  const auto cfg = gen::RegimeConfig::for_regime(spec.regime);
  const std::size_t history = spec.with_forecast ? spec.history_hours : 0;
  const std::size_t total = history + spec.days * 24;
  const TimePoint origin = spec.start - std::chrono::hours{static_cast<long>(history)};

  // Realized prices drive scenario 0 and the forecast history.
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, cfg.price_noise);
  std::vector<TimePoint> times(total);
  std::array<std::vector<double>, 4> realized;
  for (auto& v : realized) v.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    times[i] = origin + std::chrono::hours{static_cast<long>(i)};
    const int h = hour_of_day(times[i], 0), d = day_of_week(times[i], 0);
    for (MarketId m : kForecastMarkets) {
      realized[static_cast<std::size_t>(m)][i] = gen::mean_price(cfg, m, d, h) * std::exp(noise(rng));
    }
  }

  std::array<std::vector<double>, 4> forecast;
  if (spec.with_forecast) {
    for (auto& v : forecast) v.resize(total);
    for (std::size_t w = history; w < total; w += 168) {
      for (MarketId m : kForecastMarkets) {
        const auto idx = static_cast<std::size_t>(m);
        const auto week = gam_week_forecast(realized[idx], times, w - history, w, times[w], spec.model);
        for (std::size_t i = 0; i < 168 && w + i < total; ++i) forecast[idx][w + i] = week[i];
      }
    }
  }

  ExperimentData data;
  for (std::size_t day = 0; day < spec.days; ++day) {
    DayData dd;
    const std::size_t first = history + day * 24;
    dd.start = times[first];
    auto slice = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + static_cast<long>(first), v.begin() + static_cast<long>(first + 24));
    };
    const auto spot_i = static_cast<std::size_t>(MarketId::SDch);
    const auto n_i = static_cast<std::size_t>(MarketId::N);
    const auto d_i = static_cast<std::size_t>(MarketId::D);
    const std::uint64_t day_seed = spec.seed * 1'000'003ULL + day * 7919ULL + 17ULL;
    const double p = 1.0 / static_cast<double>(spec.scenarios_per_day);
    dd.original.push_back(gen::make_scenario(p, slice(realized[spot_i]), slice(realized[n_i]), slice(realized[d_i])));
    if (spec.scenarios_per_day > 1) {
      const auto extra = gen::generate_day(cfg, dd.start, day_of_week(dd.start, 0), spec.scenarios_per_day - 1,
                                           day_seed, 24);
      for (auto sc : extra.scenarios) {
        sc.probability = p;
        dd.original.push_back(std::move(sc));
      }
    }
    double rest = 1.0;
    for (std::size_t s = 0; s + 1 < dd.original.size(); ++s) rest -= dd.original[s].probability;
    dd.original.back().probability = rest;
    std::mt19937_64 trace_rng(day_seed ^ 0x9E3779B97F4A7C15ULL);
    for (std::size_t s = 0; s < dd.original.size(); ++s) {
      dd.traces.push_back(gen::synthetic_frequency(dd.start, 24, trace_rng(), cfg.fcrd_dip_rate));
    }
    if (spec.with_forecast) {
      dd.forecast.push_back(
          gen::make_scenario(1.0, slice(forecast[spot_i]), slice(forecast[n_i]), slice(forecast[d_i])));
    }
    data.days.push_back(std::move(dd));
  }
  return data;
}

namespace {

DayResult solve_day(const ExperimentSpec& spec, const DayData& day) {
  DayResult r;
  r.start = day.start;
  const bool fc = spec.source == ScenarioSource::Forecast;
  const auto& scenarios = fc ? day.forecast : day.original;
  if (scenarios.empty()) throw DataError("day " + format_rfc3339(day.start) + " has no " + to_string(spec.source) + " scenarios");
  if (day.traces.size() < (fc ? 1 : scenarios.size())) throw DataError("day " + format_rfc3339(day.start) + " lacks frequency traces");
  std::vector<FrequencyTrace> traces(day.traces.begin(), day.traces.begin() + static_cast<long>(fc ? 1 : scenarios.size()));

  auto params = spec.params;
  params.soc_mode = spec.soc_mode;
  const auto structure = spec.bid_structure();
  const auto meb = droop::build_meb(traces, structure.pairs, params.step_minutes, params.hours, spec.droop);
  const auto instance = sched::build_instance(params, structure, scenarios, meb);
  const auto res = milp::branch_and_bound(instance.lp, spec.solver);
  r.status = milp::to_string(res.status);
  r.nodes = res.nodes;
  r.bound = res.bound;
  r.bid_pairs.assign(instance.H, -1);
  if (!res.has_incumbent) {
    r.hours_by_market[kShareIdle] = instance.H;
    return r;
  }
  const auto sol = sched::extract_solution(instance, res.x);
  const auto report = sched::validate_solution(sol, instance);
  r.violations = report.violations.size();
  r.total_slack = report.total_slack;
  r.profit = sol.objective;
  const auto st = sched::settle(sol, instance);
  for (const auto& row : st.rows) {
    const double p = instance.scenarios[row.scenario].probability;
    r.cost += p * row.spot_cost;
    if (row.pair >= 0) r.acceptance_hours += p;
  }
  for (std::size_t h = 0; h < instance.H; ++h) {
    const int k = sol.bid_pair(h);
    r.bid_pairs[h] = k;
    if (k < 0) {
      ++r.hours_by_market[kShareIdle];
    } else {
      ++r.hours_by_market[static_cast<std::size_t>(structure.pairs[static_cast<std::size_t>(k)].market)];
    }
  }
  return r;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, const ExperimentData& data) {
  ExperimentReport rep;
  rep.name = spec.name;
  rep.spec = spec;
  rep.days.resize(data.days.size());

  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(data.days.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t d = next++; d < data.days.size(); d = next++) {
      try {
        rep.days[d] = solve_day(spec, data.days[d]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::array<std::size_t, 5> counts{};
  for (const auto& d : rep.days) {
    rep.profit += d.profit;
    rep.cost += d.cost;
    rep.acceptance_hours += d.acceptance_hours;
    for (std::size_t i = 0; i < 5; ++i) counts[i] += d.hours_by_market[i];
    if (d.status != "OPTIMAL" && d.status != "GAP_REACHED") {
      rep.partial = true;
      rep.flags.push_back(format_rfc3339(d.start) + ": " + d.status);
    }
    if (d.violations > 0) {
      rep.partial = true;
      rep.flags.push_back(format_rfc3339(d.start) + ": " + std::to_string(d.violations) + " validation violations");
    }
  }
  for (std::size_t i = 0; i < 5; ++i) rep.hours += counts[i];
  for (std::size_t i = 0; i < 5; ++i) {
    rep.shares[i] = rep.hours == 0 ? 0.0 : 100.0 * static_cast<double>(counts[i]) / static_cast<double>(rep.hours);
  }
  return rep;
}

Delta delta(double a, double b) {
  Delta d{a, b, a - b, 0.0};
  if (a == b) {
    d.percent = 0.0;
  } else if (b == 0.0) {
    d.percent = a > b ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  } else {
    d.percent = (a - b) / std::abs(b) * 100.0;
  }
  return d;
}

Comparison compare(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.days.size() != b.days.size() || a.hours != b.hours) throw ConfigError("reports cover different horizons");
  for (std::size_t i = 0; i < a.days.size(); ++i) {
    if (a.days[i].start != b.days[i].start) throw ConfigError("reports cover different days");
  }
  Comparison c;
  c.a = a.name;
  c.b = b.name;
  c.profit = delta(a.profit, b.profit);
  c.cost = delta(a.cost, b.cost);
  c.acceptance_hours = delta(a.acceptance_hours, b.acceptance_hours);
  for (std::size_t i = 0; i < 5; ++i) c.share_points[i] = a.shares[i] - b.shares[i];
  return c;
}

namespace {

constexpr const char* kShareNames[] = {"N", "D", "S_DCH", "S_CH", "idle"};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json delta_json(const Delta& d) {
  return {{"a", d.a}, {"b", d.b}, {"delta", d.absolute}, {"delta_pct", finite_or_null(d.percent)}};
}

}  // namespace

std::string report_json(const ExperimentReport& r) {
  json shares = json::object();
  for (std::size_t i = 0; i < 5; ++i) shares[kShareNames[i]] = r.shares[i];
  json days = json::array();
  for (const auto& d : r.days) {
    json hours = json::object();
    for (std::size_t i = 0; i < 5; ++i) hours[kShareNames[i]] = d.hours_by_market[i];
    days.push_back({{"start", format_rfc3339(d.start)},
                    {"status", d.status},
                    {"profit", d.profit},
                    {"cost", d.cost},
                    {"acceptance_hours", d.acceptance_hours},
                    {"hours_by_market", hours},
                    {"nodes", d.nodes},
                    {"bound", d.bound},
                    {"total_slack", d.total_slack},
                    {"violations", d.violations},
                    {"bid_pairs", d.bid_pairs}});
  }
  json j{{"name", r.name},
         {"spec",
          {{"source", to_string(r.spec.source)},
           {"bids", to_string(r.spec.bids)},
           {"soc_mode", sched::to_string(r.spec.soc_mode)},
           {"step_minutes", r.spec.params.step_minutes},
           {"hours_per_day", r.spec.params.hours}}},
         {"profit", r.profit},
         {"cost", r.cost},
         {"acceptance_hours", r.acceptance_hours},
         {"hours", r.hours},
         {"shares_pct", shares},
         {"partial", r.partial},
         {"flags", r.flags},
         {"days", days}};
  return j.dump(2) + "\n";
}

std::string comparisons_json(const std::vector<Comparison>& comparisons) {
  json arr = json::array();
  for (const auto& c : comparisons) {
    json pts = json::object();
    for (std::size_t i = 0; i < 5; ++i) pts[kShareNames[i]] = c.share_points[i];
    arr.push_back({{"a", c.a},
                   {"b", c.b},
                   {"profit", delta_json(c.profit)},
                   {"cost", delta_json(c.cost)},
                   {"acceptance_hours", delta_json(c.acceptance_hours)},
                   {"share_points", pts}});
  }
  return json{{"comparisons", arr}}.dump(2) + "\n";
}

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << "run,day,profit,cost,acceptance_hours,n_hours,d_hours,sdch_hours,sch_hours,idle_hours\n";
  for (const auto& r : reports) {
    for (const auto& d : r.days) {
      out << r.name << ',' << format_rfc3339(d.start) << ',' << format_double(d.profit) << ','
          << format_double(d.cost) << ',' << format_double(d.acceptance_hours);
      for (auto c : d.hours_by_market) out << ',' << c;
      out << '\n';
    }
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& comparisons) {
  out << "a,b,metric,value_a,value_b,delta,delta_pct\n";
  auto row = [&](const Comparison& c, const char* metric, const Delta& d) {
    out << c.a << ',' << c.b << ',' << metric << ',' << format_double(d.a) << ',' << format_double(d.b) << ','
        << format_double(d.absolute) << ',' << (std::isfinite(d.percent) ? format_double(d.percent) : "") << '\n';
  };
  for (const auto& c : comparisons) {
    row(c, "profit", c.profit);
    row(c, "cost", c.cost);
    row(c, "acceptance_hours", c.acceptance_hours);
  }
}

}  // namespace bessbid::exp
