#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bessbid/error.hpp"
#include "bessbid/scenario_generator.hpp"
#include "bessbid/time_utils.hpp"

namespace bessbid::cli {

using nlohmann::json;

std::string HourlySource::tag() const {
  std::string z = schema.zone.empty() ? std::string("zone") : schema.zone;
  return z + "_" + to_string(schema.market);
}

json default_config() {
  return json::parse(R"({
  "seed": 42,
  "output_dir": "out",
  "threads": 1,
  "utc_offset_hours": 0,
  "data": {"hourly": [], "frequency": [], "scenarios": ""},
  "zones": [],
  "markets": [],
  "gam": {
    "hour_k": 24, "day_k": 7, "cyclic_hour": false,
    "log10_lambda_min": -4.0, "log10_lambda_max": 8.0, "grid_points": 25, "max_sweeps": 4,
    "train_hours": 336, "horizon_hours": 168, "log_scale_scoring": false
  },
  "bess": {
    "e_min": 0.0, "e_max": 1.0, "soc_start": 0.5, "soc_end": 0.5, "ilf": 0.10,
    "step_minutes": 15, "hours": 24, "soc_mode": "fixed", "slack_penalty": 0.0
  },
  "bids": {"mode": "single", "freq_levels": [], "spot_levels": [], "bid_min": 0.0, "bid_max": null, "epsilon": 0.001},
  "droop": {
    "nominal_hz": 50.0, "fcrn_deadband_hz": 0.0, "fcrn_full_activation_hz": 0.1,
    "fcrd_start_hz": 49.9, "fcrd_full_hz": 49.5
  },
  "solver": {"rel_gap": 1e-6, "abs_gap": 1e-9, "node_limit": 1000000, "time_limit_seconds": 0.0, "log_every": 0},
  "experiment": {
    "regime": "2019-like", "start": "2019-01-07T00:00:00Z", "days": 7, "scenarios_per_day": 1,
    "history_hours": 336,
    "runs": [
      {"name": "original_single_fixed", "source": "original", "bids": "single", "soc_mode": "fixed"},
      {"name": "forecast_single_fixed", "source": "forecast", "bids": "single", "soc_mode": "fixed"},
      {"name": "original_multi_fixed", "source": "original", "bids": "multi", "soc_mode": "fixed"},
      {"name": "original_single_flexible", "source": "original", "bids": "single", "soc_mode": "flexible"}
    ],
    "comparisons": [
      ["forecast_single_fixed", "original_single_fixed"],
      ["original_multi_fixed", "original_single_fixed"],
      ["original_single_flexible", "original_single_fixed"]
    ]
  },
  "synth": {"regime": "2019-like", "start": "2019-01-07T00:00:00Z", "weeks": 5, "zone": "SE3", "scenarios": 1, "hours": 24}
})");
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0 || assignment[0] != '/') {
    throw ConfigError("override '" + assignment + "' must look like /json/pointer=value");
  }
  const std::string pointer = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  try {
    config[json::json_pointer(pointer)] = value;
  } catch (const json::exception& e) {
    throw ConfigError("override '" + assignment + "': " + e.what());
  }
}

namespace {

// Wraps json access so that type errors name the key.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& at(const std::string& key) const {
    if (!j_.is_object() || !j_.contains(key)) throw ConfigError("missing config key " + path_ + "/" + key);
    return j_.at(key);
  }
  Reader sub(const std::string& key) const { return Reader(at(key), path_ + "/" + key); }

  template <class T>
  T get(const std::string& key) const {
    try {
      return at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key " + path_ + "/" + key + " has the wrong type");
    }
  }

  double num(const std::string& key) const { return get<double>(key); }
  std::size_t count(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("config key " + path_ + "/" + key + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
  }
  TimePoint time(const std::string& key) const {
    const auto s = get<std::string>(key);
    const auto t = parse_rfc3339(s);
    if (!t) throw ConfigError("config key " + path_ + "/" + key + ": bad timestamp '" + s + "'");
    return *t;
  }

 private:
  const json& j_;
  std::string path_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

bool selected(const std::vector<std::string>& filter, const std::string& v) {
  return filter.empty() || std::find(filter.begin(), filter.end(), v) != filter.end();
}

}  // namespace

RunConfig make_run_config(const json& user, const std::vector<std::string>& overrides,
                          const std::filesystem::path& base_dir) {
  if (!user.is_object()) throw ConfigError("run config must be a JSON object");
  json cfg = default_config();
  cfg.merge_patch(user);
  for (const auto& o : overrides) apply_override(cfg, o);

  RunConfig rc;
  rc.raw = cfg;
  rc.base_dir = base_dir;
  const Reader r(cfg, "");
  rc.seed = r.get<std::uint64_t>("seed");
  rc.output_dir = resolve(base_dir, r.get<std::string>("output_dir"));
  rc.threads = std::max(1u, r.get<unsigned>("threads"));
  rc.utc_offset_hours = r.get<int>("utc_offset_hours");

  const auto zones = r.get<std::vector<std::string>>("zones");
  const auto markets = r.get<std::vector<std::string>>("markets");
  const Reader data = r.sub("data");
  for (const auto& h : data.at("hourly")) {
    const Reader e(h, "/data/hourly[]");
    HourlySource src;
    src.path = resolve(base_dir, e.get<std::string>("path"));
    src.schema.zone = h.value("zone", std::string());
    src.schema.market = revenue_market_from_string(h.value("market", std::string("spot")));
    src.schema.timestamp_column = h.value("timestamp_column", src.schema.timestamp_column);
    src.schema.price_column = h.value("price_column", src.schema.price_column);
    src.schema.volume_column = h.value("volume_column", src.schema.volume_column);
    src.schema.lenient = h.value("lenient", true);
    if (selected(zones, src.schema.zone) && selected(markets, to_string(src.schema.market))) {
      rc.hourly.push_back(std::move(src));
    }
  }
  for (const auto& f : data.get<std::vector<std::string>>("frequency")) rc.frequency.push_back(resolve(base_dir, f));
  rc.scenarios = resolve(base_dir, data.get<std::string>("scenarios"));

  const Reader g = r.sub("gam");
  rc.backtest.train_hours = g.count("train_hours");
  rc.backtest.horizon_hours = g.count("horizon_hours");
  rc.backtest.log_scale_scoring = g.get<bool>("log_scale_scoring");
  rc.backtest.threads = rc.threads;
  rc.backtest.model.hour_k = g.get<int>("hour_k");
  rc.backtest.model.day_k = g.get<int>("day_k");
  rc.backtest.model.cyclic_hour = g.get<bool>("cyclic_hour");
  rc.backtest.model.gcv.log10_lambda_min = g.num("log10_lambda_min");
  rc.backtest.model.gcv.log10_lambda_max = g.num("log10_lambda_max");
  rc.backtest.model.gcv.grid_points = g.get<int>("grid_points");
  rc.backtest.model.gcv.max_sweeps = g.get<int>("max_sweeps");

  const Reader b = r.sub("bess");
  rc.bess.e_min = b.num("e_min");
  rc.bess.e_max = b.num("e_max");
  rc.bess.soc_start = b.num("soc_start");
  rc.bess.soc_end = b.num("soc_end");
  rc.bess.ilf = b.num("ilf");
  rc.bess.step_minutes = b.get<int>("step_minutes");
  rc.bess.hours = b.count("hours");
  rc.bess.soc_mode = sched::soc_mode_from_string(b.get<std::string>("soc_mode"));
  rc.bess.slack_penalty = b.num("slack_penalty");
  rc.bess.validate();

  const Reader bd = r.sub("bids");
  rc.bid_mode = exp::bid_mode_from_string(bd.get<std::string>("mode"));
  rc.freq_levels = bd.get<std::vector<double>>("freq_levels");
  rc.spot_levels = bd.get<std::vector<double>>("spot_levels");
  const bool multi = rc.bid_mode == exp::BidMode::Multi;
  rc.bids = sched::BidStructure::from_levels(
      rc.freq_levels.empty() ? (multi ? sched::kMultiFreqLevels : sched::kSingleFreqLevels) : rc.freq_levels,
      rc.spot_levels.empty() ? (multi ? sched::kMultiSpotLevels : sched::kSingleSpotLevels) : rc.spot_levels);
  rc.bids.bid_min = bd.num("bid_min");
  // merge_patch drops keys set to null, so absence also means "default".
  if (cfg["bids"].contains("bid_max") && !cfg["bids"]["bid_max"].is_null()) rc.bids.bid_max = bd.num("bid_max");
  rc.bids.epsilon = bd.num("epsilon");
  rc.bids.validate();

  const Reader d = r.sub("droop");
  rc.droop.nominal_hz = d.num("nominal_hz");
  rc.droop.fcrn_deadband_hz = d.num("fcrn_deadband_hz");
  rc.droop.fcrn_full_activation_hz = d.num("fcrn_full_activation_hz");
  rc.droop.fcrd_start_hz = d.num("fcrd_start_hz");
  rc.droop.fcrd_full_hz = d.num("fcrd_full_hz");
  rc.droop.validate();

  const Reader s = r.sub("solver");
  rc.solver.rel_gap = s.num("rel_gap");
  rc.solver.abs_gap = s.num("abs_gap");
  rc.solver.node_limit = s.get<long>("node_limit");
  rc.solver.time_limit_seconds = s.num("time_limit_seconds");
  rc.solver.log_every = s.get<long>("log_every");
  if (!(rc.solver.rel_gap >= 0.0) || !(rc.solver.abs_gap >= 0.0) || rc.solver.node_limit <= 0) {
    throw ConfigError("solver gaps must be >= 0 and node_limit positive");
  }

  const Reader x = r.sub("experiment");
  auto& ex = rc.experiment;
  ex.regime = gen::regime_from_string(x.get<std::string>("regime"));
  ex.start = x.time("start");
  ex.days = x.count("days");
  ex.scenarios_per_day = x.count("scenarios_per_day");
  ex.history_hours = x.count("history_hours");
  for (const auto& run : x.at("runs")) {
    const Reader e(run, "/experiment/runs[]");
    ExperimentRun er;
    er.name = e.get<std::string>("name");
    er.regime = run.contains("regime") ? gen::regime_from_string(e.get<std::string>("regime")) : ex.regime;
    er.source = exp::scenario_source_from_string(run.value("source", std::string("original")));
    er.bids = exp::bid_mode_from_string(run.value("bids", std::string("single")));
    er.soc_mode = sched::soc_mode_from_string(run.value("soc_mode", std::string("fixed")));
    for (const auto& prev : ex.runs) {
      if (prev.name == er.name) throw ConfigError("duplicate experiment run name '" + er.name + "'");
    }
    ex.runs.push_back(er);
  }
  for (const auto& c : x.at("comparisons")) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string()) {
      throw ConfigError("experiment comparisons must be [name_a, name_b] pairs");
    }
    ex.comparisons.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
  }

  const Reader y = r.sub("synth");
  rc.synth.regime = gen::regime_from_string(y.get<std::string>("regime"));
  rc.synth.start = y.time("start");
  rc.synth.weeks = y.count("weeks");
  rc.synth.zone = y.get<std::string>("zone");
  rc.synth.scenarios = y.count("scenarios");
  rc.synth.hours = y.count("hours");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const json user = json::parse(ss.str(), nullptr, false);
  if (user.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  return make_run_config(user, overrides, path.parent_path());
}

void check_paths_exist(const RunConfig& config) {
  auto check = [](const std::filesystem::path& p) {
    if (!p.empty() && !std::filesystem::exists(p)) throw DataError("input file not found: " + p.string());
  };
  for (const auto& h : config.hourly) check(h.path);
  for (const auto& f : config.frequency) check(f);
  check(config.scenarios);
}

}  // namespace bessbid::cli
