#include "bessbid/scenario_generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bessbid/error.hpp"

namespace bessbid::gen {

const char* to_string(Regime r) { return r == Regime::Y2019 ? "2019-like" : "2021-like"; }

Regime regime_from_string(const std::string& s) {
  if (s == "2019-like" || s == "2019") return Regime::Y2019;
  if (s == "2021-like" || s == "2021") return Regime::Y2021;
  throw ConfigError("unknown regime '" + s + "' (expected 2019-like or 2021-like)");
}

RegimeConfig RegimeConfig::for_regime(Regime r) {
  RegimeConfig c;
  if (r == Regime::Y2019) {
    c.fcrn_base = 14.0;
    c.fcrn_spike = 36.0;
    c.fcrd_base = 4.0;
    c.fcrd_spike = 2.0;
    c.fcrd_dip_rate = 0.01;
  } else {
    c.spot_mean = 55.0;
    c.spot_amplitude = 20.0;
    c.fcrn_base = 10.0;
    c.fcrn_spike = 4.0;
    c.fcrd_base = 30.0;
    c.fcrd_spike = 45.0;
    c.fcrd_dip_rate = 0.05;
  }
  return c;
}

double mean_price(const RegimeConfig& cfg, MarketId m, int d, int h) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const bool weekend = d >= 5;
  const bool midday = h >= 10 && h <= 15;
  const bool midweek = d >= 1 && d <= 3;
  switch (m) {
    case MarketId::SDch:
    case MarketId::SCh: {
      const double v = cfg.spot_mean + cfg.spot_amplitude * std::sin(two_pi * (h - 9) / 24.0) -
                       (weekend ? cfg.weekend_spot_drop : 0.0);
      return std::max(1.0, v);
    }
    case MarketId::N: {
      double v = cfg.fcrn_base + 0.25 * cfg.fcrn_base * std::cos(two_pi * (h - 3) / 24.0);
      if (midday && midweek) v += cfg.fcrn_spike;
      else if (midday || midweek) v += 0.35 * cfg.fcrn_spike;
      return std::max(0.5, v);
    }
    case MarketId::D: {
      const bool ramp = (h >= 5 && h <= 9) || (h >= 16 && h <= 21);
      return std::max(0.5, cfg.fcrd_base + (ramp ? cfg.fcrd_spike : 0.0) +
                               0.1 * cfg.fcrd_base * std::sin(two_pi * h / 24.0));
    }
  }
  return 0.0;
}

FrequencyTrace synthetic_frequency(TimePoint start, std::size_t hours, std::uint64_t seed, double dip_rate,
                                   double sigma, double theta) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> hz(hours * 60);
  double f = 50.0;
  int dip_left = 0;
  double dip_depth = 0.0;
  for (std::size_t i = 0; i < hz.size(); ++i) {
    f += theta * (50.0 - f) + sigma * noise(rng);
    if (dip_left == 0 && unit(rng) < dip_rate / 60.0) {
      dip_left = 3 + static_cast<int>(unit(rng) * 8.0);
      dip_depth = 0.12 + 0.25 * unit(rng);
    }
    double v = f;
    if (dip_left > 0) {
      v -= dip_depth;
      --dip_left;
    }
    hz[i] = std::clamp(v, kFrequencyLowerBound, kFrequencyUpperBound);
  }
  return make_frequency_trace(start, std::move(hz));
}

FrequencyTrace flat_frequency(TimePoint start, std::size_t hours) {
  return make_frequency_trace(start, std::vector<double>(hours * 60, 50.0));
}

sched::Scenario make_scenario(double probability, const std::vector<double>& spot,
                              const std::vector<double>& fcrn, const std::vector<double>& fcrd) {
  sched::Scenario sc;
  sc.probability = probability;
  sc.prices(MarketId::SDch) = spot;
  sc.prices(MarketId::SCh) = spot;
  sc.prices(MarketId::N) = fcrn;
  sc.prices(MarketId::D) = fcrd;
  for (double p : spot) {
    sc.c_up.push_back(1.15 * p);
    sc.c_down.push_back(0.30 * p);
  }
  return sc;
}

GeneratedDay generate_day(const RegimeConfig& cfg, TimePoint start, int day_of_week, std::size_t n_scenarios,
                          std::uint64_t seed, std::size_t hours) {
  if (n_scenarios == 0) throw ConfigError("need at least one scenario");
  GeneratedDay day;
  day.start = start;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, cfg.price_noise);
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    std::vector<double> spot(hours), fcrn(hours), fcrd(hours);
    for (std::size_t h = 0; h < hours; ++h) {
      const int hod = static_cast<int>(h % 24);
      const int dow = (day_of_week + static_cast<int>(h / 24)) % 7;
      spot[h] = mean_price(cfg, MarketId::SDch, dow, hod) * std::exp(noise(rng));
      fcrn[h] = mean_price(cfg, MarketId::N, dow, hod) * std::exp(noise(rng));
      fcrd[h] = mean_price(cfg, MarketId::D, dow, hod) * std::exp(noise(rng));
    }
    auto sc = make_scenario(1.0 / static_cast<double>(n_scenarios), spot, fcrn, fcrd);
    day.scenarios.push_back(std::move(sc));
    day.traces.push_back(synthetic_frequency(start, hours, rng(), cfg.fcrd_dip_rate));
  }
  // Rounding keeps probabilities summing to exactly one.
  double rest = 1.0;
  for (std::size_t s = 0; s + 1 < n_scenarios; ++s) rest -= day.scenarios[s].probability;
  day.scenarios.back().probability = rest;
  return day;
}

HourlySeries synthetic_hourly_series(const RegimeConfig& cfg, const std::string& zone, RevenueMarket market,
                                     TimePoint start, std::size_t hours, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, cfg.price_noise);
  std::vector<HourlyRecord> records;
  records.reserve(hours);
  for (std::size_t i = 0; i < hours; ++i) {
    const TimePoint t = start + std::chrono::hours{static_cast<long>(i)};
    const int h = hour_of_day(t, 0);
    const int d = day_of_week(t, 0);
    const MarketId m = market == RevenueMarket::Spot ? MarketId::SDch : MarketId::N;
    const double price = mean_price(cfg, m, d, h) * std::exp(noise(rng));
    const double base_volume = market == RevenueMarket::Spot ? 4000.0 : 220.0;
    const double volume =
        base_volume * (1.0 + 0.15 * std::sin(2.0 * std::numbers::pi * (h - 6) / 24.0)) * std::exp(0.5 * noise(rng));
    records.push_back({t, price, volume, i + 2});
  }
  return make_hourly_series(zone, market, std::move(records));
}

sched::Scenario dominance_scenario(std::size_t hours) {
  sched::Scenario sc;
  sc.probability = 1.0;
  sc.prices(MarketId::N).assign(hours, 100.0);
  sc.prices(MarketId::D).assign(hours, 10.0);
  sc.prices(MarketId::SDch).assign(hours, 20.0);
  sc.prices(MarketId::SCh).assign(hours, 20.0);
  sc.c_up.assign(hours, 0.0);
  sc.c_down.assign(hours, 0.0);
  return sc;
}

sched::Scenario fcrd_spike_scenario(std::size_t hours) {
  sched::Scenario sc;
  sc.probability = 1.0;
  auto& d = sc.prices(MarketId::D);
  d.resize(hours);
  for (std::size_t h = 0; h < hours; ++h) d[h] = (h % 24 >= 5 && h % 24 <= 21) ? 90.0 : 60.0;
  sc.prices(MarketId::N).assign(hours, 12.0);
  sc.prices(MarketId::SDch).assign(hours, 35.0);
  sc.prices(MarketId::SCh).assign(hours, 35.0);
  sc.c_up.assign(hours, 40.0);
  sc.c_down.assign(hours, 10.0);
  return sc;
}

}  // namespace bessbid::gen
