#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bessbid/market_data.hpp"
#include "bessbid/scheduling_model.hpp"
#include "bessbid/time_utils.hpp"

namespace bessbid::gen {

// "2019-like": FCR-N spikes at midday and midweek. "2021-like": elevated,
// spiky FCR-D prices and calmer FCR-N.
enum class Regime { Y2019, Y2021 };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct RegimeConfig {
  double spot_mean = 40.0;
  double spot_amplitude = 12.0;
  double weekend_spot_drop = 8.0;
  double fcrn_base = 12.0;
  double fcrn_spike = 0.0;  // added at midday on midweek days
  double fcrd_base = 4.0;
  double fcrd_spike = 0.0;  // added in the morning and evening ramps
  double price_noise = 0.10;  // log-normal sigma
  double fcrd_dip_rate = 0.0;  // under-frequency events per hour

  static RegimeConfig for_regime(Regime r);
};

// Deterministic mean price for a market at (day of week, hour).
double mean_price(const RegimeConfig& cfg, MarketId m, int day_of_week, int hour);

// Minute-resolution Ornstein-Uhlenbeck-like trace around 50 Hz, clipped to
// [49, 51], with optional dips below the FCR-D threshold.
FrequencyTrace synthetic_frequency(TimePoint start, std::size_t hours, std::uint64_t seed,
                                   double dip_rate = 0.0, double sigma = 0.01, double theta = 0.05);

struct GeneratedDay {
  TimePoint start;
  std::vector<sched::Scenario> scenarios;
  std::vector<FrequencyTrace> traces;
};

// Scenario with spot legs sharing one price and FCR-N energy prices derived
// from spot (up 1.15x, down 0.30x).
sched::Scenario make_scenario(double probability, const std::vector<double>& spot,
                              const std::vector<double>& fcrn, const std::vector<double>& fcrd);

// Equiprobable scenarios for one day; day_of_week 0 = Monday.
GeneratedDay generate_day(const RegimeConfig& cfg, TimePoint start, int day_of_week,
                          std::size_t n_scenarios, std::uint64_t seed, std::size_t hours = 24);

// Hourly price/volume series for the forecaster; Spot uses the spot leg and
// FcrN the FCR-N price.
HourlySeries synthetic_hourly_series(const RegimeConfig& cfg, const std::string& zone,
                                     RevenueMarket market, TimePoint start, std::size_t hours,
                                     std::uint64_t seed);

// Single scenario where FCR-N availability pays more than any alternative in
// every hour.
sched::Scenario dominance_scenario(std::size_t hours = 24);
// Single scenario with FCR-D spikes that dominate every hour.
sched::Scenario fcrd_spike_scenario(std::size_t hours = 24);

// Trace pinned at exactly 50 Hz.
FrequencyTrace flat_frequency(TimePoint start, std::size_t hours);

}  // namespace bessbid::gen
