#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bessbid/market_data.hpp"
#include "bessbid/markets.hpp"

namespace bessbid::droop {

struct DroopConfig {
  double nominal_hz = 50.0;
  double fcrn_deadband_hz = 0.0;
  double fcrn_full_activation_hz = 0.1;  // deviation at which FCR-N saturates
  double fcrd_start_hz = 49.9;
  double fcrd_full_hz = 49.5;

  // Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

// Signed FCR-N activation in [-1, 1]: positive discharges (under-frequency),
// negative charges (over-frequency), zero inside the deadband.
double fcr_n_activation(double hz, const DroopConfig& cfg = {});

// Upward FCR-D activation in [0, 1], linear between start and full.
double fcr_d_activation(double hz, const DroopConfig& cfg = {});

// Market energy blocks E_dch, E_ch (MWh) per scenario, step and pair.
class MebTable {
 public:
  MebTable() = default;
  MebTable(std::size_t scenarios, std::size_t steps, std::vector<MarketPower> pairs,
           int step_minutes);

  std::size_t scenarios() const { return scenarios_; }
  std::size_t steps() const { return steps_; }
  std::size_t pair_count() const { return pairs_.size(); }
  const std::vector<MarketPower>& pairs() const { return pairs_; }
  int step_minutes() const { return step_minutes_; }
  int steps_per_hour() const { return 60 / step_minutes_; }

  double& dch(std::size_t s, std::size_t t, std::size_t k) { return dch_[index(s, t, k)]; }
  double& ch(std::size_t s, std::size_t t, std::size_t k) { return ch_[index(s, t, k)]; }
  double dch(std::size_t s, std::size_t t, std::size_t k) const { return dch_[index(s, t, k)]; }
  double ch(std::size_t s, std::size_t t, std::size_t k) const { return ch_[index(s, t, k)]; }

 private:
  std::size_t index(std::size_t s, std::size_t t, std::size_t k) const {
    return (s * steps_ + t) * pairs_.size() + k;
  }

  std::size_t scenarios_ = 0;
  std::size_t steps_ = 0;
  std::vector<MarketPower> pairs_;
  int step_minutes_ = 1;
  std::vector<double> dch_;
  std::vector<double> ch_;
};

// One trace per scenario; each must cover `hours`. Throws ConfigError when
// step_minutes does not divide 60, DataError when a trace is too short.
MebTable build_meb(std::span<const FrequencyTrace> traces, const std::vector<MarketPower>& pairs,
                   int step_minutes, std::size_t hours, const DroopConfig& cfg = {});

// s,t,market,power,e_dch_mwh,e_ch_mwh
void write_meb_csv(std::ostream& out, const MebTable& table);

}  // namespace bessbid::droop
