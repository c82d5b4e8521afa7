#include "bessbid/droop_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid::droop {

void DroopConfig::validate() const {
  if (!(fcrn_deadband_hz >= 0.0 && fcrn_deadband_hz < fcrn_full_activation_hz)) {
    throw ConfigError("FCR-N droop needs 0 <= deadband < full-activation deviation");
  }
  if (!(fcrd_start_hz > fcrd_full_hz)) {
    throw ConfigError("FCR-D activation start must lie above the full-activation frequency");
  }
}

double fcr_n_activation(double hz, const DroopConfig& cfg) {
  const double deviation = cfg.nominal_hz - hz;
  const double magnitude = std::abs(deviation);
  if (magnitude <= cfg.fcrn_deadband_hz) return 0.0;
  const double fraction = std::min(
      1.0, (magnitude - cfg.fcrn_deadband_hz) / (cfg.fcrn_full_activation_hz - cfg.fcrn_deadband_hz));
  return deviation > 0.0 ? fraction : -fraction;
}

double fcr_d_activation(double hz, const DroopConfig& cfg) {
  if (hz >= cfg.fcrd_start_hz) return 0.0;
  if (hz <= cfg.fcrd_full_hz) return 1.0;
  return (cfg.fcrd_start_hz - hz) / (cfg.fcrd_start_hz - cfg.fcrd_full_hz);
}

MebTable::MebTable(std::size_t scenarios, std::size_t steps, std::vector<MarketPower> pairs,
                   int step_minutes)
    : scenarios_(scenarios),
      steps_(steps),
      pairs_(std::move(pairs)),
      step_minutes_(step_minutes),
      dch_(scenarios * steps * pairs_.size(), 0.0),
      ch_(scenarios * steps * pairs_.size(), 0.0) {}

MebTable build_meb(std::span<const FrequencyTrace> traces, const std::vector<MarketPower>& pairs,
                   int step_minutes, std::size_t hours, const DroopConfig& cfg) {
  cfg.validate();
  if (step_minutes <= 0 || 60 % step_minutes != 0) {
    throw ConfigError("step of " + std::to_string(step_minutes) + " minutes does not divide 60");
  }
  const std::size_t per_hour = static_cast<std::size_t>(60 / step_minutes);
  const std::size_t steps = hours * per_hour;
  MebTable table(traces.size(), steps, pairs, step_minutes);

  for (std::size_t s = 0; s < traces.size(); ++s) {
    const auto& trace = traces[s];
    if (trace.hz.size() < hours * 60) {
      throw DataError("frequency trace of scenario " + std::to_string(s) + " covers " +
                      std::to_string(trace.hours()) + " h, horizon needs " +
                      std::to_string(hours) + " h");
    }
    for (std::size_t t = 0; t < steps; ++t) {
      // Activation integrated over the minutes of the step, in minutes.
      double n_sum = 0.0;
      double d_sum = 0.0;
      for (std::size_t m = t * static_cast<std::size_t>(step_minutes);
           m < (t + 1) * static_cast<std::size_t>(step_minutes); ++m) {
        n_sum += fcr_n_activation(trace.hz[m], cfg);
        d_sum += fcr_d_activation(trace.hz[m], cfg);
      }
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double p = pairs[k].power;
        switch (pairs[k].market) {
          case MarketId::N:
            if (n_sum > 0.0) table.dch(s, t, k) = p * (n_sum / 60.0);
            else if (n_sum < 0.0) table.ch(s, t, k) = p * (-n_sum / 60.0);
            break;
          case MarketId::D:
            table.dch(s, t, k) = p * (d_sum / 60.0);
            break;
          case MarketId::SDch:
            table.dch(s, t, k) = p / static_cast<double>(per_hour);
            break;
          case MarketId::SCh:
            table.ch(s, t, k) = p / static_cast<double>(per_hour);
            break;
        }
      }
    }
  }
  return table;
}

void write_meb_csv(std::ostream& out, const MebTable& table) {
  using detail::format_double;
  out << "s,t,market,power,e_dch_mwh,e_ch_mwh\n";
  for (std::size_t s = 0; s < table.scenarios(); ++s) {
    for (std::size_t t = 0; t < table.steps(); ++t) {
      for (std::size_t k = 0; k < table.pair_count(); ++k) {
        const auto& mp = table.pairs()[k];
        out << s << ',' << t << ',' << to_string(mp.market) << ',' << format_double(mp.power)
            << ',' << format_double(table.dch(s, t, k)) << ',' << format_double(table.ch(s, t, k))
            << '\n';
      }
    }
  }
}

}  // namespace bessbid::droop
