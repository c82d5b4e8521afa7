#include "bessbid/markets.hpp"

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid {

const char* to_string(MarketId m) {
  switch (m) {
    case MarketId::N: return "N";
    case MarketId::D: return "D";
    case MarketId::SDch: return "S_DCH";
    case MarketId::SCh: return "S_CH";
  }
  return "?";
}

MarketId market_from_string(const std::string& s) {
  if (s == "N" || s == "FCR_N" || s == "FCR-N") return MarketId::N;
  if (s == "D" || s == "FCR_D" || s == "FCR-D") return MarketId::D;
  if (s == "S_DCH" || s == "S-DCH" || s == "SDCH") return MarketId::SDch;
  if (s == "S_CH" || s == "S-CH" || s == "SCH") return MarketId::SCh;
  throw ConfigError("unknown market '" + s + "'");
}

std::string label(const MarketPower& mp) {
  return std::string(to_string(mp.market)) + "@" + detail::format_double(mp.power);
}

std::vector<MarketPower> market_power_pairs(const std::vector<double>& freq_levels,
                                            const std::vector<double>& spot_levels) {
  std::vector<MarketPower> pairs;
  for (MarketId m : kAllMarkets) {
    const auto& levels = market_class(m) == MarketClass::Freq ? freq_levels : spot_levels;
    for (double p : levels) {
      if (!(p > 0.0)) throw ConfigError("market-power levels must be strictly positive");
      pairs.push_back({m, p});
    }
  }
  return pairs;
}

}  // namespace bessbid
