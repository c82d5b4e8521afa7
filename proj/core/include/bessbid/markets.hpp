#pragma once

#include <string>
#include <vector>

namespace bessbid {

// N = FCR-N, D = FCR-D (upward), SDch = spot sell (discharge), SCh = spot buy
// (charge).
enum class MarketId { N, D, SDch, SCh };
enum class MarketClass { Freq, Spot };
// Below: accepted when bid price <= clearing. Above: accepted when bid price
// >= clearing.
enum class Side { Below, Above };

inline constexpr MarketId kAllMarkets[] = {MarketId::N, MarketId::D, MarketId::SDch, MarketId::SCh};

constexpr MarketClass market_class(MarketId m) {
  return (m == MarketId::N || m == MarketId::D) ? MarketClass::Freq : MarketClass::Spot;
}

constexpr Side market_side(MarketId m) {
  return m == MarketId::SCh ? Side::Above : Side::Below;
}

const char* to_string(MarketId m);
MarketId market_from_string(const std::string& s);

// One entry of the market-power pair set MP. `power` is MW for frequency
// markets and MWh per hour for spot markets.
struct MarketPower {
  MarketId market = MarketId::N;
  double power = 0.0;

  friend bool operator==(const MarketPower&, const MarketPower&) = default;
};

std::string label(const MarketPower& mp);

// (M^freq x TP^freq) U (M^spot x TP^spot), ordered N, D, S-DCH, S-CH and by
// the order of the level lists.
std::vector<MarketPower> market_power_pairs(const std::vector<double>& freq_levels,
                                            const std::vector<double>& spot_levels);

}  // namespace bessbid
