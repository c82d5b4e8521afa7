#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/scenario_generator.hpp"
#include "bessbid/scheduling_model.hpp"

namespace bessbid::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(BESSBID_FIXTURE_DIR) / name;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bessbid_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct TinyInstance {
  sched::BessParams params;
  sched::BidStructure structure;
  std::vector<sched::Scenario> scenarios;
  std::vector<FrequencyTrace> traces;

  sched::MilpInstance build(const sched::ModelOptions& options = {}) const {
    const auto meb = droop::build_meb(traces, structure.pairs, params.step_minutes, params.hours);
    return sched::build_instance(params, structure, scenarios, meb, options);
  }
};

// 2-3 hours, 15 minute steps, 2-3 market-power pairs, 1-2 scenarios with
// random prices and noisy frequency traces (with under-frequency dips).
inline TinyInstance random_tiny_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> hours_d(2, 3), pairs_d(2, 3), scen_d(1, 2), mode_d(0, 1);
  std::uniform_real_distribution<double> price(0.0, 60.0);
  TinyInstance t;
  const auto hours = static_cast<std::size_t>(hours_d(rng));
  const auto npairs = static_cast<std::size_t>(pairs_d(rng));
  const auto ns = static_cast<std::size_t>(scen_d(rng));
  std::vector<MarketPower> all = {{MarketId::N, 0.9},    {MarketId::D, 0.9}, {MarketId::SDch, 0.8},
                                  {MarketId::SCh, 0.8}, {MarketId::N, 0.5}};
  std::shuffle(all.begin(), all.end(), rng);
  t.structure.pairs.assign(all.begin(), all.begin() + static_cast<long>(npairs));
  for (std::size_t s = 0; s < ns; ++s) {
    sched::Scenario sc;
    sc.probability = 1.0 / static_cast<double>(ns);
    for (MarketId m : kAllMarkets) {
      auto& v = sc.prices(m);
      v.resize(hours);
      for (auto& x : v) x = price(rng);
    }
    sc.c_up.resize(hours);
    sc.c_down.resize(hours);
    for (auto& x : sc.c_up) x = price(rng);
    for (auto& x : sc.c_down) x = price(rng) / 3.0;
    t.scenarios.push_back(sc);
    t.traces.push_back(gen::synthetic_frequency(TimePoint{}, hours, rng(), 0.5, 0.03));
  }
  t.params.hours = hours;
  t.params.step_minutes = 15;
  t.params.soc_mode = mode_d(rng) ? sched::SocMode::Flexible : sched::SocMode::Fixed;
  return t;
}

}  // namespace bessbid::testing
