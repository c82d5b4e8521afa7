#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bessbid/droop_simulator.hpp"
#include "bessbid/error.hpp"
#include "bessbid/scenario_generator.hpp"

namespace bessbid::droop {
namespace {

const TimePoint kStart{std::chrono::sys_days{std::chrono::year{2021} / 3 / 1}};

FrequencyTrace random_trace(std::size_t hours, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(49.3, 50.3);
  std::vector<double> hz(hours * 60);
  for (auto& v : hz) v = u(rng);
  return make_frequency_trace(kStart, hz);
}

TEST(Activation, FcrNExamples) {
  EXPECT_EQ(fcr_n_activation(50.0), 0.0);
  EXPECT_NEAR(fcr_n_activation(49.9), 1.0, 1e-12);
  EXPECT_NEAR(fcr_n_activation(50.05), -0.5, 1e-12);
  EXPECT_EQ(fcr_n_activation(49.0), 1.0);
  EXPECT_EQ(fcr_n_activation(51.0), -1.0);
  DroopConfig db;
  db.fcrn_deadband_hz = 0.01;
  EXPECT_EQ(fcr_n_activation(50.005, db), 0.0);
}

TEST(Activation, FcrDExamples) {
  EXPECT_EQ(fcr_d_activation(50.0), 0.0);
  EXPECT_NEAR(fcr_d_activation(49.5), 1.0, 1e-12);
  EXPECT_NEAR(fcr_d_activation(49.7), 0.5, 1e-12);
  EXPECT_EQ(fcr_d_activation(49.9), 0.0);
  EXPECT_EQ(fcr_d_activation(49.2), 1.0);
}

TEST(Activation, InvalidConfigRejected) {
  DroopConfig c;
  c.fcrd_full_hz = 49.95;
  EXPECT_THROW(c.validate(), ConfigError);
  DroopConfig n;
  n.fcrn_full_activation_hz = 0.0;
  EXPECT_THROW(n.validate(), ConfigError);
}

TEST(Meb, FlatTraceGivesZeroFrequencyBlocks) {
  const auto tr = gen::flat_frequency(kStart, 24);
  const std::vector<MarketPower> pairs = {{MarketId::N, 0.9}, {MarketId::D, 0.9}};
  for (int step : {1, 15, 60}) {
    const auto t = build_meb(std::span(&tr, 1), pairs, step, 24);
    for (std::size_t i = 0; i < t.steps(); ++i) {
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        EXPECT_EQ(t.dch(0, i, k), 0.0);
        EXPECT_EQ(t.ch(0, i, k), 0.0);
      }
    }
  }
}

TEST(Meb, SaturatedFcrNHour) {
  const auto tr = make_frequency_trace(kStart, std::vector<double>(60, 49.9));
  const std::vector<MarketPower> pairs = {{MarketId::N, 0.6}};
  const auto t = build_meb(std::span(&tr, 1), pairs, 1, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_NEAR(t.dch(0, i, 0), 0.01, 1e-15);
    EXPECT_EQ(t.ch(0, i, 0), 0.0);
    total += t.dch(0, i, 0);
  }
  EXPECT_NEAR(total, 0.6, 1e-12);
}

TEST(Meb, SpotBlocksSplitUniformly) {
  const auto tr = gen::flat_frequency(kStart, 1);
  const std::vector<MarketPower> pairs = {{MarketId::SDch, 0.8}, {MarketId::SCh, 0.6}};
  const auto t = build_meb(std::span(&tr, 1), pairs, 15, 1);
  ASSERT_EQ(t.steps(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(t.dch(0, i, 0), 0.2, 1e-15);
    EXPECT_EQ(t.ch(0, i, 0), 0.0);
    EXPECT_NEAR(t.ch(0, i, 1), 0.15, 1e-15);
  }
}

TEST(Meb, ShortTraceAndBadStepRejected) {
  const auto tr = gen::flat_frequency(kStart, 2);
  const std::vector<MarketPower> pairs = {{MarketId::N, 0.9}};
  EXPECT_THROW(build_meb(std::span(&tr, 1), pairs, 15, 3), DataError);
  EXPECT_THROW(build_meb(std::span(&tr, 1), pairs, 7, 2), ConfigError);
}

class MebProperties : public ::testing::TestWithParam<int> {};

TEST_P(MebProperties, PowerBoundLinearityAndSpotConservation) {
  const int step = GetParam();
  const auto tr = random_trace(17, 1234);
  const std::vector<MarketPower> base = {{MarketId::N, 0.45}, {MarketId::D, 0.3}, {MarketId::SDch, 0.8}, {MarketId::SCh, 0.4}};
  std::vector<MarketPower> twice = base;
  for (auto& p : twice) p.power *= 2.0;
  const auto a = build_meb(std::span(&tr, 1), base, step, 17);
  const auto b = build_meb(std::span(&tr, 1), twice, step, 17);
  for (std::size_t k = 0; k < base.size(); ++k) {
    const double cap = base[k].power * step / 60.0 + 1e-12;
    for (std::size_t i = 0; i < a.steps(); ++i) {
      EXPECT_LE(a.dch(0, i, k), cap);
      EXPECT_LE(a.ch(0, i, k), cap);
      EXPECT_GE(a.dch(0, i, k), 0.0);
      EXPECT_GE(a.ch(0, i, k), 0.0);
      EXPECT_NEAR(b.dch(0, i, k), 2.0 * a.dch(0, i, k), 1e-12);
      EXPECT_NEAR(b.ch(0, i, k), 2.0 * a.ch(0, i, k), 1e-12);
    }
  }
  const auto sph = static_cast<std::size_t>(60 / step);
  for (std::size_t h = 0; h < 17; ++h) {
    double dch = 0.0, ch = 0.0;
    for (std::size_t i = h * sph; i < (h + 1) * sph; ++i) {
      dch += a.dch(0, i, 2);
      ch += a.ch(0, i, 3);
    }
    EXPECT_NEAR(dch, 0.8, 1e-12);
    EXPECT_NEAR(ch, 0.4, 1e-12);
  }
}

TEST_P(MebProperties, LoweringFrequencyNeverReducesDischarge) {
  const int step = GetParam();
  const auto tr = random_trace(6, 77);
  auto lower = tr;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (auto& v : lower.hz) v = std::max(kFrequencyLowerBound, v - u(rng));
  const std::vector<MarketPower> pairs = {{MarketId::N, 0.9}, {MarketId::D, 0.9}};
  const auto a = build_meb(std::span(&tr, 1), pairs, step, 6);
  const auto b = build_meb(std::span(&lower, 1), pairs, step, 6);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (std::size_t i = 0; i < a.steps(); ++i) {
      EXPECT_GE(b.dch(0, i, k), a.dch(0, i, k) - 1e-15);
      EXPECT_LE(b.ch(0, i, k), a.ch(0, i, k) + 1e-15);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Steps, MebProperties, ::testing::Values(1, 5, 15, 60));

TEST(Meb, NettedStepsHaveOneSidedEnergy) {
  const auto tr = random_trace(3, 8);
  const std::vector<MarketPower> pairs = {{MarketId::N, 0.9}};
  const auto t = build_meb(std::span(&tr, 1), pairs, 15, 3);
  for (std::size_t i = 0; i < t.steps(); ++i) EXPECT_TRUE(t.dch(0, i, 0) == 0.0 || t.ch(0, i, 0) == 0.0);
}

}  // namespace
}  // namespace bessbid::droop
