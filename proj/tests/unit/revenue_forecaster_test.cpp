#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bessbid/error.hpp"
#include "bessbid/revenue_forecaster.hpp"

namespace bessbid::forecast {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const TimePoint kMonday{std::chrono::sys_days{std::chrono::year{2021} / 1 / 4}};

// Log revenue equal to f(hour, day) + noise, built through the ingestion path.
template <class F>
LogRevenueSeries make_series(std::size_t hours, F f, double noise = 0.0, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<HourlyRecord> recs;
  for (std::size_t i = 0; i < hours; ++i) {
    const auto t = kMonday + std::chrono::hours{static_cast<long>(i)};
    const double v = f(hour_of_day(t), day_of_week(t)) + noise * z(rng);
    recs.push_back({t, std::exp(v), 1.0, 0});
  }
  return to_log_revenue(make_hourly_series("SE3", RevenueMarket::Spot, recs));
}

double additive(int h, int d) {
  return 3.0 + 0.8 * std::sin(kTwoPi * h / 24.0) + 0.4 * std::cos(kTwoPi * d / 7.0);
}

TEST(WeeklyModel, ConstantSeriesBehavesLikeInterceptOnly) {
  const auto s = make_series(336, [](int, int) { return 2.5; });
  const auto fit = fit_weekly_model(s);
  EXPECT_NEAR(fit.intercept, 2.5, 1e-9);
  for (const auto& sm : fit.smoothers) EXPECT_LE(sm.edf, 1.1) << gam::to_string(sm.smoother.spec().kind);
}

TEST(WeeklyModel, AdditiveSignalHasHighAdjustedR2) {
  const auto s = make_series(336, additive, 0.05);
  const auto fit = fit_weekly_model(s);
  EXPECT_GE(gam::adjusted_r2(fit), 0.95);
}

TEST(WeeklyModel, ShortWindowIsRejected) {
  const auto s = make_series(100, additive);
  EXPECT_THROW(fit_weekly_model(s), DataError);
}

TEST(ForecastWeek, PeriodicSeriesForecastRepeatsPattern) {
  const auto s = make_series(336, additive);
  const auto fit = fit_weekly_model(s);
  const auto w1 = forecast_week(fit, kMonday + std::chrono::hours{336});
  const auto w2 = forecast_week(fit, kMonday + std::chrono::hours{336 + 168 * 5});
  ASSERT_EQ(w1.forecast.size(), kHoursPerWeek);
  EXPECT_EQ(w1.log_forecast, w2.log_forecast);
  for (std::size_t i = 0; i < kHoursPerWeek; ++i) {
    EXPECT_NEAR(w1.log_forecast[i], additive(w1.hours[i], w1.days[i]), 2e-3);
    EXPECT_EQ(w1.forecast[i], std::exp(w1.log_forecast[i]));
  }
}

TEST(Mape, WorkedExamples) {
  const std::vector<double> a = {100, 200}, f = {110, 180};
  EXPECT_NEAR(mape(a, f), 0.10, 1e-15);
  EXPECT_EQ(mape(a, a), 0.0);
  const std::vector<double> a1 = {50}, f1 = {0};
  EXPECT_EQ(mape(a1, f1), 1.0);
  const std::vector<double> z = {1.0, 0.0}, g = {1.0, 1.0};
  EXPECT_THROW(mape(z, g), DataError);
}

TEST(Mape, ScaleInvariantProperty) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.5, 100.0);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> a(37), f(37);
    for (auto& v : a) v = u(rng);
    for (auto& v : f) v = u(rng);
    const double c = u(rng) / 7.0;
    std::vector<double> ca(a), cf(f);
    for (auto& v : ca) v *= c;
    for (auto& v : cf) v *= c;
    EXPECT_NEAR(mape(ca, cf), mape(a, f), 1e-12 * mape(a, f));
  }
}

TEST(Backtest, ThreeWeeksGiveOneForecastWeek) {
  const auto s = make_series(504, additive, 0.05);
  const auto r = backtest(s);
  ASSERT_EQ(r.weeks.size(), 1u);
  EXPECT_EQ(r.weeks[0].week_start, kMonday + std::chrono::hours{336});
  EXPECT_EQ(r.weeks[0].actual.size(), kHoursPerWeek);
}

TEST(Backtest, PeriodicNoiselessSeriesScoresInFirstBucket) {
  const auto s = make_series(168 * 6, additive);
  const auto r = backtest(s);
  EXPECT_EQ(r.weeks.size(), 4u);
  EXPECT_EQ(r.distribution.counts[0], r.weeks.size());
  EXPECT_EQ(r.distribution.shares[0], 1.0);
}

TEST(Backtest, BucketSharesMatchHandCount) {
  // Weekly level shifts push some weeks into the higher MAPE buckets.
  auto f = [](int h, int d) { return additive(h, d); };
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z;
  std::vector<HourlyRecord> recs;
  for (std::size_t i = 0; i < 168 * 12; ++i) {
    const auto t = kMonday + std::chrono::hours{static_cast<long>(i)};
    const double shift = 0.12 * std::sin(static_cast<double>(i / 168) * 1.7);
    recs.push_back({t, std::exp(f(hour_of_day(t), day_of_week(t)) + shift + 0.05 * z(rng)), 1.0, 0});
  }
  const auto s = to_log_revenue(make_hourly_series("SE3", RevenueMarket::Spot, recs));
  const auto r = backtest(s);
  ASSERT_EQ(r.weeks.size(), 10u);
  std::array<std::size_t, 4> counts{};
  for (const auto& w : r.weeks) {
    // Independent recomputation of each weekly MAPE.
    double m = 0.0;
    for (std::size_t i = 0; i < w.actual.size(); ++i) m += std::abs(w.actual[i] - w.forecast[i]) / w.actual[i];
    m /= static_cast<double>(w.actual.size());
    EXPECT_NEAR(w.mape, m, 1e-12);
    std::size_t b = 3;
    if (m <= 0.05) b = 0;
    else if (m <= 0.10) b = 1;
    else if (m <= 0.15) b = 2;
    ++counts[b];
  }
  for (std::size_t b = 0; b < 4; ++b) {
    EXPECT_EQ(r.distribution.counts[b], counts[b]);
    EXPECT_DOUBLE_EQ(r.distribution.shares[b], static_cast<double>(counts[b]) / 10.0);
  }
}

TEST(Backtest, DeterministicAcrossThreadCounts) {
  const auto s = make_series(168 * 5, additive, 0.1, 7);
  BacktestOptions o1, o4;
  o4.threads = 4;
  const auto a = backtest(s, o1);
  const auto b = backtest(s, o4);
  ASSERT_EQ(a.weeks.size(), b.weeks.size());
  for (std::size_t i = 0; i < a.weeks.size(); ++i) {
    EXPECT_EQ(a.weeks[i].log_forecast, b.weeks[i].log_forecast);
    EXPECT_EQ(a.weeks[i].mape, b.weeks[i].mape);
    for (std::size_t h = 0; h < a.weeks[i].forecast.size(); ++h) {
      EXPECT_EQ(a.weeks[i].forecast[h], std::exp(a.weeks[i].log_forecast[h]));
    }
  }
  std::ostringstream ca, cb;
  write_backtest_csv(ca, a);
  write_backtest_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(backtest_summary_json(a, s), backtest_summary_json(b, s));
}

}  // namespace
}  // namespace bessbid::forecast
