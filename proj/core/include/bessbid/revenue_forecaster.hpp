#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bessbid/market_data.hpp"
#include "bessbid/spline_gam.hpp"

namespace bessbid::forecast {

inline constexpr std::size_t kHoursPerWeek = 168;

struct WeeklyModelOptions {
  int hour_k = 24;
  int day_k = 7;
  bool cyclic_hour = false;
  std::size_t min_train_hours = kHoursPerWeek;
  gam::GcvOptions gcv;
};

// s(hour, cr, k=24) + s(day, ps, k=7) + ti(hour, day, k=(24,7), bs=(cr,ps)).
std::vector<gam::BasisSpec> weekly_smoothers(const WeeklyModelOptions& options = {});

gam::GamFit fit_weekly_model(const LogRevenueSeries& series, std::size_t begin, std::size_t end,
                             const WeeklyModelOptions& options = {});

inline gam::GamFit fit_weekly_model(const LogRevenueSeries& train,
                                    const WeeklyModelOptions& options = {}) {
  return fit_weekly_model(train, 0, train.size(), options);
}

struct ForecastWeek {
  std::string zone;
  RevenueMarket market = RevenueMarket::Spot;
  std::size_t week_index = 0;
  TimePoint week_start;
  std::vector<int> hours;
  std::vector<int> days;
  std::vector<double> log_forecast;
  std::vector<double> forecast;  // exp(log_forecast), no bias correction
  std::vector<double> log_actual;
  std::vector<double> actual;
  double mape = 0.0;
  double adjusted_r2 = 0.0;  // of the window fit
};

// 168 hourly forecasts starting at week_start. Actuals are left empty.
ForecastWeek forecast_week(const gam::GamFit& fit, TimePoint week_start,
                           int utc_offset_hours = 0);

// (1/H) sum |A_h - F_h| / |A_h|. Throws DataError naming the first zero
// actual.
double mape(std::span<const double> actuals, std::span<const double> forecasts);

struct MapeDistribution {
  // Upper edges of the first three buckets; the fourth is open ended.
  std::array<double, 3> edges = {0.05, 0.10, 0.15};
  std::array<std::size_t, 4> counts = {0, 0, 0, 0};
  std::array<double, 4> shares = {0.0, 0.0, 0.0, 0.0};
};

MapeDistribution mape_distribution(std::span<const double> weekly_mapes);

struct BacktestOptions {
  std::size_t train_hours = 336;
  std::size_t horizon_hours = kHoursPerWeek;
  bool log_scale_scoring = false;
  unsigned threads = 1;
  WeeklyModelOptions model;
};

struct BacktestResult {
  std::vector<ForecastWeek> weeks;
  std::vector<double> window_adjusted_r2;
  double mean_adjusted_r2 = 0.0;
  MapeDistribution distribution;
  std::vector<gam::GamFit> fits;
};

BacktestResult backtest(const LogRevenueSeries& series, const BacktestOptions& options = {});

// Columns: week_start,hour,actual,forecast,ape
void write_backtest_csv(std::ostream& out, const BacktestResult& result);
std::string backtest_summary_json(const BacktestResult& result, const LogRevenueSeries& series);
// Plot-ready actual vs forecast series: timestamp,actual,forecast,log_actual,log_forecast
void write_actual_vs_forecast_csv(std::ostream& out, const BacktestResult& result);
// Plot-ready smoother curves of a fit: term,hour,day,value
void write_smoother_csv(std::ostream& out, const gam::GamFit& fit);

}  // namespace bessbid::forecast
