#include "bessbid/revenue_forecaster.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid::forecast {

using detail::format_double;

std::vector<gam::BasisSpec> weekly_smoothers(const WeeklyModelOptions& o) {
  using gam::BasisSpec;
  using gam::Covariate;
  return {BasisSpec::cubic(Covariate::Hour, o.hour_k, o.cyclic_hour),
          BasisSpec::pspline(Covariate::Day, o.day_k),
          BasisSpec::tensor(BasisSpec::cubic(Covariate::Hour, o.hour_k, o.cyclic_hour),
                            BasisSpec::pspline(Covariate::Day, o.day_k))};
}

gam::GamFit fit_weekly_model(const LogRevenueSeries& series, std::size_t begin, std::size_t end,
                             const WeeklyModelOptions& options) {
  if (end > series.size() || begin > end) throw DataError("training window out of range");
  const std::size_t n = end - begin;
  if (n < options.min_train_hours) {
    throw DataError("training window of " + std::to_string(n) + " hours is shorter than " +
                    std::to_string(options.min_train_hours));
  }
  std::vector<double> y(n), hours(n), days(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = series.points[begin + i];
    y[i] = p.value;
    hours[i] = p.hour;
    days[i] = p.day;
  }
  return gam::select_lambda_gcv(y, hours, days, weekly_smoothers(options), options.gcv);
}

ForecastWeek forecast_week(const gam::GamFit& fit, TimePoint week_start, int utc_offset_hours) {
  ForecastWeek week;
  week.week_start = week_start;
  std::vector<double> hours(kHoursPerWeek), days(kHoursPerWeek);
  for (std::size_t i = 0; i < kHoursPerWeek; ++i) {
    const TimePoint t = week_start + std::chrono::hours{static_cast<long>(i)};
    week.hours.push_back(hour_of_day(t, utc_offset_hours));
    week.days.push_back(day_of_week(t, utc_offset_hours));
    hours[i] = week.hours.back();
    days[i] = week.days.back();
  }
  Eigen::VectorXd pred = gam::predict(fit, hours, days);
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    week.log_forecast.push_back(pred(i));
    week.forecast.push_back(std::exp(pred(i)));
  }
  week.adjusted_r2 = fit.stats.adjusted_r2;
  return week;
}

double mape(std::span<const double> actuals, std::span<const double> forecasts) {
  if (actuals.size() != forecasts.size()) {
    throw DataError("mape: actual and forecast lengths differ");
  }
  if (actuals.empty()) throw DataError("mape: empty input");
  double sum = 0.0;
  for (std::size_t h = 0; h < actuals.size(); ++h) {
    if (actuals[h] == 0.0) throw DataError("mape: zero actual at index " + std::to_string(h));
    sum += std::abs((actuals[h] - forecasts[h]) / actuals[h]);
  }
  return sum / static_cast<double>(actuals.size());
}

MapeDistribution mape_distribution(std::span<const double> weekly_mapes) {
  MapeDistribution d;
  for (double m : weekly_mapes) {
    std::size_t bucket = 3;
    for (std::size_t b = 0; b < d.edges.size(); ++b) {
      if (m <= d.edges[b]) {
        bucket = b;
        break;
      }
    }
    ++d.counts[bucket];
  }
  if (!weekly_mapes.empty()) {
    for (std::size_t b = 0; b < 4; ++b) {
      d.shares[b] = static_cast<double>(d.counts[b]) / static_cast<double>(weekly_mapes.size());
    }
  }
  return d;
}

BacktestResult backtest(const LogRevenueSeries& series, const BacktestOptions& options) {
  const auto windows = rolling_windows(series, options.train_hours, options.horizon_hours);
  BacktestResult result;
  result.weeks.resize(windows.size());
  result.fits.resize(windows.size());

  auto run_window = [&](std::size_t w) {
    const auto& win = windows[w];
    gam::GamFit fit = fit_weekly_model(series, win.train_begin, win.train_end, options.model);
    ForecastWeek week;
    week.zone = series.zone;
    week.market = series.market;
    week.week_index = w;
    week.week_start = series.points[win.test_begin].timestamp;
    const std::size_t h = win.test_end - win.test_begin;
    std::vector<double> hours(h), days(h);
    for (std::size_t i = 0; i < h; ++i) {
      const auto& p = series.points[win.test_begin + i];
      hours[i] = p.hour;
      days[i] = p.day;
      week.hours.push_back(p.hour);
      week.days.push_back(p.day);
      week.log_actual.push_back(p.value);
      week.actual.push_back(std::exp(p.value));
    }
    Eigen::VectorXd pred = gam::predict(fit, hours, days);
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
      week.log_forecast.push_back(pred(i));
      week.forecast.push_back(std::exp(pred(i)));
    }
    week.mape = options.log_scale_scoring ? mape(week.log_actual, week.log_forecast)
                                          : mape(week.actual, week.forecast);
    week.adjusted_r2 = fit.stats.adjusted_r2;
    result.weeks[w] = std::move(week);
    result.fits[w] = std::move(fit);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(windows.size())));
  if (threads <= 1) {
    for (std::size_t w = 0; w < windows.size(); ++w) run_window(w);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t w = next++; w < windows.size(); w = next++) {
          try {
            run_window(w);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> mapes;
  double r2_sum = 0.0;
  for (const auto& week : result.weeks) {
    mapes.push_back(week.mape);
    result.window_adjusted_r2.push_back(week.adjusted_r2);
    r2_sum += week.adjusted_r2;
  }
  result.mean_adjusted_r2 = windows.empty() ? 0.0 : r2_sum / static_cast<double>(windows.size());
  result.distribution = mape_distribution(mapes);
  return result;
}

void write_backtest_csv(std::ostream& out, const BacktestResult& result) {
  out << "week_start,hour,actual,forecast,ape\n";
  for (const auto& week : result.weeks) {
    const auto start = format_rfc3339(week.week_start);
    for (std::size_t h = 0; h < week.actual.size(); ++h) {
      const double ape = std::abs((week.actual[h] - week.forecast[h]) / week.actual[h]);
      out << start << ',' << h << ',' << format_double(week.actual[h]) << ','
          << format_double(week.forecast[h]) << ',' << format_double(ape) << '\n';
    }
  }
}

std::string backtest_summary_json(const BacktestResult& result, const LogRevenueSeries& series) {
  using nlohmann::json;
  json j;
  j["zone"] = series.zone;
  j["market"] = to_string(series.market);
  j["points"] = series.size();
  j["rejected_rows"] = series.rejections.size();
  j["weeks"] = json::array();
  for (const auto& w : result.weeks) {
    j["weeks"].push_back({{"week_index", w.week_index},
                          {"week_start", format_rfc3339(w.week_start)},
                          {"mape", w.mape},
                          {"adjusted_r2", w.adjusted_r2}});
  }
  j["mean_adjusted_r2"] = result.mean_adjusted_r2;
  const auto& d = result.distribution;
  j["mape_distribution"] = {
      {"buckets", {"0-5%", "5-10%", "10-15%", ">15%"}},
      {"counts", {d.counts[0], d.counts[1], d.counts[2], d.counts[3]}},
      {"shares", {d.shares[0], d.shares[1], d.shares[2], d.shares[3]}}};
  return j.dump(2) + "\n";
}

void write_actual_vs_forecast_csv(std::ostream& out, const BacktestResult& result) {
  out << "timestamp,actual,forecast,log_actual,log_forecast\n";
  for (const auto& week : result.weeks) {
    for (std::size_t h = 0; h < week.actual.size(); ++h) {
      const TimePoint t = week.week_start + std::chrono::hours{static_cast<long>(h)};
      out << format_rfc3339(t) << ',' << format_double(week.actual[h]) << ','
          << format_double(week.forecast[h]) << ',' << format_double(week.log_actual[h]) << ','
          << format_double(week.log_forecast[h]) << '\n';
    }
  }
}

void write_smoother_csv(std::ostream& out, const gam::GamFit& fit) {
  out << "term,hour,day,value\n";
  std::vector<double> hours, days;
  for (int d = 0; d < 7; ++d) {
    for (int h = 0; h < 24; ++h) {
      hours.push_back(h);
      days.push_back(d);
    }
  }
  for (std::size_t j = 0; j < fit.smoothers.size(); ++j) {
    const auto& spec = fit.smoothers[j].smoother.spec();
    Eigen::VectorXd term = gam::predict_term(fit, j, hours, days);
    const std::string name = std::string(gam::to_string(spec.kind)) + "(" +
                             gam::to_string(spec.covariate) + ")";
    for (std::size_t i = 0; i < hours.size(); ++i) {
      // Main effects only vary along their own covariate; emit one slice.
      if (spec.covariate == gam::Covariate::Hour && days[i] != 0) continue;
      if (spec.covariate == gam::Covariate::Day && hours[i] != 0) continue;
      out << name << ',' << hours[i] << ',' << days[i] << ','
          << format_double(term(static_cast<Eigen::Index>(i))) << '\n';
    }
  }
}

}  // namespace bessbid::forecast
