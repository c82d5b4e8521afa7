#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bessbid/error.hpp"
#include "bessbid/market_data.hpp"
#include "test_support.hpp"

namespace bessbid {
namespace {

using testing::fixture;

CsvSchema spot_schema() {
  CsvSchema s;
  s.zone = "SE3";
  s.market = RevenueMarket::Spot;
  return s;
}

TEST(HourlyCsv, ThreeWellFormedRowsGiveThreeRecords) {
  const auto series = load_hourly_csv(fixture("hourly_3rows.csv"), spot_schema());
  ASSERT_EQ(series.records.size(), 3u);
  EXPECT_TRUE(series.gaps.empty());
  EXPECT_TRUE(series.rejections.empty());
  EXPECT_DOUBLE_EQ(series.records[1].price, 29.25);
  EXPECT_EQ(series.records[2].line, 4u);
}

TEST(HourlyCsv, DuplicateHourNamesTheRow) {
  try {
    load_hourly_csv(fixture("hourly_duplicate.csv"), spot_schema());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(HourlyCsv, ZeroPriceRowIsExcludedFromLogRevenue) {
  const auto series = load_hourly_csv(fixture("hourly_zero_price.csv"), spot_schema());
  ASSERT_EQ(series.records.size(), 4u);
  const auto lr = to_log_revenue(series);
  // Manual scan of the fixture: only line 3 has a nonpositive price.
  ASSERT_EQ(lr.rejections.size(), 1u);
  EXPECT_EQ(lr.rejections[0].line, 3u);
  EXPECT_EQ(lr.size(), 3u);
}

TEST(HourlyCsv, MissingFileIsDataError) {
  EXPECT_THROW(load_hourly_csv(fixture("does_not_exist.csv"), spot_schema()), DataError);
}

TEST(HourlyCsv, RoundTripReproducesSeries) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 500.0);
  std::vector<HourlyRecord> recs;
  const TimePoint t0{std::chrono::sys_days{std::chrono::year{2020} / 5 / 1}};
  for (int i = 0; i < 200; ++i) {
    if (i == 50) continue;  // a gap survives the round trip too
    recs.push_back({t0 + std::chrono::hours{i}, u(rng), u(rng), 0});
  }
  const auto a = make_hourly_series("SE3", RevenueMarket::Spot, recs);
  std::stringstream ss;
  write_hourly_csv(ss, a, spot_schema());
  const auto b = parse_hourly_csv(ss, spot_schema());
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].timestamp, b.records[i].timestamp);
    EXPECT_EQ(a.records[i].price, b.records[i].price);
    EXPECT_EQ(a.records[i].volume, b.records[i].volume);
  }
  EXPECT_EQ(a.gaps, b.gaps);
}

TEST(LogRevenue, WorkedExamples) {
  const TimePoint t0{std::chrono::sys_days{std::chrono::year{2021} / 1 / 4}};
  const auto s = make_hourly_series("SE3", RevenueMarket::Spot,
                                    {{t0, 1.0, 1.0, 0},
                                     {t0 + std::chrono::hours{1}, std::numbers::e, 1.0, 0},
                                     {t0 + std::chrono::hours{2}, 20.0, 5.0, 0}});
  const auto lr = to_log_revenue(s);
  ASSERT_EQ(lr.size(), 3u);
  EXPECT_EQ(lr.points[0].value, 0.0);
  EXPECT_NEAR(lr.points[1].value, 1.0, 1e-15);
  EXPECT_NEAR(lr.points[2].value, 4.605170185988091, 1e-12);
  EXPECT_EQ(lr.points[0].day, 0);  // 2021-01-04 is a Monday
  EXPECT_EQ(lr.points[2].hour, 2);
}

TEST(LogRevenue, ExpReproducesRevenueProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lp(-3.0, 8.0);
  std::vector<HourlyRecord> recs;
  const TimePoint t0{std::chrono::sys_days{std::chrono::year{2021} / 1 / 4}};
  for (int i = 0; i < 1000; ++i) recs.push_back({t0 + std::chrono::hours{i}, std::exp(lp(rng)), std::exp(lp(rng)), 0});
  const auto s = make_hourly_series("SE3", RevenueMarket::FcrN, recs);
  const auto lr = to_log_revenue(s);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const double rev = recs[i].price * recs[i].volume;
    EXPECT_NEAR(std::exp(lr.points[i].value) / rev, 1.0, 1e-12);
  }
}

TEST(FrequencyCsv, WorkedExamples) {
  const auto tr = load_frequency_csv(fixture("frequency_flat_2h.csv"));
  EXPECT_EQ(tr.hours(), 2u);
  EXPECT_THROW(load_frequency_csv(fixture("frequency_61.csv")), DataError);
  try {
    load_frequency_csv(fixture("frequency_out_of_range.csv"));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("17"), std::string::npos) << e.what();
  }
}

TEST(RollingWindows, ArithmeticOracle) {
  const auto one = rolling_windows(504, 336, 168);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].test_begin, 336u);
  const auto two = rolling_windows(672, 336, 168);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1].train_begin, 168u);
  EXPECT_EQ(two[1].train_end, 504u);
  EXPECT_THROW(rolling_windows(335, 336, 168), DataError);
}

TEST(RollingWindows, TestSegmentsPartitionProperty) {
  for (std::size_t n = 504; n < 3000; n += 37) {
    for (std::size_t train : {168u, 336u}) {
      const auto w = rolling_windows(n, train, 168);
      ASSERT_FALSE(w.empty());
      // Count of complete windows after the first training block.
      EXPECT_EQ(w.size(), (n - train) / 168);
      for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_EQ(w[i].test_begin, w[i].train_end);
        EXPECT_EQ(w[i].train_end - w[i].train_begin, train);
        EXPECT_LE(w[i].test_end, n);
        if (i > 0) {
          EXPECT_EQ(w[i].test_begin, w[i - 1].test_end);
        }
      }
    }
  }
}

TEST(TimeUtils, Rfc3339) {
  const auto t = parse_rfc3339("2021-03-01T02:00:00+01:00");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_rfc3339(*t), "2021-03-01T01:00:00Z");
  EXPECT_FALSE(parse_rfc3339("2021-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_rfc3339("yesterday"));
  EXPECT_EQ(day_of_week(*t), 0);
  EXPECT_EQ(hour_of_day(*t, 1), 2);
}

}  // namespace
}  // namespace bessbid
