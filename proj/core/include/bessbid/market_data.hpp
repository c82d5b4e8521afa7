#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bessbid/time_utils.hpp"

namespace bessbid {

enum class RevenueMarket { Spot, FcrN };

const char* to_string(RevenueMarket m);
RevenueMarket revenue_market_from_string(const std::string& s);

struct HourlyRecord {
  TimePoint timestamp;  // UTC hour start
  double price = 0.0;
  double volume = 0.0;
  std::size_t line = 0;  // 1-based line in the source file, 0 if synthetic
};

// A row that was dropped or excluded, with the reason. Serialized as one JSON
// object per line: {"line": N, "reason": "..."}.
struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct HourlySeries {
  std::string zone;
  RevenueMarket market = RevenueMarket::Spot;
  std::vector<HourlyRecord> records;
  // Indices i such that records[i] does not follow records[i-1] by one hour.
  std::vector<std::size_t> gaps;
  std::vector<Rejection> rejections;
};

// Column mapping for hourly CSV input. Public Nordic data sources differ in
// header names, so nothing is hard-coded beyond these defaults.
struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::string price_column = "price";
  std::string volume_column = "volume";
  std::string zone;
  RevenueMarket market = RevenueMarket::Spot;
  // When false any malformed row aborts the load with a DataError naming the
  // row. When true, malformed rows become rejections and loading continues.
  bool lenient = false;
};

HourlySeries load_hourly_csv(const std::filesystem::path& path, const CsvSchema& schema);
HourlySeries parse_hourly_csv(std::istream& in, const CsvSchema& schema);

// Builds a series from records, sorting nothing: timestamps must already be
// strictly increasing and hour aligned. Gaps are recorded, never filled.
HourlySeries make_hourly_series(std::string zone, RevenueMarket market,
                                std::vector<HourlyRecord> records);

void write_hourly_csv(std::ostream& out, const HourlySeries& series, const CsvSchema& schema);

void write_rejections_jsonl(std::ostream& out, const std::vector<Rejection>& rejections);

struct LogRevenuePoint {
  TimePoint timestamp;
  int hour = 0;  // 0-23, zone local
  int day = 0;   // 0 = Monday
  double value = 0.0;
};

struct LogRevenueSeries {
  std::string zone;
  RevenueMarket market = RevenueMarket::Spot;
  std::vector<LogRevenuePoint> points;
  std::vector<Rejection> rejections;  // nonpositive price or volume

  std::size_t size() const { return points.size(); }
};

// value = ln(price * volume). Records with a nonpositive product are excluded
// and counted in `rejections`.
LogRevenueSeries to_log_revenue(const HourlySeries& series, int utc_offset_hours = 0);

void write_log_revenue_csv(std::ostream& out, const LogRevenueSeries& series);

struct FrequencyTrace {
  TimePoint start;  // UTC minute
  std::vector<double> hz;

  std::size_t hours() const { return hz.size() / 60; }
};

inline constexpr double kFrequencyLowerBound = 49.0;
inline constexpr double kFrequencyUpperBound = 51.0;

// Validates range and whole-hour length; throws DataError naming the index.
FrequencyTrace make_frequency_trace(TimePoint start, std::vector<double> hz);
FrequencyTrace load_frequency_csv(const std::filesystem::path& path);
FrequencyTrace parse_frequency_csv(std::istream& in);
void write_frequency_csv(std::ostream& out, const FrequencyTrace& trace);

struct Window {
  std::size_t train_begin = 0;
  std::size_t train_end = 0;  // exclusive
  std::size_t test_begin = 0;
  std::size_t test_end = 0;  // exclusive
};

inline constexpr std::size_t kDefaultTrainHours = 336;
inline constexpr std::size_t kDefaultHorizonHours = 168;

// Windows advance by `horizon`; the test segment directly follows training.
std::vector<Window> rolling_windows(std::size_t series_length,
                                    std::size_t train_len = kDefaultTrainHours,
                                    std::size_t horizon = kDefaultHorizonHours);

inline std::vector<Window> rolling_windows(const LogRevenueSeries& series,
                                           std::size_t train_len = kDefaultTrainHours,
                                           std::size_t horizon = kDefaultHorizonHours) {
  return rolling_windows(series.size(), train_len, horizon);
}

}  // namespace bessbid
