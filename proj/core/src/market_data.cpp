#include "bessbid/market_data.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bessbid/error.hpp"
#include "text_util.hpp"

namespace bessbid {

using detail::format_double;
using detail::parse_double;
using detail::split;

const char* to_string(RevenueMarket m) {
  return m == RevenueMarket::Spot ? "SPOT" : "FCR_N";
}

RevenueMarket revenue_market_from_string(const std::string& s) {
  if (s == "SPOT" || s == "spot") return RevenueMarket::Spot;
  if (s == "FCR_N" || s == "fcr_n" || s == "FCR-N") return RevenueMarket::FcrN;
  throw ConfigError("unknown revenue market '" + s + "'");
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("column '" + name + "' not found in CSV header");
}

bool hour_aligned(TimePoint t) {
  return t.time_since_epoch().count() % 3600 == 0;
}

}  // namespace

HourlySeries make_hourly_series(std::string zone, RevenueMarket market,
                                std::vector<HourlyRecord> records) {
  HourlySeries series;
  series.zone = std::move(zone);
  series.market = market;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!hour_aligned(records[i].timestamp)) {
      throw DataError("record " + std::to_string(i) + " timestamp is not hour aligned");
    }
    if (i > 0) {
      auto step = records[i].timestamp - records[i - 1].timestamp;
      if (step.count() <= 0) {
        throw DataError("record " + std::to_string(i) + " timestamp is not strictly increasing");
      }
      if (step != std::chrono::hours{1}) series.gaps.push_back(i);
    }
  }
  series.records = std::move(records);
  return series;
}

HourlySeries parse_hourly_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("hourly CSV is empty");
  auto header = split(line);
  // split() returns views into `line`; copy names before the buffer is reused.
  std::vector<std::string> names(header.begin(), header.end());
  std::vector<std::string_view> name_views(names.begin(), names.end());
  const std::size_t ts_col = find_column(name_views, schema.timestamp_column);
  const std::size_t price_col = find_column(name_views, schema.price_column);
  const std::size_t vol_col = find_column(name_views, schema.volume_column);
  const std::size_t needed = std::max({ts_col, price_col, vol_col}) + 1;

  HourlySeries series;
  series.zone = schema.zone;
  series.market = schema.market;

  std::size_t line_no = 1;
  auto reject = [&](std::size_t ln, const std::string& reason) {
    if (!schema.lenient) throw DataError("line " + std::to_string(ln) + ": " + reason);
    series.rejections.push_back({ln, reason});
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = split(line);
    if (fields.size() < needed) {
      reject(line_no, "expected at least " + std::to_string(needed) + " columns");
      continue;
    }
    auto ts = parse_rfc3339(fields[ts_col]);
    if (!ts) {
      reject(line_no, "malformed timestamp '" + std::string(fields[ts_col]) + "'");
      continue;
    }
    if (!hour_aligned(*ts)) {
      reject(line_no, "timestamp not on an hour boundary");
      continue;
    }
    auto price = parse_double(fields[price_col]);
    if (!price || !std::isfinite(*price)) {
      reject(line_no, "non-numeric price '" + std::string(fields[price_col]) + "'");
      continue;
    }
    auto volume = parse_double(fields[vol_col]);
    if (!volume || !std::isfinite(*volume)) {
      reject(line_no, "non-numeric volume '" + std::string(fields[vol_col]) + "'");
      continue;
    }
    if (!series.records.empty()) {
      const auto& prev = series.records.back();
      if (*ts == prev.timestamp) {
        // Duplicates are never silently dropped, even in lenient mode.
        throw DataError("line " + std::to_string(line_no) + ": duplicate timestamp " +
                        format_rfc3339(*ts) + " (first seen on line " +
                        std::to_string(prev.line) + ")");
      }
      if (*ts < prev.timestamp) {
        throw DataError("line " + std::to_string(line_no) + ": timestamp " +
                        format_rfc3339(*ts) + " is earlier than the previous row");
      }
      if (*ts - prev.timestamp != std::chrono::hours{1}) {
        series.gaps.push_back(series.records.size());
      }
    }
    series.records.push_back({*ts, *price, *volume, line_no});
  }
  return series;
}

HourlySeries load_hourly_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open hourly CSV '" + path.string() + "'");
  return parse_hourly_csv(in, schema);
}

void write_hourly_csv(std::ostream& out, const HourlySeries& series, const CsvSchema& schema) {
  out << schema.timestamp_column << ',' << schema.price_column << ',' << schema.volume_column
      << '\n';
  for (const auto& r : series.records) {
    out << format_rfc3339(r.timestamp) << ',' << format_double(r.price) << ','
        << format_double(r.volume) << '\n';
  }
}

void write_rejections_jsonl(std::ostream& out, const std::vector<Rejection>& rejections) {
  for (const auto& r : rejections) {
    out << "{\"line\":" << r.line << ",\"reason\":\"" << json_escape(r.reason) << "\"}\n";
  }
}

LogRevenueSeries to_log_revenue(const HourlySeries& series, int utc_offset_hours) {
  LogRevenueSeries out;
  out.zone = series.zone;
  out.market = series.market;
  out.points.reserve(series.records.size());
  for (const auto& r : series.records) {
    if (!(r.price > 0.0) || !(r.volume > 0.0)) {
      out.rejections.push_back(
          {r.line, "nonpositive price or volume (price=" + format_double(r.price) +
                       ", volume=" + format_double(r.volume) + ")"});
      continue;
    }
    out.points.push_back({r.timestamp, hour_of_day(r.timestamp, utc_offset_hours),
                          day_of_week(r.timestamp, utc_offset_hours),
                          std::log(r.price * r.volume)});
  }
  return out;
}

void write_log_revenue_csv(std::ostream& out, const LogRevenueSeries& series) {
  out << "timestamp,hour,day,log_revenue\n";
  for (const auto& p : series.points) {
    out << format_rfc3339(p.timestamp) << ',' << p.hour << ',' << p.day << ','
        << format_double(p.value) << '\n';
  }
}

FrequencyTrace make_frequency_trace(TimePoint start, std::vector<double> hz) {
  if (start.time_since_epoch().count() % 60 != 0) {
    throw DataError("frequency trace start is not on a minute boundary");
  }
  if (hz.empty() || hz.size() % 60 != 0) {
    throw DataError("frequency trace length " + std::to_string(hz.size()) +
                    " is not a whole number of hours");
  }
  for (std::size_t i = 0; i < hz.size(); ++i) {
    if (!(hz[i] >= kFrequencyLowerBound && hz[i] <= kFrequencyUpperBound)) {
      throw DataError("frequency sample " + std::to_string(i) + " = " + format_double(hz[i]) +
                      " Hz outside [49, 51]");
    }
  }
  return FrequencyTrace{start, std::move(hz)};
}

FrequencyTrace parse_frequency_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("frequency CSV is empty");
  std::vector<double> values;
  TimePoint start{};
  TimePoint prev{};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = split(line);
    if (fields.size() < 2) {
      throw DataError("line " + std::to_string(line_no) + ": expected timestamp,hz");
    }
    auto ts = parse_rfc3339(fields[0]);
    if (!ts) throw DataError("line " + std::to_string(line_no) + ": malformed timestamp");
    auto hz = parse_double(fields[1]);
    if (!hz) throw DataError("line " + std::to_string(line_no) + ": non-numeric frequency");
    if (values.empty()) {
      start = *ts;
    } else if (*ts - prev != std::chrono::minutes{1}) {
      throw DataError("line " + std::to_string(line_no) + ": gap in minute cadence at " +
                      format_rfc3339(*ts));
    }
    prev = *ts;
    values.push_back(*hz);
  }
  return make_frequency_trace(start, std::move(values));
}

FrequencyTrace load_frequency_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open frequency CSV '" + path.string() + "'");
  return parse_frequency_csv(in);
}

void write_frequency_csv(std::ostream& out, const FrequencyTrace& trace) {
  out << "timestamp,hz\n";
  for (std::size_t i = 0; i < trace.hz.size(); ++i) {
    out << format_rfc3339(trace.start + std::chrono::minutes{static_cast<long>(i)}) << ','
        << format_double(trace.hz[i]) << '\n';
  }
}

std::vector<Window> rolling_windows(std::size_t series_length, std::size_t train_len,
                                    std::size_t horizon) {
  if (train_len == 0 || horizon == 0) throw ConfigError("window lengths must be positive");
  if (series_length < train_len + horizon) {
    throw DataError("series of " + std::to_string(series_length) +
                    " points is shorter than train+horizon = " +
                    std::to_string(train_len + horizon));
  }
  std::vector<Window> windows;
  for (std::size_t start = 0; start + train_len + horizon <= series_length; start += horizon) {
    windows.push_back({start, start + train_len, start + train_len, start + train_len + horizon});
  }
  return windows;
}

}  // namespace bessbid
