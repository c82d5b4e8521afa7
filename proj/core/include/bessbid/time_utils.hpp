#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace bessbid {

using TimePoint = std::chrono::sys_seconds;

// Parses "YYYY-MM-DDTHH:MM[:SS][.fff](Z|+HH:MM|-HH:MM)". A space is accepted in
// place of 'T' and a missing offset is read as UTC. Returns nullopt on any
// malformed input.
std::optional<TimePoint> parse_rfc3339(std::string_view text);

// Always UTC with a trailing 'Z', second resolution.
std::string format_rfc3339(TimePoint t);

// Hour of day (0-23) and ISO day of week (0 = Monday ... 6 = Sunday) after
// shifting by a fixed offset in hours.
int hour_of_day(TimePoint t, int utc_offset_hours = 0);
int day_of_week(TimePoint t, int utc_offset_hours = 0);

}  // namespace bessbid
