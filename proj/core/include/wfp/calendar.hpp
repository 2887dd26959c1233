#pragma once

#include <cstdint>

namespace wfp {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

inline int hour_of_day(std::int64_t epoch_seconds, std::int64_t tz_offset_seconds) {
  std::int64_t t = epoch_seconds + tz_offset_seconds;
  std::int64_t s = t - floor_div(t, 86400) * 86400;
  return static_cast<int>(s / 3600);
}

/// 0 = Monday .. 6 = Sunday. The Unix epoch fell on a Thursday (index 3).
inline int day_of_week(std::int64_t epoch_seconds, std::int64_t tz_offset_seconds) {
  std::int64_t days = floor_div(epoch_seconds + tz_offset_seconds, 86400);
  std::int64_t dow = (days + 3) % 7;
  if (dow < 0) dow += 7;
  return static_cast<int>(dow);
}

}  // namespace wfp
