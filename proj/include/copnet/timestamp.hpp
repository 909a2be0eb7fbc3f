#ifndef COPNET_TIMESTAMP_HPP
#define COPNET_TIMESTAMP_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace copnet {

/// Calendar point with day precision for windowing and full (second)
/// precision for identity. Day is counted from 1970-01-01.
struct Timestamp {
  int64_t day = 0;
  int32_t sec = 0;  // second of day, 0..86399

  auto operator<=>(const Timestamp&) const = default;
};

int64_t days_from_civil(int year, int month, int day);
void civil_from_days(int64_t days, int& year, int& month, int& day);

/// Parse ISO-8601 "YYYY-MM-DD" or "YYYY-MM-DD[T ]HH:MM[:SS]".
/// Throws Error on malformed or non-calendar dates.
Timestamp parse_timestamp(const std::string& text);

/// Canonical form: date only when the time-of-day is midnight.
std::string format_timestamp(const Timestamp& ts);

}  // namespace copnet

#endif
