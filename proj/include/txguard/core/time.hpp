#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace txguard {

// Calendar date in UTC, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  // Strict "YYYY-MM-DD"; throws ValidationError.
  static Date parse(std::string_view text);

  constexpr std::int32_t days_since_epoch() const { return days_; }
  int year() const;
  unsigned month() const;
  unsigned day() const;

  // Last day of this date's calendar month.
  Date end_of_month() const;

  std::string to_string() const;

  constexpr Date operator+(std::int32_t days) const { return Date(days_ + days); }
  constexpr std::int32_t operator-(Date other) const { return days_ - other.days_; }
  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

// Instant with millisecond resolution, UTC.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t millis_since_epoch) : millis_(millis_since_epoch) {}

  // RFC 3339 date-time, e.g. "2022-02-01T08:30:00Z" or "2022-02-01T18:30:00.250+10:00".
  // Throws ValidationError.
  static Timestamp parse_rfc3339(std::string_view text);
  static Timestamp from_date(Date date, int hour = 0, int minute = 0, int second = 0);

  constexpr std::int64_t millis_since_epoch() const { return millis_; }
  Date date() const;

  // Canonical UTC form; fractional seconds printed only when non-zero.
  std::string to_rfc3339() const;

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t millis_ = 0;
};

}  // namespace txguard
