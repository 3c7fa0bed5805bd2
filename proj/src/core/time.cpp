#include "txguard/core/time.hpp"

#include <chrono>
#include <cstdio>

#include "txguard/util/error.hpp"

namespace txguard {

namespace {

constexpr std::int64_t kMillisPerDay = 86'400'000;

std::chrono::year_month_day to_ymd(std::int32_t days) {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days}}};
}

int parse_digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
  if (pos + count > text.size()) throw ValidationError("truncated date/time: '" + std::string(whole) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ValidationError("expected digit in '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char expected, std::string_view whole) {
  if (pos >= text.size() || text[pos] != expected)
    throw ValidationError(std::string("expected '") + expected + "' in '" + std::string(whole) + "'");
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) throw ValidationError("invalid calendar date");
  return Date(static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10) throw ValidationError("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  int y = parse_digits(text, 0, 4, text);
  expect_char(text, 4, '-', text);
  int m = parse_digits(text, 5, 2, text);
  expect_char(text, 7, '-', text);
  int d = parse_digits(text, 8, 2, text);
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(days_).day()); }

Date Date::end_of_month() const {
  auto ymd = to_ymd(days_);
  std::chrono::year_month_day_last last{ymd.year(), std::chrono::month_day_last{ymd.month()}};
  return Date(static_cast<std::int32_t>(std::chrono::sys_days{last}.time_since_epoch().count()));
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

Timestamp Timestamp::parse_rfc3339(std::string_view text) {
  Date date = Date::parse(text.substr(0, std::min<std::size_t>(10, text.size())));
  if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' && text[10] != ' '))
    throw ValidationError("expected RFC 3339 date-time, got '" + std::string(text) + "'");
  int hh = parse_digits(text, 11, 2, text);
  expect_char(text, 13, ':', text);
  int mm = parse_digits(text, 14, 2, text);
  expect_char(text, 16, ':', text);
  int ss = parse_digits(text, 17, 2, text);
  // Leap seconds are folded into the following second.
  if (hh > 23 || mm > 59 || ss > 60) throw ValidationError("time out of range in '" + std::string(text) + "'");

  std::size_t pos = 19;
  std::int64_t millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    std::int64_t scale = 100;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) throw ValidationError("empty fraction in '" + std::string(text) + "'");
  }

  std::int64_t offset_minutes = 0;
  if (pos >= text.size()) throw ValidationError("missing UTC offset in '" + std::string(text) + "'");
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    int sign = text[pos] == '-' ? -1 : 1;
    int oh = parse_digits(text, pos + 1, 2, text);
    expect_char(text, pos + 3, ':', text);
    int om = parse_digits(text, pos + 4, 2, text);
    if (oh > 23 || om > 59) throw ValidationError("offset out of range in '" + std::string(text) + "'");
    offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw ValidationError("bad UTC offset in '" + std::string(text) + "'");
  }
  if (pos != text.size()) throw ValidationError("trailing characters in '" + std::string(text) + "'");

  std::int64_t local = static_cast<std::int64_t>(date.days_since_epoch()) * kMillisPerDay +
                       ((hh * 60 + mm) * 60 + ss) * std::int64_t{1000} + millis;
  return Timestamp(local - offset_minutes * 60'000);
}

Timestamp Timestamp::from_date(Date date, int hour, int minute, int second) {
  return Timestamp(static_cast<std::int64_t>(date.days_since_epoch()) * kMillisPerDay +
                   ((hour * 60 + minute) * 60 + second) * std::int64_t{1000});
}

Date Timestamp::date() const {
  std::int64_t days = millis_ / kMillisPerDay;
  if (millis_ % kMillisPerDay < 0) --days;
  return Date(static_cast<std::int32_t>(days));
}

std::string Timestamp::to_rfc3339() const {
  Date d = date();
  std::int64_t in_day = millis_ - static_cast<std::int64_t>(d.days_since_epoch()) * kMillisPerDay;
  auto ms = static_cast<int>(in_day % 1000);
  auto secs = static_cast<int>(in_day / 1000);
  char buf[48];
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", d.to_string().c_str(), secs / 3600, (secs / 60) % 60,
                  secs % 60);
  } else {
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d.%03dZ", d.to_string().c_str(), secs / 3600, (secs / 60) % 60,
                  secs % 60, ms);
  }
  return buf;
}

}  // namespace txguard
