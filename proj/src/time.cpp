#include "peakcast/time.hpp"

#include <charconv>
#include <cstdio>

#include "peakcast/errors.hpp"

namespace peakcast {

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) raise(errc::index_out_of_range, "month out of range: " + std::to_string(month));
  if (month == 2 && is_leap_year(year)) return 29;
  return table[month - 1];
}

// Howard Hinnant's civil-calendar algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

namespace {

int parse_int_field(std::string_view s, std::size_t pos, std::size_t len, const char* what) {
  int value = 0;
  if (pos + len > s.size()) raise(errc::malformed_row, std::string("truncated timestamp field: ") + what);
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
  if (ec != std::errc() || ptr != s.data() + pos + len)
    raise(errc::malformed_row, std::string("bad timestamp field: ") + what);
  return value;
}

}  // namespace

std::string CivilDate::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

CivilDate CivilDate::parse(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    raise(errc::malformed_row, "bad date: " + std::string(s));
  CivilDate d;
  d.year = parse_int_field(s, 0, 4, "year");
  d.month = parse_int_field(s, 5, 2, "month");
  d.day = parse_int_field(s, 8, 2, "day");
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
    raise(errc::malformed_row, "invalid date: " + std::string(s));
  return d;
}

Timestamp Timestamp::from_minutes(std::int64_t minutes_since_epoch) {
  Timestamp t;
  t.minutes_ = minutes_since_epoch;
  return t;
}

Timestamp Timestamp::from_hours(std::int64_t h) { return from_minutes(h * 60); }

Timestamp Timestamp::from_civil(int year, int month, int day, int hour, int minute) {
  return from_minutes(days_from_civil(year, month, day) * 1440 + hour * 60 + minute);
}

Timestamp Timestamp::from_civil(const CivilDate& d, int hour, int minute) {
  return from_civil(d.year, d.month, d.day, hour, minute);
}

Timestamp Timestamp::parse(std::string_view s) {
  if (s.size() < 10) raise(errc::malformed_row, "bad timestamp: " + std::string(s));
  const CivilDate d = CivilDate::parse(s.substr(0, 10));
  int hour = 0, minute = 0;
  if (s.size() > 10) {
    if ((s[10] != 'T' && s[10] != ' ') || s.size() < 16 || s[13] != ':')
      raise(errc::malformed_row, "bad timestamp: " + std::string(s));
    hour = parse_int_field(s, 11, 2, "hour");
    minute = parse_int_field(s, 14, 2, "minute");
    if (s.size() > 16) {
      // optional ":SS", seconds must be 00
      if (s.size() != 19 || s[16] != ':' || parse_int_field(s, 17, 2, "second") != 0)
        raise(errc::malformed_row, "sub-minute timestamp not supported: " + std::string(s));
    }
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59)
      raise(errc::malformed_row, "bad time of day: " + std::string(s));
  }
  return from_civil(d, hour, minute);
}

std::string Timestamp::to_string() const {
  const CivilDate d = date();
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", d.year, d.month, d.day, hour(), minute());
  return buf;
}

std::int64_t Timestamp::hours() const {
  const std::int64_t m = minutes_;
  return (m >= 0 ? m : m - 59) / 60;
}

CivilDate Timestamp::date() const {
  const std::int64_t days = (minutes_ >= 0 ? minutes_ : minutes_ - 1439) / 1440;
  return civil_from_days(days);
}

int Timestamp::hour() const {
  std::int64_t mod = minutes_ % 1440;
  if (mod < 0) mod += 1440;
  return static_cast<int>(mod / 60);
}

int Timestamp::minute() const {
  std::int64_t mod = minutes_ % 60;
  if (mod < 0) mod += 60;
  return static_cast<int>(mod);
}

int Timestamp::weekday() const {
  const std::int64_t days = (minutes_ >= 0 ? minutes_ : minutes_ - 1439) / 1440;
  // 1970-01-01 was a Thursday.
  std::int64_t w = (days + 4) % 7;
  if (w < 0) w += 7;
  return static_cast<int>(w);
}

}  // namespace peakcast
