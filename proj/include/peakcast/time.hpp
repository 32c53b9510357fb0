#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace peakcast {

// Calendar date in local civil time.
struct CivilDate {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  auto operator<=>(const CivilDate&) const = default;
  std::string to_string() const;  // YYYY-MM-DD
  static CivilDate parse(std::string_view s);
};

int days_in_month(int year, int month);
bool is_leap_year(int year);

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);
CivilDate civil_from_days(std::int64_t days);

// One point on the local civil timeline, minute resolution. There is no
// timezone or DST arithmetic anywhere in the project: the timeline is the
// plain wall clock, matching calendar-day peak accounting.
class Timestamp {
 public:
  Timestamp() = default;
  static Timestamp from_minutes(std::int64_t minutes_since_epoch);
  static Timestamp from_hours(std::int64_t hours_since_epoch);
  static Timestamp from_civil(int year, int month, int day, int hour = 0, int minute = 0);
  static Timestamp from_civil(const CivilDate& d, int hour = 0, int minute = 0);

  // Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" or with a space separator.
  // Seconds, if present, must be zero padding only (sub-minute data is not used).
  static Timestamp parse(std::string_view s);

  std::string to_string() const;  // YYYY-MM-DDTHH:MM

  std::int64_t minutes() const { return minutes_; }
  std::int64_t hours() const;  // floors toward negative infinity
  bool is_exact_hour() const { return minutes_ % 60 == 0; }

  CivilDate date() const;
  int year() const { return date().year; }
  int month() const { return date().month; }
  int day() const { return date().day; }
  int hour() const;
  int minute() const;

  // 0 = Sunday .. 6 = Saturday.
  int weekday() const;
  bool is_weekend() const {
    const int w = weekday();
    return w == 0 || w == 6;
  }

  Timestamp floor_hour() const { return from_hours(hours()); }

  auto operator<=>(const Timestamp&) const = default;
  Timestamp operator+(std::int64_t mins) const { return from_minutes(minutes_ + mins); }
  std::int64_t operator-(const Timestamp& o) const { return minutes_ - o.minutes_; }

 private:
  std::int64_t minutes_ = 0;
};

inline std::int64_t hours_between(const Timestamp& a, const Timestamp& b) {
  return (b.minutes() - a.minutes()) / 60;
}

}  // namespace peakcast
