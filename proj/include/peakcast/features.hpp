#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "peakcast/table.hpp"

namespace peakcast {

// One candidate operating day of the peak-day model (8 predictors plus both
// label definitions). Temperatures come from actual weather standing in for
// the unavailable historical forecasts.
struct PeakDayFeatureRow {
  CivilDate date;
  double load_max = 0;          // max day-ahead forecast load over the day
  double t_min = 0;             // day temperature extremes
  double t_max = 0;
  int weekday_idx = 0;          // 1 = weekend
  double prev_month_max = 0;    // max actual load, month start through previous day
  double prev_max = 0;          // previous day's max actual load
  double t_min_day_2_to_7 = 0;  // extremes over days n+1..n+6, clipped at month end
  double t_max_day_2_to_7 = 0;
  int label_direct = 0;      // day is the monthly peak day
  int label_up_to_date = 0;  // day is the peak of days 1..min(n+6, N)
  int n = 0;                 // day of month
  int month_length = 0;      // N

  static constexpr int kNumFeatures = 8;
  static const std::array<std::string, kNumFeatures>& feature_names();
  std::array<double, kNumFeatures> features() const;
};

// One hour of the peak-hour model (23 predictors of the operating day plus
// previous-day attributes). Hour-neighbor values read the continuous hourly
// series, so hours near midnight reach into the adjacent days.
struct PeakHourFeatureRow {
  CivilDate date;
  int hour = 0;
  double load_forecast = 0;
  double temp = 0;
  double humidity = 0;
  int weekend_idx = 0;
  int peak_prev_day = 0;  // hour was the previous day's actual peak hour
  double t_m1 = 0, t_m2 = 0, t_m3 = 0;
  double t_p1 = 0, t_p2 = 0, t_p3 = 0;
  double load_m1 = 0, load_m2 = 0, load_m3 = 0;
  double load_p1 = 0, load_p2 = 0, load_p3 = 0;
  double prev_max_load = 0;   // max forecast over hours 0..t-1 (t=0: this hour)
  double after_max_load = 0;  // max forecast over hours t+1..23 (t=23: this hour)
  int rank_load_forecast = 0;   // 1 = highest forecast of the day, ties to earlier hour
  int rank_load_prev_day = 0;   // rank of actual load at this hour on the previous day
  double load_prev_day = 0;
  double load_prev_day_forecast = 0;
  int label = 0;  // hour is the day's actual peak hour

  static constexpr int kNumFeatures = 23;
  static const std::array<std::string, kNumFeatures>& feature_names();
  std::array<double, kNumFeatures> features() const;
};

// 1 exactly on the day with the month's maximum daily load, earliest day on
// ties. Raises empty_month on empty input.
std::vector<int> label_direct(std::span<const double> month_daily_max);

// 1 iff day n (1-based) attains the maximum over days 1..min(n+6, N),
// earliest-day tie-break. Raises index_out_of_range.
int label_up_to_date(std::span<const double> month_daily_max, int n, int month_length);

// Rows for the given calendar month, one per day, for every year whose month
// is fully covered by the table. Raises insufficient_history when a covered
// month lacks the day before day 1.
std::vector<PeakDayFeatureRow> build_peak_day_rows(const HourlyTable& table, int month);

// The 24 rows of one operating day. Requires the previous day, the day
// itself, and the first 3 hours of the next day (hour-neighbor reads).
std::array<PeakHourFeatureRow, 24> build_peak_hour_rows(const HourlyTable& table, const CivilDate& date);

// Descending rank with rank 1 for the highest value; ties resolved toward the
// earlier index. Returned ranks are a permutation of 1..size.
std::vector<int> rank_descending(std::span<const double> values);

// CSV export, column order matching the model tables.
std::string peak_day_rows_to_csv(std::span<const PeakDayFeatureRow> rows);
std::string peak_hour_rows_to_csv(std::span<const PeakHourFeatureRow> rows);

}  // namespace peakcast
