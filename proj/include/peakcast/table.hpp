#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "peakcast/ingest.hpp"
#include "peakcast/time.hpp"

namespace peakcast {

// Read-only index over a chronologically sorted unified table. Gaps are
// allowed; per-day and per-month completeness is checked where a computation
// needs it.
class HourlyTable {
 public:
  HourlyTable() = default;
  explicit HourlyTable(std::vector<HourlyRecord> records);

  std::span<const HourlyRecord> records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  const HourlyRecord* at_hour(Timestamp hour) const;
  const HourlyRecord* at_hour(std::int64_t hours_since_epoch) const;

  // All 24 records of a calendar day, or nullopt if any hour is missing.
  std::optional<std::span<const HourlyRecord>> day(const CivilDate& d) const;
  bool day_complete(const CivilDate& d) const { return day(d).has_value(); }

  // Every complete month (year, month) present, ascending.
  std::vector<std::pair<int, int>> complete_months() const;
  bool month_complete(int year, int month) const;

  // Years with at least one record.
  std::vector<int> years() const;

  Timestamp first() const { return records_.front().ts; }
  Timestamp last() const { return records_.back().ts; }

 private:
  std::vector<HourlyRecord> records_;
  std::unordered_map<std::int64_t, std::size_t> by_hour_;
};

// Daily aggregates used by the peak-day features and labels.
struct DailySummary {
  CivilDate date;
  double max_actual = 0;
  double max_forecast = 0;
  double t_min = 0;
  double t_max = 0;
  int peak_hour_actual = 0;  // earliest hour attaining the day's max actual load
  bool weekend = false;
};

// Summaries for every complete day of a month; nullopt if the month is
// incomplete.
std::optional<std::vector<DailySummary>> month_daily_summaries(const HourlyTable& table, int year,
                                                               int month);
std::optional<DailySummary> day_summary(const HourlyTable& table, const CivilDate& d);

}  // namespace peakcast
