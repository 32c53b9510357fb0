#include "peakcast/table.hpp"

#include <algorithm>

#include "peakcast/errors.hpp"

namespace peakcast {

HourlyTable::HourlyTable(std::vector<HourlyRecord> records) : records_(std::move(records)) {
  if (!std::is_sorted(records_.begin(), records_.end(),
                      [](const HourlyRecord& a, const HourlyRecord& b) { return a.ts < b.ts; }))
    std::sort(records_.begin(), records_.end(),
              [](const HourlyRecord& a, const HourlyRecord& b) { return a.ts < b.ts; });
  by_hour_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    auto [it, inserted] = by_hour_.emplace(records_[i].ts.hours(), i);
    if (!inserted) raise(errc::malformed_row, "duplicate hour in table: " + records_[i].ts.to_string());
  }
}

const HourlyRecord* HourlyTable::at_hour(Timestamp hour) const { return at_hour(hour.hours()); }

const HourlyRecord* HourlyTable::at_hour(std::int64_t hours_since_epoch) const {
  const auto it = by_hour_.find(hours_since_epoch);
  return it == by_hour_.end() ? nullptr : &records_[it->second];
}

std::optional<std::span<const HourlyRecord>> HourlyTable::day(const CivilDate& d) const {
  const auto it = by_hour_.find(Timestamp::from_civil(d).hours());
  if (it == by_hour_.end()) return std::nullopt;
  const std::size_t start = it->second;
  if (start + 24 > records_.size()) return std::nullopt;
  // Records are sorted and hour-unique, so 24 consecutive entries spanning
  // exactly 23 hours means the day is complete.
  if (records_[start + 23].ts.hours() - records_[start].ts.hours() != 23) return std::nullopt;
  return std::span<const HourlyRecord>(records_.data() + start, 24);
}

bool HourlyTable::month_complete(int year, int month) const {
  const int n_days = days_in_month(year, month);
  for (int d = 1; d <= n_days; ++d)
    if (!day_complete(CivilDate{year, month, d})) return false;
  return true;
}

std::vector<std::pair<int, int>> HourlyTable::complete_months() const {
  std::vector<std::pair<int, int>> out;
  if (records_.empty()) return out;
  const CivilDate first = records_.front().ts.date();
  const CivilDate last = records_.back().ts.date();
  for (int y = first.year; y <= last.year; ++y) {
    for (int m = (y == first.year ? first.month : 1); m <= (y == last.year ? last.month : 12); ++m) {
      if (month_complete(y, m)) out.emplace_back(y, m);
    }
  }
  return out;
}

std::vector<int> HourlyTable::years() const {
  std::vector<int> out;
  for (const auto& r : records_) {
    const int y = r.ts.date().year;
    if (out.empty() || out.back() != y) {
      if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<DailySummary> day_summary(const HourlyTable& table, const CivilDate& d) {
  const auto day = table.day(d);
  if (!day) return std::nullopt;
  DailySummary s;
  s.date = d;
  s.max_actual = day->front().actual_load;
  s.max_forecast = day->front().forecast_load;
  s.t_min = day->front().temp;
  s.t_max = day->front().temp;
  s.peak_hour_actual = 0;
  s.weekend = day->front().weekday_index == 1;
  for (int h = 1; h < 24; ++h) {
    const auto& r = (*day)[static_cast<std::size_t>(h)];
    if (r.actual_load > s.max_actual) {
      s.max_actual = r.actual_load;
      s.peak_hour_actual = h;  // strict >, so ties keep the earliest hour
    }
    s.max_forecast = std::max(s.max_forecast, r.forecast_load);
    s.t_min = std::min(s.t_min, r.temp);
    s.t_max = std::max(s.t_max, r.temp);
  }
  return s;
}

std::optional<std::vector<DailySummary>> month_daily_summaries(const HourlyTable& table, int year,
                                                               int month) {
  const int n_days = days_in_month(year, month);
  std::vector<DailySummary> out;
  out.reserve(static_cast<std::size_t>(n_days));
  for (int d = 1; d <= n_days; ++d) {
    auto s = day_summary(table, CivilDate{year, month, d});
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  return out;
}

}  // namespace peakcast
