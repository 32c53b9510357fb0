#include "peakcast/features.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"

namespace peakcast {

const std::array<std::string, PeakDayFeatureRow::kNumFeatures>& PeakDayFeatureRow::feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "load_max", "T_min", "T_max", "weekdayIdx", "prev_month_max", "prev_MAX",
      "T_min_day_2_to_7", "T_max_day_2_to_7"};
  return names;
}

std::array<double, PeakDayFeatureRow::kNumFeatures> PeakDayFeatureRow::features() const {
  return {load_max, t_min, t_max, static_cast<double>(weekday_idx), prev_month_max, prev_max,
          t_min_day_2_to_7, t_max_day_2_to_7};
}

const std::array<std::string, PeakHourFeatureRow::kNumFeatures>& PeakHourFeatureRow::feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "load_forecast", "T", "humidity", "weekendIdx", "peak_prev_day",
      "T_m_1", "T_m_2", "T_m_3", "T_p_1", "T_p_2", "T_p_3",
      "load_m_1", "load_m_2", "load_m_3", "load_p_1", "load_p_2", "load_p_3",
      "prev_max_load", "after_max_load", "rank_load_forecast", "rank_load_prevDay",
      "load_prevDay", "load_prevDay_forecast"};
  return names;
}

std::array<double, PeakHourFeatureRow::kNumFeatures> PeakHourFeatureRow::features() const {
  return {load_forecast,
          temp,
          humidity,
          static_cast<double>(weekend_idx),
          static_cast<double>(peak_prev_day),
          t_m1,
          t_m2,
          t_m3,
          t_p1,
          t_p2,
          t_p3,
          load_m1,
          load_m2,
          load_m3,
          load_p1,
          load_p2,
          load_p3,
          prev_max_load,
          after_max_load,
          static_cast<double>(rank_load_forecast),
          static_cast<double>(rank_load_prev_day),
          load_prev_day,
          load_prev_day_forecast};
}

std::vector<int> label_direct(std::span<const double> month_daily_max) {
  if (month_daily_max.empty()) raise(errc::empty_month, "label_direct: empty month");
  std::size_t best = 0;
  for (std::size_t i = 1; i < month_daily_max.size(); ++i)
    if (month_daily_max[i] > month_daily_max[best]) best = i;  // strict >, earliest tie
  std::vector<int> labels(month_daily_max.size(), 0);
  labels[best] = 1;
  return labels;
}

int label_up_to_date(std::span<const double> month_daily_max, int n, int month_length) {
  if (month_length != static_cast<int>(month_daily_max.size()))
    raise(errc::index_out_of_range, "label_up_to_date: month length mismatch");
  if (n < 1 || n > month_length) raise(errc::index_out_of_range, "label_up_to_date: day index " + std::to_string(n));
  const int window_end = std::min(n + 6, month_length);  // days 1..window_end
  int best = 0;
  for (int i = 1; i < window_end; ++i)
    if (month_daily_max[static_cast<std::size_t>(i)] > month_daily_max[static_cast<std::size_t>(best)]) best = i;
  return best == n - 1 ? 1 : 0;
}

std::vector<int> rank_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<int> ranks(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = static_cast<int>(pos) + 1;
  return ranks;
}

std::vector<PeakDayFeatureRow> build_peak_day_rows(const HourlyTable& table, int month) {
  if (month < 1 || month > 12) raise(errc::index_out_of_range, "month out of range");
  std::vector<PeakDayFeatureRow> rows;

  for (int year : table.years()) {
    const auto days = month_daily_summaries(table, year, month);
    if (!days) continue;  // month not fully covered for this year
    const int n_days = static_cast<int>(days->size());

    const CivilDate first{year, month, 1};
    const CivilDate day_before =
        civil_from_days(days_from_civil(first.year, first.month, first.day) - 1);
    const auto prior = day_summary(table, day_before);
    if (!prior)
      raise(errc::insufficient_history,
            "peak-day rows for " + std::to_string(year) + "-" + std::to_string(month) +
                ": previous day " + day_before.to_string() + " absent");

    std::vector<double> daily_max(days->size());
    for (std::size_t i = 0; i < days->size(); ++i) daily_max[i] = (*days)[i].max_actual;
    const std::vector<int> direct = label_direct(daily_max);

    double running_max = 0;  // max actual over days 1..n-1
    for (int n = 1; n <= n_days; ++n) {
      const DailySummary& d = (*days)[static_cast<std::size_t>(n - 1)];
      PeakDayFeatureRow row;
      row.date = d.date;
      row.load_max = d.max_forecast;
      row.t_min = d.t_min;
      row.t_max = d.t_max;
      row.weekday_idx = d.weekend ? 1 : 0;
      row.prev_max = n == 1 ? prior->max_actual : (*days)[static_cast<std::size_t>(n - 2)].max_actual;
      // Day 1 has no month-to-date history; fall back to the previous day's max.
      row.prev_month_max = n == 1 ? row.prev_max : running_max;
      const int win_begin = n + 1, win_end = std::min(n + 6, n_days);
      if (win_begin <= win_end) {
        double lo = (*days)[static_cast<std::size_t>(win_begin - 1)].t_min;
        double hi = (*days)[static_cast<std::size_t>(win_begin - 1)].t_max;
        for (int k = win_begin + 1; k <= win_end; ++k) {
          lo = std::min(lo, (*days)[static_cast<std::size_t>(k - 1)].t_min);
          hi = std::max(hi, (*days)[static_cast<std::size_t>(k - 1)].t_max);
        }
        row.t_min_day_2_to_7 = lo;
        row.t_max_day_2_to_7 = hi;
      } else {
        // Last day of the month: the clipped window is empty, use the
        // operating day's own extremes.
        row.t_min_day_2_to_7 = d.t_min;
        row.t_max_day_2_to_7 = d.t_max;
      }
      row.label_direct = direct[static_cast<std::size_t>(n - 1)];
      row.label_up_to_date = label_up_to_date(daily_max, n, n_days);
      row.n = n;
      row.month_length = n_days;
      rows.push_back(row);

      running_max = std::max(running_max, d.max_actual);
    }
  }
  return rows;
}

std::array<PeakHourFeatureRow, 24> build_peak_hour_rows(const HourlyTable& table, const CivilDate& date) {
  const auto day = table.day(date);
  if (!day) raise(errc::incomplete_day, "peak-hour rows: day " + date.to_string() + " incomplete");
  const CivilDate prev_date = civil_from_days(days_from_civil(date.year, date.month, date.day) - 1);
  const auto prev = table.day(prev_date);
  if (!prev)
    raise(errc::missing_previous_day, "peak-hour rows: previous day " + prev_date.to_string() + " incomplete");

  const std::int64_t day_start = Timestamp::from_civil(date).hours();
  // Hour neighbors t-3..t+3 read the continuous series; the previous day
  // covers the left edge, the next day's first 3 hours cover the right.
  for (int off = 24; off <= 26; ++off)
    if (!table.at_hour(day_start + off))
      raise(errc::incomplete_day, "peak-hour rows: hour-neighbor data after " + date.to_string() + " absent");

  std::array<double, 24> fcst{}, actual{}, prev_actual{};
  for (int h = 0; h < 24; ++h) {
    fcst[static_cast<std::size_t>(h)] = (*day)[static_cast<std::size_t>(h)].forecast_load;
    actual[static_cast<std::size_t>(h)] = (*day)[static_cast<std::size_t>(h)].actual_load;
    prev_actual[static_cast<std::size_t>(h)] = (*prev)[static_cast<std::size_t>(h)].actual_load;
  }
  const std::vector<int> fcst_rank = rank_descending(fcst);
  const std::vector<int> prev_rank = rank_descending(prev_actual);

  int prev_peak_hour = 0;
  for (int h = 1; h < 24; ++h)
    if (prev_actual[static_cast<std::size_t>(h)] > prev_actual[static_cast<std::size_t>(prev_peak_hour)])
      prev_peak_hour = h;
  int peak_hour = 0;
  for (int h = 1; h < 24; ++h)
    if (actual[static_cast<std::size_t>(h)] > actual[static_cast<std::size_t>(peak_hour)]) peak_hour = h;

  std::array<PeakHourFeatureRow, 24> rows;
  for (int t = 0; t < 24; ++t) {
    PeakHourFeatureRow& row = rows[static_cast<std::size_t>(t)];
    const HourlyRecord& rec = (*day)[static_cast<std::size_t>(t)];
    row.date = date;
    row.hour = t;
    row.load_forecast = rec.forecast_load;
    row.temp = rec.temp;
    row.humidity = rec.humidity;
    row.weekend_idx = rec.weekday_index;
    row.peak_prev_day = t == prev_peak_hour ? 1 : 0;

    const auto neighbor = [&](int off) -> const HourlyRecord& { return *table.at_hour(day_start + t + off); };
    row.t_m1 = neighbor(-1).temp;
    row.t_m2 = neighbor(-2).temp;
    row.t_m3 = neighbor(-3).temp;
    row.t_p1 = neighbor(1).temp;
    row.t_p2 = neighbor(2).temp;
    row.t_p3 = neighbor(3).temp;
    row.load_m1 = neighbor(-1).forecast_load;
    row.load_m2 = neighbor(-2).forecast_load;
    row.load_m3 = neighbor(-3).forecast_load;
    row.load_p1 = neighbor(1).forecast_load;
    row.load_p2 = neighbor(2).forecast_load;
    row.load_p3 = neighbor(3).forecast_load;

    if (t == 0) {
      row.prev_max_load = fcst[0];
    } else {
      row.prev_max_load = *std::max_element(fcst.begin(), fcst.begin() + t);
    }
    if (t == 23) {
      row.after_max_load = fcst[23];
    } else {
      row.after_max_load = *std::max_element(fcst.begin() + t + 1, fcst.end());
    }

    row.rank_load_forecast = fcst_rank[static_cast<std::size_t>(t)];
    row.rank_load_prev_day = prev_rank[static_cast<std::size_t>(t)];
    row.load_prev_day = prev_actual[static_cast<std::size_t>(t)];
    row.load_prev_day_forecast = (*prev)[static_cast<std::size_t>(t)].forecast_load;
    row.label = t == peak_hour ? 1 : 0;
  }
  return rows;
}

std::string peak_day_rows_to_csv(std::span<const PeakDayFeatureRow> rows) {
  std::ostringstream out;
  out << "date,load_max,T_min,T_max,weekdayIdx,prev_month_max,prev_MAX,T_min_day_2_to_7,"
         "T_max_day_2_to_7,n,N,label_direct,label_up_to_date\n";
  for (const auto& r : rows) {
    out << r.date.to_string() << ',' << format_double(r.load_max) << ',' << format_double(r.t_min) << ','
        << format_double(r.t_max) << ',' << r.weekday_idx << ',' << format_double(r.prev_month_max) << ','
        << format_double(r.prev_max) << ',' << format_double(r.t_min_day_2_to_7) << ','
        << format_double(r.t_max_day_2_to_7) << ',' << r.n << ',' << r.month_length << ',' << r.label_direct
        << ',' << r.label_up_to_date << '\n';
  }
  return out.str();
}

std::string peak_hour_rows_to_csv(std::span<const PeakHourFeatureRow> rows) {
  std::ostringstream out;
  out << "date,hour";
  for (const auto& name : PeakHourFeatureRow::feature_names()) out << ',' << name;
  out << ",label\n";
  for (const auto& r : rows) {
    out << r.date.to_string() << ',' << r.hour;
    for (double v : r.features()) out << ',' << format_double(v);
    out << ',' << r.label << '\n';
  }
  return out.str();
}

}  // namespace peakcast
