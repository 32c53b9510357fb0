#include "peakcast/backtest.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"

namespace peakcast {

double recall(int tp, int fn) {
  if (tp < 0 || fn < 0) raise(errc::domain_error, "recall: negative count");
  if (tp + fn == 0) raise(errc::zero_denominator, "recall: tp + fn must be positive");
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

namespace {

void check_train_test_overlap(const ModelSet& models, const std::vector<int>& years) {
  for (const auto& [key, bundle] : models.all()) {
    for (const int y : bundle.training_years) {
      if (std::find(years.begin(), years.end(), y) != years.end())
        raise(errc::train_test_overlap, "model " + key.first + "/m" + std::to_string(key.second) +
                                            " was trained on testing year " + std::to_string(y));
    }
  }
}

bool contains_hour(const std::array<int, 2>& sel, int hour) {
  return sel[0] == hour || sel[1] == hour;
}

}  // namespace

BacktestReport run_backtest(const ModelSet& models, const HourlyTable& table,
                            const BacktestConfig& config) {
  if (config.threshold <= 0.0 || config.threshold >= 1.0)
    raise(errc::config_invalid, "backtest: threshold must be in (0, 1)");
  if (config.years.empty()) raise(errc::config_invalid, "backtest: no testing years");
  check_train_test_overlap(models, config.years);

  BacktestReport report;
  report.config = config;
  for (int m = 1; m <= 12; ++m) report.monthly[static_cast<std::size_t>(m - 1)].month = m;

  const std::string day_task = peak_day_task(config.kind);

  for (const int year : config.years) {
    YearSummary ys;
    ys.year = year;
    for (int month = 1; month <= 12; ++month) {
      MonthOutcome out;
      out.year = year;
      out.month = month;

      const auto days = month_daily_summaries(table, year, month);
      bool usable = days.has_value();
      std::vector<PeakDayFeatureRow> rows;
      if (usable) {
        // Feature rows for the whole month; missing history or missing
        // hour-neighbor data disqualifies the month.
        try {
          const auto all_rows = build_peak_day_rows(table, month);
          for (const auto& r : all_rows)
            if (r.date.year == year) rows.push_back(r);
          if (rows.size() != days->size()) usable = false;
          if (usable) {
            // Probe the peak-hour rows at both month edges now so missing
            // neighbor data fails the whole month up front.
            build_peak_hour_rows(table, days->front().date);
            build_peak_hour_rows(table, days->back().date);
          }
        } catch (const Error&) {
          usable = false;
        }
      }
      if (!usable) {
        log::warn("backtest: skipping incomplete month " + std::to_string(year) + "-" +
                  std::to_string(month));
        report.outcomes.push_back(out);
        continue;
      }

      std::vector<double> daily_max(days->size());
      for (std::size_t i = 0; i < days->size(); ++i) daily_max[i] = (*days)[i].max_actual;
      const std::vector<int> direct = label_direct(daily_max);
      const std::size_t peak_idx = static_cast<std::size_t>(
          std::find(direct.begin(), direct.end(), 1) - direct.begin());
      out.peak_day = (*days)[peak_idx].date;
      out.peak_hour = (*days)[peak_idx].peak_hour_actual;
      out.counted = true;

      const ModelBundle& day_model = models.get(day_task, month);
      const ModelBundle& hour_model = models.get("peak_hour", month);

      for (const auto& row : rows) {
        const PeakDayPrediction pred = predict_peak_day(day_model, row, config.kind, config.threshold);
        if (!pred.dispatch) continue;
        ++out.cycles;
        const auto hour_rows = build_peak_hour_rows(table, row.date);
        const PeakHourPrediction hours = predict_peak_hours(hour_model, hour_rows);
        if (row.date == out.peak_day) {
          out.day_captured = true;
          out.hour_captured = contains_hour(hours.selected_hours, out.peak_hour);
          const PeakHourPrediction naive = naive_peak_hours(hour_rows);
          out.naive_hit_on_captured = contains_hour(naive.selected_hours, out.peak_hour);
        }
      }

      // Dispatch-independent recall inputs on the actual peak day.
      {
        const auto hour_rows = build_peak_hour_rows(table, out.peak_day);
        out.model_hit = contains_hour(predict_peak_hours(hour_model, hour_rows).selected_hours,
                                      out.peak_hour);
        out.naive_hit = contains_hour(naive_peak_hours(hour_rows).selected_hours, out.peak_hour);
      }

      MonthRecall& mr = report.monthly[static_cast<std::size_t>(month - 1)];
      (out.model_hit ? mr.tp_model : mr.fn_model) += 1;
      (out.naive_hit ? mr.tp_naive : mr.fn_naive) += 1;

      ys.cycles += out.cycles;
      ys.months_counted += 1;
      ys.peak_days_captured += out.day_captured ? 1 : 0;
      ys.peak_hours_captured += out.hour_captured ? 1 : 0;
      ys.naive_hours_on_captured += out.naive_hit_on_captured ? 1 : 0;
      report.outcomes.push_back(out);
    }
    ys.cycle_guard_exceeded = ys.cycles > config.max_cycles_per_year;
    if (ys.cycle_guard_exceeded)
      log::warn("backtest: year " + std::to_string(year) + " used " + std::to_string(ys.cycles) +
                " cycles, above the " + std::to_string(config.max_cycles_per_year) + "/year guard");
    report.years.push_back(ys);
  }

  double c = 0, d = 0, h = 0;
  for (const auto& ys : report.years) {
    c += ys.cycles;
    d += ys.peak_days_captured;
    h += ys.peak_hours_captured;
  }
  const double ny = static_cast<double>(report.years.size());
  report.avg_cycles = c / ny;
  report.avg_peak_days = d / ny;
  report.avg_peak_hours = h / ny;
  return report;
}

std::vector<RecallDelta> compare_models(const BacktestReport& a, const BacktestReport& b) {
  if (a.outcomes.size() != b.outcomes.size())
    raise(errc::day_mismatch, "compare_models: reports cover different months");
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    const auto& oa = a.outcomes[i];
    const auto& ob = b.outcomes[i];
    if (oa.year != ob.year || oa.month != ob.month || oa.counted != ob.counted)
      raise(errc::day_mismatch, "compare_models: reports cover different months");
  }
  std::vector<RecallDelta> deltas;
  for (int m = 1; m <= 12; ++m) {
    const MonthRecall& ra = a.monthly[static_cast<std::size_t>(m - 1)];
    const MonthRecall& rb = b.monthly[static_cast<std::size_t>(m - 1)];
    if (ra.tp_model + ra.fn_model == 0) continue;  // month absent from both
    RecallDelta d;
    d.month = m;
    d.recall_a = recall(ra.tp_model, ra.fn_model);
    d.recall_b = recall(rb.tp_model, rb.fn_model);
    d.delta = d.recall_a - d.recall_b;
    deltas.push_back(d);
  }
  return deltas;
}

void write_report_text(std::ostream& out, const BacktestReport& report) {
  char buf[160];
  out << "Dispatch policy: kind=" << to_string(report.config.kind)
      << " threshold=" << format_double(report.config.threshold) << "\n\n";
  out << "Annual performance\n";
  out << "  Year    Cycles    Peak days captured    Peak hours captured\n";
  for (const auto& y : report.years) {
    std::snprintf(buf, sizeof buf, "  %-8d%-10d%-22d%d%s\n", y.year, y.cycles, y.peak_days_captured,
                  y.peak_hours_captured, y.cycle_guard_exceeded ? "   [cycle guard exceeded]" : "");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  %-8s%-10.1f%-22.1f%.1f\n", "Average", report.avg_cycles,
                report.avg_peak_days, report.avg_peak_hours);
  out << buf;

  out << "\nPer-month peak-hour recall (model vs naive)\n";
  out << "  Month   Model     Naive\n";
  for (const auto& mr : report.monthly) {
    if (mr.tp_model + mr.fn_model == 0) continue;
    std::snprintf(buf, sizeof buf, "  %-8d%-10.3f%.3f\n", mr.month, recall(mr.tp_model, mr.fn_model),
                  recall(mr.tp_naive, mr.fn_naive));
    out << buf;
  }
}

std::string report_to_csv(const BacktestReport& report) {
  std::ostringstream out;
  out << "year,cycles,months_counted,peak_days_captured,peak_hours_captured,cycle_guard_exceeded\n";
  for (const auto& y : report.years)
    out << y.year << ',' << y.cycles << ',' << y.months_counted << ',' << y.peak_days_captured << ','
        << y.peak_hours_captured << ',' << (y.cycle_guard_exceeded ? 1 : 0) << '\n';
  return out.str();
}

std::string monthly_recall_to_csv(const BacktestReport& report) {
  std::ostringstream out;
  out << "month,tp_model,fn_model,recall_model,tp_naive,fn_naive,recall_naive\n";
  for (const auto& mr : report.monthly) {
    if (mr.tp_model + mr.fn_model == 0) continue;
    out << mr.month << ',' << mr.tp_model << ',' << mr.fn_model << ','
        << format_double(recall(mr.tp_model, mr.fn_model)) << ',' << mr.tp_naive << ',' << mr.fn_naive
        << ',' << format_double(recall(mr.tp_naive, mr.fn_naive)) << '\n';
  }
  return out.str();
}

std::string recall_deltas_to_csv(std::span<const RecallDelta> deltas) {
  std::ostringstream out;
  out << "month,recall_a,recall_b,delta\n";
  for (const auto& d : deltas)
    out << d.month << ',' << format_double(d.recall_a) << ',' << format_double(d.recall_b) << ','
        << format_double(d.delta) << '\n';
  return out.str();
}

}  // namespace peakcast
