#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "peakcast/peak_models.hpp"

namespace peakcast {

struct BacktestConfig {
  std::vector<int> years{2001, 2006, 2008, 2011, 2019, 2020};
  double threshold = 0.03;
  PeakDayKind kind = PeakDayKind::indirect;
  int max_cycles_per_year = 100;  // reported and flagged, not enforced
  int discharge_hours = 2;
};

// One (year, month) of the replay.
struct MonthOutcome {
  int year = 0;
  int month = 0;
  bool counted = false;  // complete month with usable feature rows
  CivilDate peak_day;    // actual monthly peak day (earliest tie)
  int peak_hour = 0;     // actual peak hour of that day
  bool day_captured = false;   // dispatch fired on the peak day
  bool hour_captured = false;  // day captured and peak hour in the selected 2
  // Dispatch-independent top-2 hits on the actual peak day (recall inputs).
  bool model_hit = false;
  bool naive_hit = false;
  bool naive_hit_on_captured = false;  // naive hit, counted only when day_captured
  int cycles = 0;                      // dispatch days in this month
};

struct YearSummary {
  int year = 0;
  int cycles = 0;
  int months_counted = 0;
  int peak_days_captured = 0;
  int peak_hours_captured = 0;
  int naive_hours_on_captured = 0;
  bool cycle_guard_exceeded = false;
};

struct MonthRecall {
  int month = 0;
  int tp_model = 0, fn_model = 0;
  int tp_naive = 0, fn_naive = 0;
};

struct BacktestReport {
  BacktestConfig config;
  std::vector<MonthOutcome> outcomes;  // ordered by (year, month)
  std::vector<YearSummary> years;
  std::array<MonthRecall, 12> monthly{};
  double avg_cycles = 0.0;
  double avg_peak_days = 0.0;
  double avg_peak_hours = 0.0;
};

// TP / (TP + FN); raises zero_denominator when both are zero.
double recall(int tp, int fn);

// Replays the dispatch policy day by day over the testing years: dispatch
// when p_month >= threshold, discharge during the top-2 predicted hours. A
// monthly peak day counts as captured when dispatch fired on it; the peak
// hour additionally requires the actual peak hour among the selected two.
// Months without complete data are skipped with a warning and removed from
// the denominators. Raises train_test_overlap if any model was trained on a
// testing year.
BacktestReport run_backtest(const ModelSet& models, const HourlyTable& table,
                            const BacktestConfig& config);

struct RecallDelta {
  int month = 0;
  double recall_a = 0.0;
  double recall_b = 0.0;
  double delta = 0.0;  // a - b
};

// Per-month recall difference between two reports covering identical months;
// raises day_mismatch otherwise.
std::vector<RecallDelta> compare_models(const BacktestReport& a, const BacktestReport& b);

// Human-readable tables (annual performance + per-month recall).
void write_report_text(std::ostream& out, const BacktestReport& report);
// Machine outputs.
std::string report_to_csv(const BacktestReport& report);
std::string monthly_recall_to_csv(const BacktestReport& report);
std::string recall_deltas_to_csv(std::span<const RecallDelta> deltas);

}  // namespace peakcast
