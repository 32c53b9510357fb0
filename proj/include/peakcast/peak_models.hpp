#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "peakcast/features.hpp"
#include "peakcast/model_io.hpp"

namespace peakcast {

enum class PeakDayKind { direct, indirect };

std::string to_string(PeakDayKind k);
PeakDayKind peak_day_kind_from_string(const std::string& s);
std::string peak_day_task(PeakDayKind k);  // bundle task name

struct PeakDayPrediction {
  CivilDate date;
  PeakDayKind kind = PeakDayKind::direct;
  std::optional<double> p_date;  // indirect only: up-to-date peak probability
  std::optional<double> p_mul;   // indirect only: Eq. 3 multiplier
  double p_month = 0.0;
  bool dispatch = false;
};

struct PeakHourPrediction {
  CivilDate date;
  std::array<double, 24> probabilities{};
  std::array<int, 2> selected_hours{};  // two highest, earlier hour on ties
};

// min[1, (n+6)/N]; equals 1 exactly when n >= N-6. The ratio is formed from
// the integers directly, so the value is the correctly rounded rational.
double peak_day_multiplier(int day_of_month, int month_length);

// Direct: p_month is the classifier output for the monthly-peak label.
// Indirect: p_date is the up-to-date-peak output and p_month = p_date * p_mul.
// The bundle must be a peak-day model of the matching kind and month.
PeakDayPrediction predict_peak_day(const ModelBundle& model, const PeakDayFeatureRow& row,
                                   PeakDayKind kind, double threshold);

// Inclusive comparison: dispatch fires at p_month == threshold.
bool decide_dispatch(double p_month, double threshold);

// Per-hour peak probabilities and the top-2 hours for one operating day.
PeakHourPrediction predict_peak_hours(const ModelBundle& model,
                                      std::span<const PeakHourFeatureRow> rows);

// Baseline: the two hours with the highest day-ahead forecast load. The
// reported probabilities are the forecast loads normalized to sum 1
// (diagnostic only).
PeakHourPrediction naive_peak_hours(std::span<const PeakHourFeatureRow> rows);

// Indices of the two largest values, earlier index on ties.
std::array<int, 2> top2_hours(std::span<const double> values);

}  // namespace peakcast
