#include "peakcast/peak_models.hpp"

#include "peakcast/errors.hpp"

namespace peakcast {

std::string to_string(PeakDayKind k) { return k == PeakDayKind::direct ? "direct" : "indirect"; }

PeakDayKind peak_day_kind_from_string(const std::string& s) {
  if (s == "direct") return PeakDayKind::direct;
  if (s == "indirect") return PeakDayKind::indirect;
  raise(errc::config_invalid, "unknown peak-day kind: " + s);
}

std::string peak_day_task(PeakDayKind k) {
  return k == PeakDayKind::direct ? "peak_day_direct" : "peak_day_indirect";
}

double peak_day_multiplier(int day_of_month, int month_length) {
  if (month_length < 28 || month_length > 31)
    raise(errc::index_out_of_range, "peak_day_multiplier: month length " + std::to_string(month_length));
  if (day_of_month < 1 || day_of_month > month_length)
    raise(errc::index_out_of_range, "peak_day_multiplier: day " + std::to_string(day_of_month));
  if (day_of_month + 6 >= month_length) return 1.0;
  return static_cast<double>(day_of_month + 6) / static_cast<double>(month_length);
}

bool decide_dispatch(double p_month, double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0)
    raise(errc::config_invalid, "dispatch threshold must be in (0, 1)");
  return p_month >= threshold;
}

PeakDayPrediction predict_peak_day(const ModelBundle& model, const PeakDayFeatureRow& row,
                                   PeakDayKind kind, double threshold) {
  if (model.task != peak_day_task(kind) || model.month != row.date.month)
    raise(errc::month_model_mismatch, "model " + model.task + "/m" + std::to_string(model.month) +
                                          " does not match " + peak_day_task(kind) + " for " +
                                          row.date.to_string());
  const auto features = row.features();
  const double p = model.classifier->predict_proba(features);

  PeakDayPrediction pred;
  pred.date = row.date;
  pred.kind = kind;
  if (kind == PeakDayKind::direct) {
    pred.p_month = p;
  } else {
    pred.p_date = p;
    pred.p_mul = peak_day_multiplier(row.n, row.month_length);
    pred.p_month = *pred.p_date * *pred.p_mul;
  }
  pred.dispatch = decide_dispatch(pred.p_month, threshold);
  return pred;
}

std::array<int, 2> top2_hours(std::span<const double> values) {
  int first = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(first)]) first = i;
  int second = first == 0 ? 1 : 0;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (i == first) continue;
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(second)]) second = i;
  }
  return {first, second};
}

namespace {

void check_day_rows(std::span<const PeakHourFeatureRow> rows) {
  if (rows.size() != 24) raise(errc::incomplete_day, "peak-hour prediction needs exactly 24 rows");
  for (int t = 0; t < 24; ++t) {
    if (rows[static_cast<std::size_t>(t)].hour != t || rows[static_cast<std::size_t>(t)].date != rows[0].date)
      raise(errc::incomplete_day, "peak-hour rows are not one complete day");
  }
}

}  // namespace

PeakHourPrediction predict_peak_hours(const ModelBundle& model,
                                      std::span<const PeakHourFeatureRow> rows) {
  check_day_rows(rows);
  if (model.task != "peak_hour" || model.month != rows[0].date.month)
    raise(errc::month_model_mismatch,
          "model " + model.task + "/m" + std::to_string(model.month) + " does not match peak_hour for " +
              rows[0].date.to_string());

  PeakHourPrediction pred;
  pred.date = rows[0].date;
  for (int t = 0; t < 24; ++t) {
    const auto features = rows[static_cast<std::size_t>(t)].features();
    pred.probabilities[static_cast<std::size_t>(t)] = model.classifier->predict_proba(features);
  }
  pred.selected_hours = top2_hours(pred.probabilities);
  return pred;
}

PeakHourPrediction naive_peak_hours(std::span<const PeakHourFeatureRow> rows) {
  check_day_rows(rows);
  PeakHourPrediction pred;
  pred.date = rows[0].date;
  double total = 0.0;
  for (int t = 0; t < 24; ++t) total += rows[static_cast<std::size_t>(t)].load_forecast;
  for (int t = 0; t < 24; ++t)
    pred.probabilities[static_cast<std::size_t>(t)] =
        total > 0.0 ? rows[static_cast<std::size_t>(t)].load_forecast / total : 0.0;
  pred.selected_hours = top2_hours(pred.probabilities);
  return pred;
}

}  // namespace peakcast
