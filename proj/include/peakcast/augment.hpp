#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "peakcast/mlp.hpp"
#include "peakcast/table.hpp"

namespace peakcast {

// Hourly load synthesis from weather: two MLPs (actual load, day-ahead
// forecast load) trained on the predictors hour, T(t), T(t-1..t-3),
// humidity(t), day-of-week and the weekend index.
struct AugmentConfig {
  CivilDate train_begin, train_end;  // inclusive days
  CivilDate gen_begin, gen_end;      // inclusive days
  MlpConfig mlp{.hidden = {20, 20}, .epochs = 60, .learning_rate = 0.02, .batch_size = 32};
  // Optional realism: add residuals resampled by (month, hour). Off by
  // default; synthesis is then a deterministic function of weather + model.
  bool residual_bootstrap = false;
  std::uint64_t seed = 0;
};

struct Augmenter {
  AugmentConfig config;
  MlpModel actual_model;
  MlpModel forecast_model;
  double train_rmse_actual = 0.0;
  double train_rmse_forecast = 0.0;
  double train_mape_actual = 0.0;
  // Training residuals grouped by (month, hour), for the bootstrap option.
  std::map<std::pair<int, int>, std::vector<double>> residuals_actual;
  std::map<std::pair<int, int>, std::vector<double>> residuals_forecast;
};

inline constexpr int kAugmentPredictors = 8;  // hour, T, T-1, T-2, T-3, humidity, dow, weekend

// Builds the predictor vector for one hour; neighbors come from the weather
// spans handed in by the caller.
std::array<double, kAugmentPredictors> augment_features(Timestamp ts, double t0, double t1, double t2,
                                                        double t3, double humidity);

Augmenter fit_augmenter(const HourlyTable& table, const AugmentConfig& cfg);

// Synthesizes one record per hour of the generation range from the weather
// sequence (exact hours; holes up to 3 hours are linearly interpolated,
// longer ones raise coverage_gap). Loads are floored at 1 MWh with a warning.
std::vector<HourlyRecord> synthesize(const Augmenter& aug, std::span<const HourlyWeatherPoint> weather);

}  // namespace peakcast
