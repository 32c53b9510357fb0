#include "peakcast/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"
#include "peakcast/rng.hpp"

namespace peakcast {

namespace {

constexpr int kMaxWeatherGapHours = 3;

std::array<double, kAugmentPredictors> features_at(Timestamp ts, double t0, double t1, double t2,
                                                   double t3, double humidity) {
  return {static_cast<double>(ts.hour()),
          t0,
          t1,
          t2,
          t3,
          humidity,
          static_cast<double>(ts.weekday()),
          ts.is_weekend() ? 1.0 : 0.0};
}

// Hourly weather over [begin, end] with small holes interpolated.
struct WeatherGrid {
  std::int64_t first_hour = 0;
  std::vector<double> temp, dew;
};

WeatherGrid build_grid(std::span<const HourlyWeatherPoint> weather, Timestamp begin, Timestamp end) {
  if (weather.empty()) raise(errc::coverage_gap, "synthesize: empty weather input");
  const std::int64_t lo = begin.hours(), hi = end.hours();
  if (weather.front().hour.hours() > lo || weather.back().hour.hours() < hi)
    raise(errc::coverage_gap, "synthesize: weather does not cover the generation range");

  WeatherGrid grid;
  grid.first_hour = lo;
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  grid.temp.assign(n, std::numeric_limits<double>::quiet_NaN());
  grid.dew.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (const auto& w : weather) {
    const std::int64_t h = w.hour.hours();
    if (h < lo || h > hi) continue;
    grid.temp[static_cast<std::size_t>(h - lo)] = w.temp_c;
    grid.dew[static_cast<std::size_t>(h - lo)] = w.dewpoint_c;
  }

  // Fill holes of at most kMaxWeatherGapHours by linear interpolation.
  std::size_t i = 0;
  while (i < n) {
    if (!std::isnan(grid.temp[i])) {
      ++i;
      continue;
    }
    const std::size_t run_begin = i;
    while (i < n && std::isnan(grid.temp[i])) ++i;
    const std::size_t run_len = i - run_begin;
    if (run_begin == 0 || i == n || run_len > kMaxWeatherGapHours)
      raise(errc::coverage_gap, "synthesize: weather gap of " + std::to_string(run_len) +
                                    " hours exceeds the " + std::to_string(kMaxWeatherGapHours) +
                                    "-hour limit");
    const double t0 = grid.temp[run_begin - 1], t1 = grid.temp[i];
    const double d0 = grid.dew[run_begin - 1], d1 = grid.dew[i];
    for (std::size_t k = 0; k < run_len; ++k) {
      const double f = static_cast<double>(k + 1) / static_cast<double>(run_len + 1);
      grid.temp[run_begin + k] = t0 + f * (t1 - t0);
      grid.dew[run_begin + k] = d0 + f * (d1 - d0);
    }
  }
  return grid;
}

}  // namespace

std::array<double, kAugmentPredictors> augment_features(Timestamp ts, double t0, double t1, double t2,
                                                        double t3, double humidity) {
  return features_at(ts, t0, t1, t2, t3, humidity);
}

Augmenter fit_augmenter(const HourlyTable& table, const AugmentConfig& cfg) {
  if (cfg.train_end < cfg.train_begin)
    raise(errc::config_invalid, "fit_augmenter: empty training range");

  // One row per training hour; the t-1..t-3 temperatures must exist, so the
  // range effectively starts 3 hours into the table.
  std::vector<std::array<double, kAugmentPredictors>> rows;
  std::vector<Timestamp> row_ts;
  std::vector<double> y_actual, y_forecast;
  const std::int64_t lo = Timestamp::from_civil(cfg.train_begin).hours();
  const std::int64_t hi = Timestamp::from_civil(cfg.train_end, 23).hours();
  for (std::int64_t h = lo; h <= hi; ++h) {
    const HourlyRecord* r = table.at_hour(h);
    const HourlyRecord* m1 = table.at_hour(h - 1);
    const HourlyRecord* m2 = table.at_hour(h - 2);
    const HourlyRecord* m3 = table.at_hour(h - 3);
    if (!r) raise(errc::coverage_gap, "fit_augmenter: training range not fully covered at " +
                                          Timestamp::from_hours(h).to_string());
    if (!m1 || !m2 || !m3) continue;  // first hours of the table
    rows.push_back(features_at(r->ts, r->temp, m1->temp, m2->temp, m3->temp, r->humidity));
    row_ts.push_back(r->ts);
    y_actual.push_back(r->actual_load);
    y_forecast.push_back(r->forecast_load);
  }
  if (rows.empty()) raise(errc::empty_data, "fit_augmenter: no usable training rows");

  const Matrix X = matrix_from_rows(rows);
  Augmenter aug;
  aug.config = cfg;
  MlpConfig mc = cfg.mlp;
  mc.seed = derive_seed(cfg.seed, "augment_actual");
  aug.actual_model = fit_mlp(X, y_actual, mc);
  mc.seed = derive_seed(cfg.seed, "augment_forecast");
  aug.forecast_model = fit_mlp(X, y_forecast, mc);
  aug.train_rmse_actual = aug.actual_model.train_rmse;
  aug.train_rmse_forecast = aug.forecast_model.train_rmse;

  double ape = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double pred_a = predict_mlp(aug.actual_model, rows[i]);
    ape += std::abs(pred_a - y_actual[i]) / y_actual[i];
    const auto key = std::make_pair(row_ts[i].date().month, row_ts[i].hour());
    aug.residuals_actual[key].push_back(y_actual[i] - pred_a);
    aug.residuals_forecast[key].push_back(y_forecast[i] - predict_mlp(aug.forecast_model, rows[i]));
  }
  aug.train_mape_actual = ape / static_cast<double>(rows.size());

  log::info("fit_augmenter: train RMSE actual " + std::to_string(aug.train_rmse_actual) +
            " MWh, forecast " + std::to_string(aug.train_rmse_forecast) + " MWh, MAPE " +
            std::to_string(100.0 * aug.train_mape_actual) + "%");
  return aug;
}

std::vector<HourlyRecord> synthesize(const Augmenter& aug, std::span<const HourlyWeatherPoint> weather) {
  const Timestamp begin = Timestamp::from_civil(aug.config.gen_begin);
  const Timestamp end = Timestamp::from_civil(aug.config.gen_end, 23);
  if (end < begin) raise(errc::config_invalid, "synthesize: empty generation range");
  const WeatherGrid grid = build_grid(weather, begin, end);

  Rng rng(derive_seed(aug.config.seed, "residual_bootstrap"));
  std::vector<HourlyRecord> out;
  out.reserve(grid.temp.size());
  long floored = 0;
  for (std::size_t i = 0; i < grid.temp.size(); ++i) {
    const Timestamp ts = Timestamp::from_hours(grid.first_hour + static_cast<std::int64_t>(i));
    const double t0 = grid.temp[i];
    const double t1 = grid.temp[i >= 1 ? i - 1 : i];
    const double t2 = grid.temp[i >= 2 ? i - 2 : i];
    const double t3 = grid.temp[i >= 3 ? i - 3 : i];
    const double dew_pt = std::min(grid.dew[i], t0 + 0.5);
    const double humidity = compute_humidity(t0, dew_pt);
    const auto x = features_at(ts, t0, t1, t2, t3, humidity);
    double actual = predict_mlp(aug.actual_model, x);
    double forecast = predict_mlp(aug.forecast_model, x);

    if (aug.config.residual_bootstrap) {
      const auto key = std::make_pair(ts.date().month, ts.hour());
      const auto ita = aug.residuals_actual.find(key);
      if (ita != aug.residuals_actual.end() && !ita->second.empty())
        actual += ita->second[static_cast<std::size_t>(rng.below(ita->second.size()))];
      const auto itf = aug.residuals_forecast.find(key);
      if (itf != aug.residuals_forecast.end() && !itf->second.empty())
        forecast += itf->second[static_cast<std::size_t>(rng.below(itf->second.size()))];
    }

    if (actual < 1.0 || forecast < 1.0) {
      ++floored;
      actual = std::max(actual, 1.0);
      forecast = std::max(forecast, 1.0);
    }
    out.push_back(make_hourly_record(ts, actual, forecast, t0, dew_pt, humidity));
  }
  if (floored > 0)
    log::warn("synthesize: floored " + std::to_string(floored) + " hours at 1 MWh");
  return out;
}

}  // namespace peakcast
