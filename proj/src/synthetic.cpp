#include "peakcast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "peakcast/csv.hpp"
#include "peakcast/rng.hpp"

namespace peakcast {

namespace {

constexpr double kTau = 6.28318530717958647692;

// Fraction-of-year phase from the day-of-year.
double year_phase(const CivilDate& d) {
  const int doy = static_cast<int>(days_from_civil(d.year, d.month, d.day) -
                                   days_from_civil(d.year, 1, 1)) +
                  1;
  return static_cast<double>(doy) / 365.25;
}

const double kBaseShape[24] = {0.75, 0.72, 0.70, 0.69, 0.70, 0.74, 0.82, 0.90,
                               0.95, 0.96, 0.95, 0.94, 0.93, 0.92, 0.91, 0.91,
                               0.93, 0.97, 1.00, 0.99, 0.96, 0.92, 0.86, 0.80};

double gaussian_bump(double h, double center, double width) {
  const double d = h - center;
  return std::exp(-d * d / (2.0 * width * width));
}

struct DailySeries {
  // AR(1) per day, linearly interpolated to hours.
  std::vector<double> values;
  std::int64_t first_day = 0;

  double at_hour(std::int64_t hour) const {
    const std::int64_t day = hour >= 0 ? hour / 24 : (hour - 23) / 24;
    const double frac = static_cast<double>(hour - day * 24) / 24.0;
    const std::size_t i = static_cast<std::size_t>(day - first_day);
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
  }
};

DailySeries make_ar1_daily(std::int64_t first_day, std::int64_t n_days, double rho, double sigma,
                           Rng& rng) {
  DailySeries s;
  s.first_day = first_day;
  s.values.resize(static_cast<std::size_t>(n_days) + 1);
  const double stationary = sigma / std::sqrt(1.0 - rho * rho);
  s.values[0] = rng.normal(0.0, stationary);
  for (std::size_t i = 1; i < s.values.size(); ++i)
    s.values[i] = rho * s.values[i - 1] + rng.normal(0.0, sigma);
  return s;
}

struct LoadParts {
  double heating_coeff = 95.0;
  double cooling_coeff = 80.0;
  double heating_base_temp = 16.0;
  double cooling_base_temp = 18.0;
  double heating_exp = 1.38;
  double cooling_exp = 1.48;

  double heating(double t_eff) const {
    return heating_coeff * std::pow(std::max(0.0, heating_base_temp - t_eff), heating_exp);
  }
  double cooling(double t_eff) const {
    return cooling_coeff * std::pow(std::max(0.0, t_eff - cooling_base_temp), cooling_exp);
  }
};

}  // namespace

std::vector<HourlyRecord> generate_synthetic_table(const SyntheticConfig& cfg) {
  const std::int64_t first_day = days_from_civil(cfg.start_year, 1, 1) - cfg.buffer_days;
  const std::int64_t last_day = days_from_civil(cfg.end_year, 12, 31) + cfg.buffer_days;
  const std::int64_t n_days = last_day - first_day + 1;
  const std::int64_t first_hour = first_day * 24;
  const std::int64_t n_hours = n_days * 24;

  Rng rng_synoptic(derive_seed(cfg.seed, "synoptic"));
  Rng rng_dep(derive_seed(cfg.seed, "dewpoint_depression"));
  Rng rng_temp_noise(derive_seed(cfg.seed, "temp_noise"));
  Rng rng_fcst_temp(derive_seed(cfg.seed, "forecast_temp_error"));
  Rng rng_load_noise(derive_seed(cfg.seed, "load_noise"));
  Rng rng_fcst_noise(derive_seed(cfg.seed, "forecast_load_noise"));

  const DailySeries synoptic = make_ar1_daily(first_day, n_days, 0.5, 3.25, rng_synoptic);
  const DailySeries depression = make_ar1_daily(first_day, n_days, 0.6, 2.0, rng_dep);

  // Temperatures first: the load responds to a trailing mean.
  std::vector<double> temp(static_cast<std::size_t>(n_hours));
  std::vector<double> dew(static_cast<std::size_t>(n_hours));
  std::vector<double> fcst_temp(static_cast<std::size_t>(n_hours));
  double fcst_err = 0.0;
  for (std::int64_t k = 0; k < n_hours; ++k) {
    const std::int64_t hour = first_hour + k;
    const Timestamp ts = Timestamp::from_hours(hour);
    const double phase = year_phase(ts.date());
    const int h = ts.hour();

    const double season = 14.0 - 11.0 * std::cos(kTau * (phase - 15.0 / 365.25));
    const double diurnal = -4.2 * std::cos(kTau * (h - 15) / 24.0);
    const double t = season + diurnal + synoptic.at_hour(hour) + rng_temp_noise.normal(0.0, 0.6);
    temp[static_cast<std::size_t>(k)] = t;

    const double dep = std::clamp(6.5 + depression.at_hour(hour), 0.3, 18.0);
    dew[static_cast<std::size_t>(k)] = t - dep;

    fcst_err = 0.82 * fcst_err + rng_fcst_temp.normal(0.0, 0.63);
    fcst_temp[static_cast<std::size_t>(k)] = t + fcst_err;
  }

  const LoadParts parts;
  std::vector<HourlyRecord> out;
  out.reserve(static_cast<std::size_t>(n_hours));
  double noise_actual = 0.0, noise_fcst = 0.0;
  for (std::int64_t k = 0; k < n_hours; ++k) {
    const std::int64_t hour = first_hour + k;
    const Timestamp ts = Timestamp::from_hours(hour);
    const int h = ts.hour();
    const bool weekend = ts.is_weekend();

    double base = cfg.base_mw * kBaseShape[h];
    if (weekend) base *= 0.93;

    const auto t_eff = [&](const std::vector<double>& series) {
      const std::size_t i = static_cast<std::size_t>(k);
      const double a = series[i];
      const double b = i >= 1 ? series[i - 1] : a;
      const double c = i >= 2 ? series[i - 2] : b;
      return (a + b + c) / 3.0;
    };

    // Peak sharpening: heating demand spikes at the morning ramp and again
    // around dusk, cooling in the late afternoon. The day-ahead forecast only
    // sees half of the sharpening and runs on its own noisy temperature, so
    // its hourly ranking blurs exactly where the modes compete.
    const double te_actual = t_eff(temp);
    const double morning = gaussian_bump(h, 7.7, 1.5);
    const double dusk = gaussian_bump(h, 18.2, 1.7);
    const double evening = gaussian_bump(h, 17.4, 1.6);
    const double heat = parts.heating(te_actual) * (1.0 + 0.20 * morning + 0.16 * dusk);
    const double cool = parts.cooling(te_actual) * (1.0 + 0.25 * evening);

    const double te_fcst = t_eff(fcst_temp);
    const double heat_f = parts.heating(te_fcst) *
                          (1.0 + 0.10 * gaussian_bump(h, 7.7, 1.5) + 0.08 * dusk);
    const double cool_f = parts.cooling(te_fcst) * (1.0 + 0.12 * gaussian_bump(h, 17.3, 1.6));

    noise_actual = 0.85 * noise_actual + rng_load_noise.normal(0.0, 35.0);
    noise_fcst = 0.85 * noise_fcst + rng_fcst_noise.normal(0.0, 32.0);

    const double actual = std::max(1.0, base + heat + cool + noise_actual);
    const double forecast = std::max(1.0, base + heat_f + cool_f + noise_fcst);

    const double t = temp[static_cast<std::size_t>(k)];
    const double d = dew[static_cast<std::size_t>(k)];
    out.push_back(make_hourly_record(ts, actual, forecast, t, d, compute_humidity(t, d)));
  }
  return out;
}

void write_synthetic_raw_csvs(const SyntheticConfig& cfg, const std::string& load_path,
                              const std::string& weather_path) {
  const std::vector<HourlyRecord> table = generate_synthetic_table(cfg);
  Rng rng_offset(derive_seed(cfg.seed, "observation_minutes"));

  std::ostringstream load;
  load << "timestamp,actual_load_mwh,forecast_load_mwh\n";
  std::ostringstream weather;
  weather << "timestamp,temp_c,dewpoint_c,wind_mps,visibility_km\n";
  for (const auto& r : table) {
    load << r.ts.to_string() << ',' << format_double(r.actual_load) << ','
         << format_double(r.forecast_load) << '\n';
    // Observations land a few minutes off the hour, like real station data.
    const int offset = static_cast<int>(rng_offset.below(18));
    weather << (r.ts + offset).to_string() << ',' << format_double(r.temp) << ','
            << format_double(r.dew_point) << ',' << format_double(3.0) << ",\n";
  }
  write_file(load_path, load.str());
  write_file(weather_path, weather.str());
}

}  // namespace peakcast
