#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peakcast/time.hpp"

namespace peakcast {

struct LoadPoint {
  Timestamp ts;  // exact hour
  double actual_mwh = 0;
  double forecast_mwh = 0;
};

struct RawWeatherObservation {
  Timestamp ts;  // minute resolution
  double temp_c = 0;
  double dewpoint_c = 0;
  std::optional<double> wind_mps;
  std::optional<double> visibility_km;
};

// Weather snapped to an exact hour by align_to_hours.
struct HourlyWeatherPoint {
  Timestamp hour;
  double temp_c = 0;
  double dewpoint_c = 0;
};

// One aligned hour of the unified table.
struct HourlyRecord {
  Timestamp ts;
  double actual_load = 0;    // MWh
  double forecast_load = 0;  // day-ahead MWh
  double temp = 0;           // degC
  double dew_point = 0;      // degC
  double humidity = 0;       // percent, (0, 100]
  int weekday_index = 0;     // 1 = weekend
  int month = 0;
  int day_of_month = 0;
  int hour = 0;
};

HourlyRecord make_hourly_record(Timestamp ts, double actual, double forecast, double temp,
                                double dew_point, double humidity);

// Relative humidity in percent from dry-bulb and dew point temperature (degC).
// Clamps to 100 when the dew point sits up to 0.5 degC above the temperature
// (sensor noise); larger excesses and out-of-domain inputs raise domain_error.
double compute_humidity(double temp_c, double dewpoint_c);

// Parses `timestamp,actual_load_mwh,forecast_load_mwh`. Rows are sorted
// chronologically; duplicated timestamps keep the last occurrence and emit a
// warning. Malformed rows raise malformed_row with the line number.
std::vector<LoadPoint> parse_load_csv(const std::string& path);

// Parses `timestamp,temp_c,dewpoint_c,wind_mps,visibility_km` (last two may be
// empty). Observations whose dew point exceeds temp by more than 0.5 degC are
// rejected with a warning.
std::vector<RawWeatherObservation> parse_weather_csv(const std::string& path);

// Snaps observations to exact hours over [floor(first), ceil(last)]. Each hour
// takes the observation with minimum absolute distance; equidistant ties go to
// the earlier observation. Hours with nothing within 90 minutes are omitted.
std::vector<HourlyWeatherPoint> align_to_hours(std::span<const RawWeatherObservation> obs);

// Inner join of load and hourly weather. Weather holes spanning at most 3
// consecutive hours are filled by linear interpolation of temp and dew point
// (humidity recomputed); longer holes drop the affected hours with a logged
// count. Raises disjoint_ranges when the time ranges do not overlap.
std::vector<HourlyRecord> merge_datasets(std::span<const LoadPoint> load,
                                         std::span<const HourlyWeatherPoint> weather);

// Unified table CSV, header
// `timestamp,actual_load_mwh,forecast_load_mwh,temp_c,dewpoint_c,humidity_pct,weekday_index`.
// Doubles are written in shortest round-trip form, so write/read is lossless.
std::string unified_to_csv(std::span<const HourlyRecord> records);
std::vector<HourlyRecord> unified_from_csv(const std::string& text);
void write_unified_csv(const std::string& path, std::span<const HourlyRecord> records);
std::vector<HourlyRecord> read_unified_csv(const std::string& path);

}  // namespace peakcast
