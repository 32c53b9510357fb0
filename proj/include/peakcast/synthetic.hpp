#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peakcast/ingest.hpp"

namespace peakcast {

// Deterministic hourly weather + load generator for benchmarks and demos.
//
// Temperature is a seasonal mean plus a diurnal cycle, an AR(1) multi-day
// synoptic component and hourly noise. Load is a diurnal/weekend base profile
// plus heating and cooling responses to a 3-hour trailing mean temperature,
// with extreme-day peak sharpening in the morning (heating) and evening
// (cooling), plus AR(1) noise. The day-ahead forecast is built from the same
// structural model driven by a noisy forecast temperature, and only sees half
// of the peak sharpening, so forecast rank is informative but imperfect.
struct SyntheticConfig {
  int start_year = 2000;
  int end_year = 2020;       // inclusive
  std::uint64_t seed = 77;
  double base_mw = 6000.0;   // scale of the diurnal base profile
  int buffer_days = 4;       // extra days generated before/after the year span
};

// Hourly records covering [start_year - buffer, end_year + buffer].
std::vector<HourlyRecord> generate_synthetic_table(const SyntheticConfig& cfg);

// The same data as raw inputs for the ingest path: an hourly load CSV and a
// weather CSV with observations at irregular minutes.
void write_synthetic_raw_csvs(const SyntheticConfig& cfg, const std::string& load_path,
                              const std::string& weather_path);

}  // namespace peakcast
