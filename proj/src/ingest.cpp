#include "peakcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"

namespace peakcast {

namespace {

constexpr double kMagnusA = 17.625;
constexpr double kMagnusB = 243.04;  // degC
constexpr std::int64_t kAlignRadiusMin = 90;
constexpr int kMaxInterpGapHours = 3;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void expect_header(std::string_view line, std::string_view expected, const std::string& path) {
  if (trim(line) != expected)
    raise(errc::malformed_row,
          path + ": expected header '" + std::string(expected) + "', got '" + std::string(trim(line)) + "'");
}

}  // namespace

double compute_humidity(double temp_c, double dewpoint_c) {
  if (!std::isfinite(temp_c) || !std::isfinite(dewpoint_c))
    raise(errc::domain_error, "non-finite temperature input");
  if (temp_c <= -kMagnusB || dewpoint_c <= -kMagnusB)
    raise(errc::domain_error, "temperature at or below -243.04 degC");
  if (dewpoint_c > temp_c + 0.5)
    raise(errc::domain_error, "dew point exceeds temperature by more than 0.5 degC");
  const double h =
      std::exp(kMagnusA * dewpoint_c / (kMagnusB + dewpoint_c) - kMagnusA * temp_c / (kMagnusB + temp_c)) * 100.0;
  return std::min(h, 100.0);
}

HourlyRecord make_hourly_record(Timestamp ts, double actual, double forecast, double temp,
                                double dew_point, double humidity) {
  HourlyRecord r;
  r.ts = ts;
  r.actual_load = actual;
  r.forecast_load = forecast;
  r.temp = temp;
  r.dew_point = dew_point;
  r.humidity = humidity;
  r.weekday_index = ts.is_weekend() ? 1 : 0;
  const CivilDate d = ts.date();
  r.month = d.month;
  r.day_of_month = d.day;
  r.hour = ts.hour();
  return r;
}

std::vector<LoadPoint> parse_load_csv(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) raise(errc::malformed_row, path + ": empty file");
  expect_header(lines[0], "timestamp,actual_load_mwh,forecast_load_mwh", path);

  std::vector<LoadPoint> points;
  points.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      raise(errc::malformed_row, path + ": line " + std::to_string(line_no) + ": expected 3 columns, got " +
                                     std::to_string(fields.size()));
    LoadPoint p;
    p.ts = Timestamp::parse(trim(fields[0]));
    if (!p.ts.is_exact_hour())
      raise(errc::malformed_row, path + ": line " + std::to_string(line_no) + ": load timestamp not on the hour");
    p.actual_mwh = parse_double(fields[1], line_no, "actual_load_mwh");
    p.forecast_mwh = parse_double(fields[2], line_no, "forecast_load_mwh");
    if (p.actual_mwh <= 0 || p.forecast_mwh <= 0)
      raise(errc::malformed_row, path + ": line " + std::to_string(line_no) + ": load must be positive");
    points.push_back(p);
  }

  std::stable_sort(points.begin(), points.end(),
                   [](const LoadPoint& a, const LoadPoint& b) { return a.ts < b.ts; });
  // Duplicated hours keep the last occurrence in file order.
  std::vector<LoadPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (!out.empty() && out.back().ts == p.ts) {
      log::warn(path + ": duplicate hour " + p.ts.to_string() + ", keeping last occurrence");
      out.back() = p;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<RawWeatherObservation> parse_weather_csv(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) raise(errc::malformed_row, path + ": empty file");
  expect_header(lines[0], "timestamp,temp_c,dewpoint_c,wind_mps,visibility_km", path);

  std::vector<RawWeatherObservation> obs;
  obs.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    const auto fields = split_csv(line);
    if (fields.size() != 5)
      raise(errc::malformed_row, path + ": line " + std::to_string(line_no) + ": expected 5 columns, got " +
                                     std::to_string(fields.size()));
    RawWeatherObservation o;
    o.ts = Timestamp::parse(trim(fields[0]));
    o.temp_c = parse_double(fields[1], line_no, "temp_c");
    o.dewpoint_c = parse_double(fields[2], line_no, "dewpoint_c");
    o.wind_mps = parse_optional_double(fields[3], line_no, "wind_mps");
    o.visibility_km = parse_optional_double(fields[4], line_no, "visibility_km");
    if (o.dewpoint_c > o.temp_c + 0.5) {
      log::warn(path + ": line " + std::to_string(line_no) + ": dew point " + format_double(o.dewpoint_c) +
                " above temp " + format_double(o.temp_c) + " beyond tolerance, observation rejected");
      continue;
    }
    obs.push_back(o);
  }

  std::stable_sort(obs.begin(), obs.end(),
                   [](const RawWeatherObservation& a, const RawWeatherObservation& b) { return a.ts < b.ts; });
  std::vector<RawWeatherObservation> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    if (!out.empty() && out.back().ts == o.ts) {
      log::warn(path + ": duplicate observation at " + o.ts.to_string() + ", keeping last");
      out.back() = o;
    } else {
      out.push_back(o);
    }
  }
  return out;
}

std::vector<HourlyWeatherPoint> align_to_hours(std::span<const RawWeatherObservation> obs) {
  if (obs.empty()) raise(errc::empty_input, "align_to_hours: no observations");

  const std::int64_t first_hour = obs.front().ts.hours();  // floor
  const std::int64_t last_min = obs.back().ts.minutes();
  const std::int64_t last_hour = obs.back().ts.hours() + (last_min % 60 != 0 ? 1 : 0);  // ceil

  std::vector<HourlyWeatherPoint> out;
  out.reserve(static_cast<std::size_t>(last_hour - first_hour + 1));
  std::size_t cursor = 0;
  for (std::int64_t h = first_hour; h <= last_hour; ++h) {
    const std::int64_t target = h * 60;
    while (cursor + 1 < obs.size() && obs[cursor + 1].ts.minutes() <= target) ++cursor;
    // Candidates are the last observation at/before the hour and the first
    // after it; the nearer wins, ties toward the earlier one.
    std::size_t best = cursor;
    std::int64_t best_dist = std::llabs(obs[cursor].ts.minutes() - target);
    if (cursor + 1 < obs.size()) {
      const std::int64_t next_dist = std::llabs(obs[cursor + 1].ts.minutes() - target);
      if (next_dist < best_dist) {
        best = cursor + 1;
        best_dist = next_dist;
      }
    }
    if (best_dist > kAlignRadiusMin) continue;
    out.push_back({Timestamp::from_hours(h), obs[best].temp_c, obs[best].dewpoint_c});
  }
  return out;
}

std::vector<HourlyRecord> merge_datasets(std::span<const LoadPoint> load,
                                         std::span<const HourlyWeatherPoint> weather) {
  if (load.empty() || weather.empty()) raise(errc::empty_input, "merge_datasets: empty input");
  if (load.back().ts < weather.front().hour || weather.back().hour < load.front().ts)
    raise(errc::disjoint_ranges, "merge_datasets: load and weather time ranges do not overlap");

  std::unordered_map<std::int64_t, std::size_t> weather_by_hour;
  weather_by_hour.reserve(weather.size());
  for (std::size_t i = 0; i < weather.size(); ++i) weather_by_hour.emplace(weather[i].hour.hours(), i);

  std::vector<HourlyRecord> out;
  out.reserve(load.size());
  std::size_t dropped = 0;

  for (const auto& lp : load) {
    const std::int64_t h = lp.ts.hours();
    if (lp.ts < weather.front().hour || weather.back().hour < lp.ts) {
      ++dropped;
      continue;
    }
    double temp, dew;
    if (auto it = weather_by_hour.find(h); it != weather_by_hour.end()) {
      temp = weather[it->second].temp_c;
      dew = weather[it->second].dewpoint_c;
    } else {
      // Hole in the aligned weather grid: interpolate across runs of at most
      // kMaxInterpGapHours missing hours, otherwise drop the hour.
      std::int64_t prev = h - 1, next = h + 1;
      while (next - prev - 1 <= kMaxInterpGapHours && !weather_by_hour.count(prev)) --prev;
      while (next - prev - 1 <= kMaxInterpGapHours && !weather_by_hour.count(next)) ++next;
      const auto pit = weather_by_hour.find(prev);
      const auto nit = weather_by_hour.find(next);
      if (next - prev - 1 > kMaxInterpGapHours || pit == weather_by_hour.end() ||
          nit == weather_by_hour.end()) {
        ++dropped;
        continue;
      }
      const double f = static_cast<double>(h - prev) / static_cast<double>(next - prev);
      const auto& a = weather[pit->second];
      const auto& b = weather[nit->second];
      temp = a.temp_c + f * (b.temp_c - a.temp_c);
      dew = a.dewpoint_c + f * (b.dewpoint_c - a.dewpoint_c);
    }
    out.push_back(make_hourly_record(lp.ts, lp.actual_mwh, lp.forecast_mwh, temp, dew,
                                     compute_humidity(temp, dew)));
  }

  if (dropped > 0)
    log::warn("merge_datasets: dropped " + std::to_string(dropped) + " hours without usable weather");
  if (out.empty()) raise(errc::disjoint_ranges, "merge_datasets: no overlapping hours survived");
  return out;
}

std::string unified_to_csv(std::span<const HourlyRecord> records) {
  std::ostringstream out;
  out << "timestamp,actual_load_mwh,forecast_load_mwh,temp_c,dewpoint_c,humidity_pct,weekday_index\n";
  for (const auto& r : records) {
    out << r.ts.to_string() << ',' << format_double(r.actual_load) << ',' << format_double(r.forecast_load)
        << ',' << format_double(r.temp) << ',' << format_double(r.dew_point) << ','
        << format_double(r.humidity) << ',' << r.weekday_index << '\n';
  }
  return out.str();
}

std::vector<HourlyRecord> unified_from_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) raise(errc::malformed_row, "unified table: empty input");
  expect_header(lines[0], "timestamp,actual_load_mwh,forecast_load_mwh,temp_c,dewpoint_c,humidity_pct,weekday_index",
                "unified table");
  std::vector<HourlyRecord> out;
  out.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    const auto fields = split_csv(line);
    if (fields.size() != 7)
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) + ": expected 7 columns");
    const Timestamp ts = Timestamp::parse(trim(fields[0]));
    if (!ts.is_exact_hour())
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) + ": timestamp not on the hour");
    HourlyRecord r = make_hourly_record(ts, parse_double(fields[1], line_no, "actual_load_mwh"),
                                        parse_double(fields[2], line_no, "forecast_load_mwh"),
                                        parse_double(fields[3], line_no, "temp_c"),
                                        parse_double(fields[4], line_no, "dewpoint_c"),
                                        parse_double(fields[5], line_no, "humidity_pct"));
    const int weekday = parse_int(fields[6], line_no, "weekday_index");
    if (weekday != r.weekday_index)
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) +
                                     ": weekday_index inconsistent with timestamp");
    if (r.actual_load <= 0 || r.forecast_load <= 0)
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) + ": load must be positive");
    if (std::abs(compute_humidity(r.temp, r.dew_point) - r.humidity) > 1e-9)
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) +
                                     ": humidity inconsistent with temp/dew point");
    if (!out.empty() && out.back().ts >= r.ts)
      raise(errc::malformed_row, "unified table: line " + std::to_string(line_no) + ": timestamps not increasing");
    out.push_back(r);
  }
  return out;
}

void write_unified_csv(const std::string& path, std::span<const HourlyRecord> records) {
  write_file(path, unified_to_csv(records));
}

std::vector<HourlyRecord> read_unified_csv(const std::string& path) {
  return unified_from_csv(read_file(path));
}

}  // namespace peakcast
