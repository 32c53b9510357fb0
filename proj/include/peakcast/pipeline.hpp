#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peakcast/backtest.hpp"
#include "peakcast/grid_search.hpp"
#include "peakcast/synthetic.hpp"

namespace peakcast {

struct LearnerOptions {
  LearnerKind kind = LearnerKind::random_forest;
  int n_tree = 200;
  int max_depth = 20;
  int min_leaf = 1;
  bool stratified = true;
};

struct TrainOptions {
  std::vector<int> train_years;
  LearnerOptions learner;
  std::uint64_t seed = 0;
};

// Trains the 12 peak-day-direct, 12 peak-day-indirect and 12 peak-hour
// models on the rows of the training years. Months with no usable training
// rows raise empty_data.
ModelSet train_models(const HourlyTable& table, const TrainOptions& options);

struct AugmentStageConfig {
  CivilDate train_begin, train_end;
  CivilDate gen_begin, gen_end;
  int epochs = 60;
  double learning_rate = 0.02;
  bool residual_bootstrap = false;
};

// Full-run configuration; parsed from a strict JSON document (unknown keys
// are rejected with the offending path).
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string workdir;
  // Exactly one data source:
  std::optional<std::string> load_csv;     // with weather_csv
  std::optional<std::string> weather_csv;
  std::optional<std::string> table_csv;
  std::optional<SyntheticConfig> synthetic;
  std::vector<int> train_years;
  std::vector<int> test_years;
  std::optional<AugmentStageConfig> augment;
  LearnerOptions learner;
  double threshold = 0.03;
  PeakDayKind kind = PeakDayKind::indirect;
  bool write_features = true;
  bool write_report = true;
};

PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
  std::string workdir;
  BacktestReport backtest;
  std::string manifest_path;
};

// Runs data -> (augment) -> features -> train -> backtest -> report and
// writes a manifest with the config hash, input hashes and output hashes.
// Identical config + inputs give a byte-identical manifest.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& config_bytes);

// Prediction output, one row per operating day:
// date,kind,p_date,p_mul,p_month,dispatch,hour_sel_1,hour_sel_2,p_hour_0..p_hour_23
std::string predict_days_csv(const ModelSet& models, const HourlyTable& table, PeakDayKind kind,
                             double threshold);

// Diagnostic bundle: per-month PCA of the peak-day predictors plus the daily
// peak load, the temperature-extreme R^2 table, and peak-hour histograms.
void write_analysis_report(const HourlyTable& table, const std::string& out_dir);

}  // namespace peakcast
