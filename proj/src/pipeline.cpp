#include "peakcast/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "peakcast/analysis.hpp"
#include "peakcast/augment.hpp"
#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"

namespace peakcast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Labels labels_from(const std::vector<PeakDayFeatureRow>& rows, bool up_to_date) {
  Labels y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    y[i] = up_to_date ? rows[i].label_up_to_date : rows[i].label_direct;
  return y;
}

std::unique_ptr<Classifier> fit_classifier(const Matrix& X, const Labels& y,
                                           const LearnerOptions& opt, std::uint64_t seed) {
  switch (opt.kind) {
    case LearnerKind::random_forest: {
      ForestParams p;
      p.n_tree = opt.n_tree;
      p.max_depth = opt.max_depth;
      p.min_leaf = opt.min_leaf;
      p.stratified = opt.stratified;
      p.seed = seed;
      return make_classifier(fit_random_forest(X, y, p));
    }
    case LearnerKind::gbm: {
      GbmParams p;
      p.n_rounds = opt.n_tree;
      p.max_depth = std::min(opt.max_depth, 6);
      p.min_leaf = opt.min_leaf;
      return make_classifier(fit_gbm(X, y, p));
    }
    case LearnerKind::logit:
      return make_classifier(fit_logit_aic(X, y));
  }
  raise(errc::config_invalid, "unknown learner kind");
}

}  // namespace

ModelSet train_models(const HourlyTable& table, const TrainOptions& options) {
  if (options.train_years.empty()) raise(errc::config_invalid, "train: no training years");
  const auto in_train = [&](int year) {
    return std::find(options.train_years.begin(), options.train_years.end(), year) !=
           options.train_years.end();
  };

  ModelSet models;
  for (int month = 1; month <= 12; ++month) {
    // Peak-day rows, both label definitions.
    std::vector<PeakDayFeatureRow> day_rows;
    for (const auto& r : build_peak_day_rows(table, month))
      if (in_train(r.date.year)) day_rows.push_back(r);
    if (day_rows.empty())
      raise(errc::empty_data, "train: no peak-day rows for month " + std::to_string(month));

    std::vector<std::array<double, PeakDayFeatureRow::kNumFeatures>> feats;
    feats.reserve(day_rows.size());
    std::vector<int> years_used;
    for (const auto& r : day_rows) {
      feats.push_back(r.features());
      if (std::find(years_used.begin(), years_used.end(), r.date.year) == years_used.end())
        years_used.push_back(r.date.year);
    }
    std::sort(years_used.begin(), years_used.end());
    const Matrix X = matrix_from_rows(feats);

    const auto day_names = PeakDayFeatureRow::feature_names();
    for (const bool up_to_date : {false, true}) {
      const std::string task = up_to_date ? "peak_day_indirect" : "peak_day_direct";
      ModelBundle bundle;
      bundle.task = task;
      bundle.month = month;
      bundle.training_years = years_used;
      bundle.feature_names.assign(day_names.begin(), day_names.end());
      bundle.classifier =
          fit_classifier(X, labels_from(day_rows, up_to_date), options.learner,
                         derive_seed(options.seed, task + "_m" + std::to_string(month)));
      models.put(std::move(bundle));
    }

    // Peak-hour rows for every complete day of the month in the train years.
    std::vector<std::array<double, PeakHourFeatureRow::kNumFeatures>> hour_feats;
    Labels hour_labels;
    for (const int year : years_used) {
      const int n_days = days_in_month(year, month);
      for (int d = 1; d <= n_days; ++d) {
        const auto rows = build_peak_hour_rows(table, CivilDate{year, month, d});
        for (const auto& r : rows) {
          hour_feats.push_back(r.features());
          hour_labels.push_back(r.label);
        }
      }
    }
    const auto hour_names = PeakHourFeatureRow::feature_names();
    ModelBundle bundle;
    bundle.task = "peak_hour";
    bundle.month = month;
    bundle.training_years = years_used;
    bundle.feature_names.assign(hour_names.begin(), hour_names.end());
    bundle.classifier =
        fit_classifier(matrix_from_rows(hour_feats), hour_labels, options.learner,
                       derive_seed(options.seed, "peak_hour_m" + std::to_string(month)));
    models.put(std::move(bundle));
    log::info("train: month " + std::to_string(month) + " models fitted (" +
              std::to_string(day_rows.size()) + " day rows, " + std::to_string(hour_labels.size()) +
              " hour rows)");
  }
  return models;
}

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key))
      raise(errc::config_invalid, "config: unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

std::vector<int> year_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    raise(errc::config_invalid, "config: " + field + " must be a non-empty array of years");
  std::vector<int> years = j.get<std::vector<int>>();
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());
  return years;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(errc::config_invalid, std::string("config: invalid JSON: ") + e.what());
  }

  check_keys(j, "", {"seed", "workdir", "data", "train_years", "test_years", "augment", "learner",
                     "threshold", "kind", "write_features", "write_report"});

  PipelineConfig cfg;
  if (!j.contains("workdir") || !j.at("workdir").is_string())
    raise(errc::config_invalid, "config: workdir (string) is required");
  cfg.workdir = j.at("workdir").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

  if (!j.contains("data") || !j.at("data").is_object())
    raise(errc::config_invalid, "config: data (object) is required");
  const json& data = j.at("data");
  check_keys(data, "data", {"load_csv", "weather_csv", "table_csv", "synthetic"});
  int sources = 0;
  if (data.contains("table_csv")) {
    cfg.table_csv = data.at("table_csv").get<std::string>();
    ++sources;
  }
  if (data.contains("load_csv") || data.contains("weather_csv")) {
    if (!data.contains("load_csv") || !data.contains("weather_csv"))
      raise(errc::config_invalid, "config: data.load_csv and data.weather_csv go together");
    cfg.load_csv = data.at("load_csv").get<std::string>();
    cfg.weather_csv = data.at("weather_csv").get<std::string>();
    ++sources;
  }
  if (data.contains("synthetic")) {
    const json& s = data.at("synthetic");
    check_keys(s, "data.synthetic", {"start_year", "end_year", "seed", "base_mw"});
    SyntheticConfig sc;
    if (s.contains("start_year")) sc.start_year = s.at("start_year").get<int>();
    if (s.contains("end_year")) sc.end_year = s.at("end_year").get<int>();
    if (s.contains("seed")) sc.seed = s.at("seed").get<std::uint64_t>();
    if (s.contains("base_mw")) sc.base_mw = s.at("base_mw").get<double>();
    if (sc.end_year < sc.start_year)
      raise(errc::config_invalid, "config: data.synthetic year range is empty");
    cfg.synthetic = sc;
    ++sources;
  }
  if (sources != 1)
    raise(errc::config_invalid, "config: data must name exactly one source (table_csv, "
                                "load_csv+weather_csv, or synthetic)");

  if (!j.contains("train_years") || !j.contains("test_years"))
    raise(errc::config_invalid, "config: train_years and test_years are required");
  cfg.train_years = year_list(j.at("train_years"), "train_years");
  cfg.test_years = year_list(j.at("test_years"), "test_years");
  for (const int y : cfg.test_years) {
    if (std::find(cfg.train_years.begin(), cfg.train_years.end(), y) != cfg.train_years.end())
      raise(errc::config_invalid,
            "config: year " + std::to_string(y) + " appears in both train_years and test_years");
  }

  if (j.contains("augment")) {
    const json& a = j.at("augment");
    check_keys(a, "augment",
               {"train_begin", "train_end", "gen_begin", "gen_end", "epochs", "learning_rate",
                "residual_bootstrap"});
    AugmentStageConfig ac;
    for (const char* field : {"train_begin", "train_end", "gen_begin", "gen_end"})
      if (!a.contains(field))
        raise(errc::config_invalid, std::string("config: augment.") + field + " is required");
    try {
      ac.train_begin = CivilDate::parse(a.at("train_begin").get<std::string>());
      ac.train_end = CivilDate::parse(a.at("train_end").get<std::string>());
      ac.gen_begin = CivilDate::parse(a.at("gen_begin").get<std::string>());
      ac.gen_end = CivilDate::parse(a.at("gen_end").get<std::string>());
    } catch (const Error& e) {
      raise(errc::config_invalid, std::string("config: augment dates: ") + e.what());
    }
    if (a.contains("epochs")) ac.epochs = a.at("epochs").get<int>();
    if (a.contains("learning_rate")) ac.learning_rate = a.at("learning_rate").get<double>();
    if (a.contains("residual_bootstrap")) ac.residual_bootstrap = a.at("residual_bootstrap").get<bool>();
    cfg.augment = ac;
  }

  if (j.contains("learner")) {
    const json& l = j.at("learner");
    check_keys(l, "learner", {"kind", "n_tree", "max_depth", "min_leaf", "stratified"});
    if (l.contains("kind")) cfg.learner.kind = learner_kind_from_string(l.at("kind").get<std::string>());
    if (l.contains("n_tree")) cfg.learner.n_tree = l.at("n_tree").get<int>();
    if (l.contains("max_depth")) cfg.learner.max_depth = l.at("max_depth").get<int>();
    if (l.contains("min_leaf")) cfg.learner.min_leaf = l.at("min_leaf").get<int>();
    if (l.contains("stratified")) cfg.learner.stratified = l.at("stratified").get<bool>();
    if (cfg.learner.n_tree < 1 || cfg.learner.max_depth < 1 || cfg.learner.min_leaf < 1)
      raise(errc::config_invalid, "config: learner sizes must be positive");
  }

  if (j.contains("threshold")) cfg.threshold = j.at("threshold").get<double>();
  if (cfg.threshold <= 0.0 || cfg.threshold >= 1.0)
    raise(errc::config_invalid, "config: threshold must be in (0, 1)");
  if (j.contains("kind")) cfg.kind = peak_day_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("write_features")) cfg.write_features = j.at("write_features").get<bool>();
  if (j.contains("write_report")) cfg.write_report = j.at("write_report").get<bool>();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return parse_pipeline_config(read_file(path));
}

std::string predict_days_csv(const ModelSet& models, const HourlyTable& table, PeakDayKind kind,
                             double threshold) {
  std::ostringstream out;
  out << "date,kind,p_date,p_mul,p_month,dispatch,hour_sel_1,hour_sel_2";
  for (int h = 0; h < 24; ++h) out << ",p_hour_" << h;
  out << '\n';

  const std::string day_task = peak_day_task(kind);
  for (const auto& [year, month] : table.complete_months()) {
    std::vector<PeakDayFeatureRow> rows;
    for (const auto& r : build_peak_day_rows(table, month))
      if (r.date.year == year) rows.push_back(r);
    const ModelBundle& day_model = models.get(day_task, month);
    const ModelBundle& hour_model = models.get("peak_hour", month);
    for (const auto& row : rows) {
      const PeakDayPrediction day_pred = predict_peak_day(day_model, row, kind, threshold);
      const auto hour_rows = build_peak_hour_rows(table, row.date);
      const PeakHourPrediction hour_pred = predict_peak_hours(hour_model, hour_rows);
      out << row.date.to_string() << ',' << to_string(kind) << ','
          << (day_pred.p_date ? format_double(*day_pred.p_date) : std::string()) << ','
          << (day_pred.p_mul ? format_double(*day_pred.p_mul) : std::string()) << ','
          << format_double(day_pred.p_month) << ',' << (day_pred.dispatch ? 1 : 0) << ','
          << hour_pred.selected_hours[0] << ',' << hour_pred.selected_hours[1];
      for (int h = 0; h < 24; ++h)
        out << ',' << format_double(hour_pred.probabilities[static_cast<std::size_t>(h)]);
      out << '\n';
    }
  }
  return out.str();
}

void write_analysis_report(const HourlyTable& table, const std::string& out_dir) {
  fs::create_directories(out_dir);

  // R^2 of daily peak load vs daily temperature extremes, per month.
  {
    std::ostringstream csv;
    csv << "month,r2_t_min,r2_t_max,n_days\n";
    for (int month = 1; month <= 12; ++month) {
      std::vector<double> t_min, t_max, peak;
      for (const int year : table.years()) {
        const int n_days = days_in_month(year, month);
        for (int d = 1; d <= n_days; ++d) {
          const auto s = day_summary(table, CivilDate{year, month, d});
          if (!s) continue;
          t_min.push_back(s->t_min);
          t_max.push_back(s->t_max);
          peak.push_back(s->max_actual);
        }
      }
      if (peak.size() < 3) continue;
      csv << month << ',' << format_double(r_squared(t_min, peak)) << ','
          << format_double(r_squared(t_max, peak)) << ',' << peak.size() << '\n';
    }
    write_file((fs::path(out_dir) / "r_squared.csv").string(), csv.str());
  }

  // Peak-hour histograms.
  {
    std::ostringstream csv;
    csv << "month";
    for (int h = 0; h < 24; ++h) csv << ",hour_" << h;
    csv << '\n';
    for (int month = 1; month <= 12; ++month) {
      std::array<long, 24> bins{};
      try {
        bins = peak_hour_histogram(table, month);
      } catch (const Error&) {
        continue;
      }
      csv << month;
      for (const long b : bins) csv << ',' << b;
      csv << '\n';
    }
    write_file((fs::path(out_dir) / "peak_hour_histogram.csv").string(), csv.str());
  }

  // PCA of the peak-day predictors plus the daily peak load, per month.
  for (int month = 1; month <= 12; ++month) {
    std::vector<PeakDayFeatureRow> rows = build_peak_day_rows(table, month);
    if (rows.size() < 3) continue;
    Matrix X(rows.size(), PeakDayFeatureRow::kNumFeatures + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto f = rows[i].features();
      std::copy(f.begin(), f.end(), X.row(i).begin());
      const auto s = day_summary(table, rows[i].date);
      X.at(i, PeakDayFeatureRow::kNumFeatures) = s ? s->max_actual : 0.0;
    }
    PcaResult p;
    try {
      p = pca(X, static_cast<int>(std::min<std::size_t>(X.n_cols, X.n_rows - 1)));
    } catch (const Error&) {
      continue;
    }
    std::vector<std::string> names(PeakDayFeatureRow::feature_names().begin(),
                                   PeakDayFeatureRow::feature_names().end());
    names.push_back("daily_peak_load");
    std::ostringstream csv;
    csv << "feature";
    for (std::size_t c = 0; c < p.loadings.n_cols; ++c) csv << ",pc" << c + 1;
    csv << '\n';
    csv << "explained_variance_ratio";
    for (const double v : p.explained_variance_ratio) csv << ',' << format_double(v);
    csv << '\n';
    for (std::size_t f = 0; f < p.kept_columns.size(); ++f) {
      csv << names[static_cast<std::size_t>(p.kept_columns[f])];
      for (std::size_t c = 0; c < p.loadings.n_cols; ++c) csv << ',' << format_double(p.loadings.at(f, c));
      csv << '\n';
    }
    char fname[48];
    std::snprintf(fname, sizeof fname, "pca_peak_day_m%02d.csv", month);
    write_file((fs::path(out_dir) / fname).string(), csv.str());
  }
}

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& config_bytes) {
  const fs::path work(config.workdir);
  fs::create_directories(work);

  std::map<std::string, std::string> input_hashes;
  std::map<std::string, std::string> output_hashes;
  auto write_output = [&](const fs::path& rel, const std::string& contents) {
    const fs::path p = work / rel;
    fs::create_directories(p.parent_path());
    write_file(p.string(), contents);
    output_hashes[rel.generic_string()] = hash_hex(contents);
  };

  // Stage: data.
  std::vector<HourlyRecord> records;
  if (config.table_csv) {
    const std::string bytes = read_file(*config.table_csv);
    input_hashes["table_csv"] = hash_hex(bytes);
    records = unified_from_csv(bytes);
  } else if (config.load_csv) {
    const std::string load_bytes = read_file(*config.load_csv);
    const std::string weather_bytes = read_file(*config.weather_csv);
    input_hashes["load_csv"] = hash_hex(load_bytes);
    input_hashes["weather_csv"] = hash_hex(weather_bytes);
    const auto load = parse_load_csv(*config.load_csv);
    const auto weather = align_to_hours(parse_weather_csv(*config.weather_csv));
    records = merge_datasets(load, weather);
  } else {
    records = generate_synthetic_table(*config.synthetic);
    input_hashes["synthetic_seed"] = std::to_string(config.synthetic->seed);
  }
  log::info("pipeline: table has " + std::to_string(records.size()) + " hours");

  // Stage: augment (optional).
  if (config.augment) {
    HourlyTable base(records);
    AugmentConfig ac;
    ac.train_begin = config.augment->train_begin;
    ac.train_end = config.augment->train_end;
    ac.gen_begin = config.augment->gen_begin;
    ac.gen_end = config.augment->gen_end;
    ac.mlp.epochs = config.augment->epochs;
    ac.mlp.learning_rate = config.augment->learning_rate;
    ac.residual_bootstrap = config.augment->residual_bootstrap;
    ac.seed = derive_seed(config.seed, "augment");
    const Augmenter aug = fit_augmenter(base, ac);

    std::vector<HourlyWeatherPoint> weather;
    weather.reserve(base.size());
    for (const auto& r : base.records()) weather.push_back({r.ts, r.temp, r.dew_point});
    const std::vector<HourlyRecord> synth = synthesize(aug, weather);
    write_output("augmented.csv", unified_to_csv(synth));

    // Union, real data wins on overlapping hours.
    std::map<std::int64_t, HourlyRecord> merged;
    for (const auto& r : synth) merged[r.ts.hours()] = r;
    for (const auto& r : records) merged[r.ts.hours()] = r;
    records.clear();
    for (auto& [h, r] : merged) records.push_back(r);
  }
  write_output("table.csv", unified_to_csv(records));

  const HourlyTable table(std::move(records));

  // Stage: features.
  if (config.write_features) {
    for (int month = 1; month <= 12; ++month) {
      const auto day_rows = build_peak_day_rows(table, month);
      char fname[40];
      std::snprintf(fname, sizeof fname, "features/peak_day_m%02d.csv", month);
      write_output(fname, peak_day_rows_to_csv(day_rows));

      std::vector<PeakHourFeatureRow> hour_rows;
      for (const auto& r : day_rows) {
        const auto day = build_peak_hour_rows(table, r.date);
        hour_rows.insert(hour_rows.end(), day.begin(), day.end());
      }
      std::snprintf(fname, sizeof fname, "features/peak_hour_m%02d.csv", month);
      write_output(fname, peak_hour_rows_to_csv(hour_rows));
    }
  }

  // Stage: train.
  TrainOptions topt;
  topt.train_years = config.train_years;
  topt.learner = config.learner;
  topt.seed = derive_seed(config.seed, "train");
  const ModelSet models = train_models(table, topt);
  for (const auto& [key, bundle] : models.all())
    write_output(fs::path("models") / bundle_filename(key.first, key.second), bundle_to_json(bundle));

  // Stage: backtest.
  BacktestConfig bc;
  bc.years = config.test_years;
  bc.threshold = config.threshold;
  bc.kind = config.kind;
  const BacktestReport report = run_backtest(models, table, bc);
  {
    std::ostringstream text;
    write_report_text(text, report);
    write_output("backtest/report.txt", text.str());
    write_output("backtest/report.csv", report_to_csv(report));
    write_output("backtest/monthly_recall.csv", monthly_recall_to_csv(report));
  }

  // Stage: report.
  if (config.write_report) {
    const fs::path report_dir = work / "report";
    write_analysis_report(table, report_dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(report_dir))
      if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths)
      output_hashes[(fs::path("report") / p.filename()).generic_string()] = hash_hex(read_file(p.string()));
  }

  // Manifest.
  json manifest;
  manifest["version"] = kModelFormatVersion;
  manifest["config_hash"] = hash_hex(config_bytes);
  manifest["inputs"] = input_hashes;
  manifest["outputs"] = output_hashes;
  manifest["seeds"] = {{"master", config.seed},
                       {"train", derive_seed(config.seed, "train")},
                       {"augment", derive_seed(config.seed, "augment")}};
  const std::string manifest_text = manifest.dump(1) + "\n";
  const fs::path manifest_path = work / "manifest.json";
  write_file(manifest_path.string(), manifest_text);

  PipelineResult result;
  result.workdir = work.string();
  result.backtest = report;
  result.manifest_path = manifest_path.string();
  return result;
}

}  // namespace peakcast
