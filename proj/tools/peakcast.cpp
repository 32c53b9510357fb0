#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "peakcast/augment.hpp"
#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"
#include "peakcast/pipeline.hpp"

namespace fs = std::filesystem;
using namespace peakcast;

namespace {

// "2001,2006,2010-2012" -> {2001, 2006, 2010, 2011, 2012}
std::vector<int> parse_year_list(const std::string& text) {
  std::vector<int> years;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        years.push_back(std::stoi(item));
      } else {
        const int a = std::stoi(item.substr(0, dash));
        const int b = std::stoi(item.substr(dash + 1));
        if (b < a) raise(errc::config_invalid, "year range is reversed: " + item);
        for (int y = a; y <= b; ++y) years.push_back(y);
      }
    } catch (const std::invalid_argument&) {
      raise(errc::config_invalid, "bad year list entry: " + item);
    }
  }
  if (years.empty()) raise(errc::config_invalid, "empty year list");
  std::sort(years.begin(), years.end());
  years.erase(std::unique(years.begin(), years.end()), years.end());
  return years;
}

// "2000-01-01..2014-12-31"
std::pair<CivilDate, CivilDate> parse_date_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos)
    raise(errc::config_invalid, "date range must look like YYYY-MM-DD..YYYY-MM-DD: " + text);
  const CivilDate a = CivilDate::parse(text.substr(0, sep));
  const CivilDate b = CivilDate::parse(text.substr(sep + 2));
  if (b < a) raise(errc::config_invalid, "date range is reversed: " + text);
  return {a, b};
}

void write_or_print(const std::string& out_path, const std::string& contents) {
  if (out_path.empty() || out_path == "-")
    std::cout << contents;
  else
    write_file(out_path, contents);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peakcast: monthly peak-day / peak-hour probability models and battery dispatch backtesting"};
  app.require_subcommand(1);
  std::function<void()> run;

  // ingest
  {
    auto* cmd = app.add_subcommand("ingest", "Parse load and weather CSVs into the unified hourly table");
    auto load = std::make_shared<std::string>();
    auto weather = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--load", *load, "Load CSV (timestamp,actual_load_mwh,forecast_load_mwh)")->required();
    cmd->add_option("--weather", *weather, "Weather CSV (timestamp,temp_c,dewpoint_c,wind_mps,visibility_km)")->required();
    cmd->add_option("--out", *out, "Output unified table CSV")->required();
    cmd->callback([=, &run] {
      run = [=] {
        const auto points = parse_load_csv(*load);
        const auto aligned = align_to_hours(parse_weather_csv(*weather));
        const auto merged = merge_datasets(points, aligned);
        write_unified_csv(*out, merged);
        std::cout << "wrote " << merged.size() << " hours to " << *out << "\n";
      };
    });
  }

  // augment
  {
    auto* cmd = app.add_subcommand("augment", "Train load-synthesis MLPs and generate synthetic hours");
    auto table_path = std::make_shared<std::string>();
    auto train_range = std::make_shared<std::string>();
    auto gen_range = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto weather_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto epochs = std::make_shared<int>(60);
    auto bootstrap = std::make_shared<bool>(false);
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--train-range", *train_range, "Training days, YYYY-MM-DD..YYYY-MM-DD")->required();
    cmd->add_option("--gen-range", *gen_range, "Generation days, YYYY-MM-DD..YYYY-MM-DD")->required();
    cmd->add_option("--out", *out, "Output CSV of synthetic hours")->required();
    cmd->add_option("--weather", *weather_path, "Raw weather CSV covering the generation range");
    cmd->add_option("--seed", *seed, "Master seed");
    cmd->add_option("--epochs", *epochs, "MLP training epochs");
    cmd->add_flag("--residual-bootstrap", *bootstrap, "Resample training residuals by month-hour");
    cmd->callback([=, &run] {
      run = [=] {
        const HourlyTable table(read_unified_csv(*table_path));
        AugmentConfig cfg;
        std::tie(cfg.train_begin, cfg.train_end) = parse_date_range(*train_range);
        std::tie(cfg.gen_begin, cfg.gen_end) = parse_date_range(*gen_range);
        cfg.mlp.epochs = *epochs;
        cfg.residual_bootstrap = *bootstrap;
        cfg.seed = *seed;
        const Augmenter aug = fit_augmenter(table, cfg);

        std::vector<HourlyWeatherPoint> weather;
        for (const auto& r : table.records()) weather.push_back({r.ts, r.temp, r.dew_point});
        if (!weather_path->empty()) {
          const auto extra = align_to_hours(parse_weather_csv(*weather_path));
          weather.insert(weather.end(), extra.begin(), extra.end());
          std::sort(weather.begin(), weather.end(),
                    [](const auto& a, const auto& b) { return a.hour < b.hour; });
          weather.erase(std::unique(weather.begin(), weather.end(),
                                    [](const auto& a, const auto& b) { return a.hour == b.hour; }),
                        weather.end());
        }
        const auto synth = synthesize(aug, weather);
        write_unified_csv(*out, synth);
        std::cout << "wrote " << synth.size() << " synthetic hours to " << *out << "\n";
      };
    });
  }

  // features
  {
    auto* cmd = app.add_subcommand("features", "Export per-month predictor tables");
    auto table_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    cmd->callback([=, &run] {
      run = [=] {
        const HourlyTable table(read_unified_csv(*table_path));
        fs::create_directories(*out_dir);
        for (int month = 1; month <= 12; ++month) {
          const auto day_rows = build_peak_day_rows(table, month);
          char name[32];
          std::snprintf(name, sizeof name, "peak_day_m%02d.csv", month);
          write_file((fs::path(*out_dir) / name).string(), peak_day_rows_to_csv(day_rows));
          std::vector<PeakHourFeatureRow> hour_rows;
          for (const auto& r : day_rows) {
            const auto day = build_peak_hour_rows(table, r.date);
            hour_rows.insert(hour_rows.end(), day.begin(), day.end());
          }
          std::snprintf(name, sizeof name, "peak_hour_m%02d.csv", month);
          write_file((fs::path(*out_dir) / name).string(), peak_hour_rows_to_csv(hour_rows));
        }
        std::cout << "wrote feature tables to " << *out_dir << "\n";
      };
    });
  }

  // train
  {
    auto* cmd = app.add_subcommand("train", "Fit the 36 monthly models");
    auto table_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto years = std::make_shared<std::string>();
    auto learner = std::make_shared<std::string>("rf");
    auto n_tree = std::make_shared<int>(200);
    auto max_depth = std::make_shared<int>(20);
    auto min_leaf = std::make_shared<int>(1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto no_strat = std::make_shared<bool>(false);
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--train-years", *years, "Training years, e.g. 2000-2014 or 2000,2002")->required();
    cmd->add_option("--out", *out_dir, "Models output directory")->required();
    cmd->add_option("--learner", *learner, "rf | gbm | logit");
    cmd->add_option("--n-tree", *n_tree, "Trees (rf) or rounds (gbm)");
    cmd->add_option("--max-depth", *max_depth, "Tree depth limit");
    cmd->add_option("--min-leaf", *min_leaf, "Minimum samples per leaf");
    cmd->add_option("--seed", *seed, "Master seed");
    cmd->add_flag("--no-stratified", *no_strat, "Disable stratified bootstraps");
    cmd->callback([=, &run] {
      run = [=] {
        const HourlyTable table(read_unified_csv(*table_path));
        TrainOptions opt;
        opt.train_years = parse_year_list(*years);
        opt.learner.kind = learner_kind_from_string(*learner);
        opt.learner.n_tree = *n_tree;
        opt.learner.max_depth = *max_depth;
        opt.learner.min_leaf = *min_leaf;
        opt.learner.stratified = !*no_strat;
        opt.seed = *seed;
        const ModelSet models = train_models(table, opt);
        fs::create_directories(*out_dir);
        for (const auto& [key, bundle] : models.all())
          save_bundle((fs::path(*out_dir) / bundle_filename(key.first, key.second)).string(), bundle);
        std::cout << "wrote " << models.all().size() << " models to " << *out_dir << "\n";
      };
    });
  }

  // predict
  {
    auto* cmd = app.add_subcommand("predict", "Per-day peak probabilities and top-2 hours");
    auto models_dir = std::make_shared<std::string>();
    auto table_path = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>("indirect");
    auto threshold = std::make_shared<double>(0.03);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--models", *models_dir, "Models directory")->required();
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--kind", *kind, "direct | indirect");
    cmd->add_option("--threshold", *threshold, "Dispatch threshold");
    cmd->add_option("--out", *out, "Output CSV (default stdout)");
    cmd->callback([=, &run] {
      run = [=] {
        const ModelSet models = ModelSet::load_dir(*models_dir);
        const HourlyTable table(read_unified_csv(*table_path));
        write_or_print(*out, predict_days_csv(models, table, peak_day_kind_from_string(*kind), *threshold));
      };
    });
  }

  // backtest
  {
    auto* cmd = app.add_subcommand("backtest", "Replay the dispatch policy over testing years");
    auto models_dir = std::make_shared<std::string>();
    auto table_path = std::make_shared<std::string>();
    auto years = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>("indirect");
    auto threshold = std::make_shared<double>(0.03);
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--models", *models_dir, "Models directory")->required();
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--years", *years, "Testing years, e.g. 2001,2006,2008")->required();
    cmd->add_option("--kind", *kind, "direct | indirect");
    cmd->add_option("--threshold", *threshold, "Dispatch threshold");
    cmd->add_option("--out", *out_dir, "Report output directory")->required();
    cmd->callback([=, &run] {
      run = [=] {
        const ModelSet models = ModelSet::load_dir(*models_dir);
        const HourlyTable table(read_unified_csv(*table_path));
        BacktestConfig cfg;
        cfg.years = parse_year_list(*years);
        cfg.kind = peak_day_kind_from_string(*kind);
        cfg.threshold = *threshold;
        const BacktestReport report = run_backtest(models, table, cfg);
        fs::create_directories(*out_dir);
        std::ostringstream text;
        write_report_text(text, report);
        write_file((fs::path(*out_dir) / "report.txt").string(), text.str());
        write_file((fs::path(*out_dir) / "report.csv").string(), report_to_csv(report));
        write_file((fs::path(*out_dir) / "monthly_recall.csv").string(), monthly_recall_to_csv(report));
        write_report_text(std::cout, report);
      };
    });
  }

  // report
  {
    auto* cmd = app.add_subcommand("report", "Exploratory diagnostics (PCA, R^2, histograms)");
    auto table_path = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--table", *table_path, "Unified table CSV")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    cmd->callback([=, &run] {
      run = [=] {
        const HourlyTable table(read_unified_csv(*table_path));
        write_analysis_report(table, *out_dir);
        std::cout << "wrote diagnostics to " << *out_dir << "\n";
      };
    });
  }

  // pipeline
  {
    auto* cmd = app.add_subcommand("pipeline", "Run the full pipeline from a JSON config");
    auto config_path = std::make_shared<std::string>();
    cmd->add_option("--config", *config_path, "Pipeline config JSON")->required();
    cmd->callback([=, &run] {
      run = [=] {
        const std::string bytes = read_file(*config_path);
        const PipelineConfig cfg = parse_pipeline_config(bytes);
        const PipelineResult result = run_pipeline(cfg, bytes);
        write_report_text(std::cout, result.backtest);
        std::cout << "manifest: " << result.manifest_path << "\n";
      };
    });
  }

  // synth
  {
    auto* cmd = app.add_subcommand("synth", "Generate the bundled synthetic benchmark data");
    auto start_year = std::make_shared<int>(2000);
    auto end_year = std::make_shared<int>(2020);
    auto seed = std::make_shared<std::uint64_t>(77);
    auto out = std::make_shared<std::string>();
    auto raw_load = std::make_shared<std::string>();
    auto raw_weather = std::make_shared<std::string>();
    cmd->add_option("--start-year", *start_year, "First year");
    cmd->add_option("--end-year", *end_year, "Last year (inclusive)");
    cmd->add_option("--seed", *seed, "Generator seed");
    cmd->add_option("--out", *out, "Unified table CSV output")->required();
    cmd->add_option("--raw-load", *raw_load, "Also write a raw load CSV here");
    cmd->add_option("--raw-weather", *raw_weather, "Also write a raw weather CSV here");
    cmd->callback([=, &run] {
      run = [=] {
        SyntheticConfig cfg;
        cfg.start_year = *start_year;
        cfg.end_year = *end_year;
        cfg.seed = *seed;
        if (cfg.end_year < cfg.start_year) raise(errc::config_invalid, "year range is reversed");
        const auto table = generate_synthetic_table(cfg);
        write_unified_csv(*out, table);
        if (!raw_load->empty() != !raw_weather->empty())
          raise(errc::config_invalid, "--raw-load and --raw-weather go together");
        if (!raw_load->empty()) write_synthetic_raw_csvs(cfg, *raw_load, *raw_weather);
        std::cout << "wrote " << table.size() << " hours to " << *out << "\n";
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    run();
  } catch (const Error& e) {
    log::error(e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    log::error(e.what());
    return 3;
  }
  return 0;
}
