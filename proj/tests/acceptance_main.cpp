// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "peakcast/analysis.hpp"
#include "peakcast/backtest.hpp"
#include "peakcast/csv.hpp"
#include "peakcast/features.hpp"
#include "peakcast/forest.hpp"
#include "peakcast/gbm.hpp"
#include "peakcast/log.hpp"
#include "peakcast/logit.hpp"
#include "peakcast/mlp.hpp"
#include "peakcast/pipeline.hpp"
#include "peakcast/rng.hpp"
#include "peakcast/synthetic.hpp"

using namespace peakcast;
namespace fs = std::filesystem;

namespace {

struct Harness {
  int failures = 0;

  void run(int number, const std::string& description, const std::function<bool(std::string&)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
                description.c_str(), secs, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

bool check(bool condition, const std::string& message, std::string& detail) {
  if (!condition && detail.empty()) detail = message;
  return condition;
}

// ---- criterion 9/10 shared state ----
struct Benchmark {
  HourlyTable table;
  ModelSet models;
  double train_and_backtest_seconds = 0;
  BacktestReport report;
  bool ready = false;
};

Benchmark g_benchmark;

const std::vector<int> kTestYears{2001, 2006, 2008, 2011, 2019, 2020};

void build_benchmark() {
  const auto start = std::chrono::steady_clock::now();
  SyntheticConfig sc;
  sc.start_year = 2000;
  sc.end_year = 2020;
  sc.seed = 77;
  g_benchmark.table = HourlyTable(generate_synthetic_table(sc));

  TrainOptions opt;
  for (int y = 2000; y <= 2020; ++y)
    if (std::find(kTestYears.begin(), kTestYears.end(), y) == kTestYears.end())
      opt.train_years.push_back(y);
  opt.learner.kind = LearnerKind::random_forest;
  opt.learner.n_tree = 200;
  opt.learner.max_depth = 20;
  opt.learner.min_leaf = 1;
  opt.learner.stratified = true;
  opt.seed = 42;
  g_benchmark.models = train_models(g_benchmark.table, opt);

  BacktestConfig bc;
  bc.years = kTestYears;
  bc.threshold = 0.03;
  bc.kind = PeakDayKind::indirect;
  g_benchmark.report = run_backtest(g_benchmark.models, g_benchmark.table, bc);
  g_benchmark.train_and_backtest_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  g_benchmark.ready = true;
}

}  // namespace

int main() {
  log::set_level(log::Level::error);
  Harness h;

  h.run(1, "humidity matches an independent high-precision evaluation to 1e-9", [](std::string& d) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
      const double t = rng.uniform(-40.0, 45.0);
      const double dt = t - rng.uniform(0.0, 35.0);
      const double got = compute_humidity(t, dt);
      const double expected = static_cast<double>(oracle::humidity(t, dt));
      ok = check(std::abs(got - expected) <= 1e-9, "mismatch at T=" + format_double(t), d);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok && check(secs < 1.0, "runtime above 1s", d);
  });

  h.run(2, "peak-day multiplier exact for all (n, N), equals 1 iff n >= N-6", [](std::string& d) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    for (int N = 28; N <= 31 && ok; ++N) {
      for (int n = 1; n <= N && ok; ++n) {
        const double got = peak_day_multiplier(n, N);
        const double expected = n + 6 >= N ? 1.0 : static_cast<double>(n + 6) / static_cast<double>(N);
        ok = check(got == expected, "value mismatch", d) &&
             check((got == 1.0) == (n >= N - 6), "saturation boundary", d);
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok && check(secs < 1.0, "runtime above 1s", d);
  });

  h.run(3, "tree root split equals brute-force enumeration on 100 random datasets", [](std::string& d) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1003);
    bool ok = true;
    for (int rep = 0; rep < 100 && ok; ++rep) {
      const std::size_t n = 20 + rng.below(181);  // up to 200 rows
      const std::size_t m = 1 + rng.below(8);     // up to 8 features
      Matrix X(n, m);
      Labels y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
          X.at(i, j) = rng.below(3) == 0 ? static_cast<double>(rng.below(4)) : rng.uniform(-2.0, 2.0);
        y[i] = static_cast<int>(rng.below(2));
      }
      const auto expected = oracle::best_split_enumeration(X, y);
      const auto root = fit_tree(X, y, TreeParams{});
      if (!expected.found) {
        ok = check(root->is_leaf(), "tree split where enumeration found none", d);
        continue;
      }
      ok = check(!root->is_leaf(), "missing split", d) &&
           check(root->feature == expected.feature && std::abs(root->threshold - expected.threshold) < 1e-12,
                 "different split chosen", d);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok && check(secs < 30.0, "runtime above 30s", d);
  });

  h.run(4, "forest vote semantics and same-seed determinism", [](std::string& d) {
    Rng rng(1004);
    const std::size_t n = 150, m = 5;
    Matrix X(n, m);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) X.at(i, j) = rng.uniform(-1.0, 1.0);
      y[i] = X.at(i, 0) + 0.7 * X.at(i, 1) > 0.1 ? 1 : 0;
    }
    ForestParams p;
    p.n_tree = 41;
    p.max_depth = 9;
    p.seed = 20;
    const ForestModel a = fit_random_forest(X, y, p);
    bool ok = true;
    for (int rep = 0; rep < 50 && ok; ++rep) {
      std::vector<double> x(m);
      for (auto& v : x) v = rng.uniform(-1.2, 1.2);
      int votes = 0;
      for (const auto& t : a.trees)
        if (predict_tree(*t, x) >= 0.5) ++votes;
      ok = check(predict_proba_forest(a, x) == static_cast<double>(votes) / 41.0,
                 "probability is not the vote fraction", d);
    }
    p.n_threads = 1;
    const ForestModel b = fit_random_forest(X, y, p);
    for (int rep = 0; rep < 50 && ok; ++rep) {
      std::vector<double> x(m);
      for (auto& v : x) v = rng.uniform(-1.2, 1.2);
      ok = check(predict_proba_forest(a, x) == predict_proba_forest(b, x), "same-seed refit differs", d);
    }
    return ok;
  });

  h.run(5, "gbm training log-loss non-increasing on 20 random datasets", [](std::string& d) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1005);
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
      const std::size_t n = 40 + rng.below(160);
      const std::size_t m = 2 + rng.below(6);
      Matrix X(n, m);
      Labels y(n);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < m; ++j) {
          X.at(i, j) = rng.uniform(-1.0, 1.0);
          s += (j % 2 ? 1.0 : -0.6) * X.at(i, j);
        }
        y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-1.3 * s)) ? 1 : 0;
      }
      GbmParams p;
      p.n_rounds = 50;
      p.learning_rate = 0.1;
      p.max_depth = 3;
      const GbmModel model = fit_gbm(X, y, p);
      for (std::size_t r = 1; r < model.train_log_loss.size() && ok; ++r)
        ok = check(model.train_log_loss[r] <= model.train_log_loss[r - 1] + 1e-12,
                   "loss increased at round " + std::to_string(r), d);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok && check(secs < 60.0, "runtime above 60s", d);
  });

  h.run(6, "logit and mlp analytic gradients match finite differences to 1e-4", [](std::string& d) {
    Rng rng(1006);
    bool ok = true;
    // 50 logistic-regression probes.
    for (int rep = 0; rep < 50 && ok; ++rep) {
      const std::size_t n = 10 + rng.below(40);
      const std::size_t m = 1 + rng.below(5);
      Matrix X(n, m);
      Labels y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) X.at(i, j) = rng.uniform(-2.0, 2.0);
        y[i] = static_cast<int>(rng.below(2));
      }
      std::vector<double> beta(m + 1);
      for (auto& b : beta) b = rng.uniform(-1.0, 1.0);
      const auto grad = detail::logit_gradient(X, y, beta);
      auto ll = [&](std::vector<double>& b) { return detail::logit_log_likelihood(X, y, b); };
      const std::size_t j = rng.below(beta.size());
      const double fd = oracle::central_diff(ll, beta, j, 1e-5);
      ok = check(std::abs(grad[j] - fd) / std::max(1.0, std::abs(fd)) <= 1e-4,
                 "logit gradient probe failed", d);
    }
    // 50 MLP weight probes.
    for (int rep = 0; rep < 10 && ok; ++rep) {
      MlpConfig cfg;
      cfg.hidden = {6, 5};
      cfg.activation = rep % 2 ? Activation::sigmoid : Activation::tanh;
      std::vector<Matrix> W{Matrix(3, 6), Matrix(6, 5), Matrix(5, 1)};
      std::vector<std::vector<double>> b{std::vector<double>(6), std::vector<double>(5),
                                         std::vector<double>(1)};
      for (auto& w : W)
        for (auto& v : w.data) v = rng.uniform(-0.8, 0.8);
      MlpModel model = MlpModel::from_weights(3, cfg, std::move(W), std::move(b));
      const std::size_t n = 8;
      Matrix X(n, 3);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 3; ++j) X.at(i, j) = rng.uniform(-1.0, 1.0);
        y[i] = rng.uniform(-1.0, 1.0);
      }
      std::vector<std::size_t> rows(n);
      std::iota(rows.begin(), rows.end(), 0);
      std::vector<Matrix> gW;
      std::vector<std::vector<double>> gB;
      detail::mlp_loss_and_gradients(model, X, y, rows, gW, gB);
      for (int probe = 0; probe < 5 && ok; ++probe) {
        const std::size_t layer = rng.below(model.weights.size());
        const std::size_t k = rng.below(model.weights[layer].data.size());
        const double orig = model.weights[layer].data[k];
        auto loss_at = [&](double v) {
          MlpModel probe_model = model;
          probe_model.weights[layer].data[k] = v;
          std::vector<Matrix> tw;
          std::vector<std::vector<double>> tb;
          return detail::mlp_loss_and_gradients(probe_model, X, y, rows, tw, tb);
        };
        const double fd = (loss_at(orig + 1e-5) - loss_at(orig - 1e-5)) / 2e-5;
        ok = check(std::abs(gW[layer].data[k] - fd) / std::max(1.0, std::abs(fd)) <= 1e-4,
                   "mlp gradient probe failed", d);
      }
    }
    return ok;
  });

  h.run(7, "feature importance: distribution sums to 1, decisive feature >= 0.9", [](std::string& d) {
    Rng rng(1007);
    const std::size_t n = 400, m = 6;
    Matrix X(n, m);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) X.at(i, j) = rng.uniform(-1.0, 1.0);
      const int flag = static_cast<int>(rng.below(2));
      X.at(i, 3) = flag;
      y[i] = flag;
    }
    ForestParams p;
    p.n_tree = 80;
    p.seed = 7;
    const ForestModel f = fit_random_forest(X, y, p);
    double sum = 0.0;
    bool ok = true;
    for (const double v : f.feature_importances) {
      ok = ok && check(v >= 0.0, "negative importance", d);
      sum += v;
    }
    return ok && check(std::abs(sum - 1.0) <= 1e-9, "importances do not sum to 1", d) &&
           check(f.feature_importances[3] >= 0.9,
                 "decisive importance " + format_double(f.feature_importances[3]), d);
  });

  h.run(8, "labels and top-2 selections match brute-force scans on 1000 random cases", [](std::string& d) {
    Rng rng(1008);
    bool ok = true;
    for (int rep = 0; rep < 1000 && ok; ++rep) {
      const int n_days = 28 + static_cast<int>(rng.below(4));
      std::vector<double> maxima(static_cast<std::size_t>(n_days));
      for (auto& v : maxima) v = rng.below(6) == 0 ? 1000.0 : rng.uniform(800.0, 1500.0);
      const auto direct = label_direct(maxima);
      const std::size_t best = oracle::argmax_earliest(maxima);
      for (std::size_t i = 0; i < maxima.size() && ok; ++i)
        ok = check(direct[i] == (i == best ? 1 : 0), "label_direct mismatch", d);
      for (int day = 1; day <= n_days && ok; ++day) {
        const int win = std::min(day + 6, n_days);
        std::size_t wbest = 0;
        for (std::size_t i = 1; i < static_cast<std::size_t>(win); ++i)
          if (maxima[i] > maxima[wbest]) wbest = i;
        ok = check(label_up_to_date(maxima, day, n_days) ==
                       (wbest == static_cast<std::size_t>(day - 1) ? 1 : 0),
                   "label_up_to_date mismatch", d);
      }
      // Daily peak-hour label and top-2 selection.
      std::array<double, 24> hours{};
      for (auto& v : hours) v = rng.below(5) == 0 ? 1000.0 : rng.uniform(500.0, 2000.0);
      const auto [a, b] = oracle::top2_earliest(hours);
      const auto sel = top2_hours(hours);
      ok = ok && check(sel[0] == static_cast<int>(a) && sel[1] == static_cast<int>(b),
                       "top-2 mismatch", d);
    }
    return ok;
  });

  h.run(9,
        "synthetic benchmark: >=10/12 peak days avg, <=100 cycles/yr, model recall >= naive, < 5 min",
        [](std::string& d) {
          build_benchmark();
          const BacktestReport& r = g_benchmark.report;
          bool ok = check(g_benchmark.train_and_backtest_seconds < 300.0, "pipeline above 5 minutes", d);
          int hours_model = 0, hours_naive = 0, days = 0;
          std::ostringstream detail;
          for (const auto& y : r.years) {
            ok = ok && check(y.months_counted == 12, "incomplete testing year", d) &&
                 check(y.cycles <= 100, "year " + std::to_string(y.year) + " used " +
                                            std::to_string(y.cycles) + " cycles", d);
            hours_model += y.peak_hours_captured;
            hours_naive += y.naive_hours_on_captured;
            days += y.peak_days_captured;
            detail << y.year << ":" << y.cycles << "c/" << y.peak_days_captured << "d/"
                   << y.peak_hours_captured << "h ";
          }
          ok = ok && check(r.avg_peak_days >= 10.0,
                           "avg peak days " + format_double(r.avg_peak_days), d);
          ok = ok && check(days > 0 && hours_model >= hours_naive,
                           "model recall below naive on captured days (" +
                               std::to_string(hours_model) + " vs " + std::to_string(hours_naive) + ")",
                           d);
          if (ok)
            d = detail.str() + "| avg " + format_double(r.avg_cycles) + " cycles, " +
                format_double(r.avg_peak_days) + " days, " + format_double(r.avg_peak_hours) +
                " hours, " + format_double(g_benchmark.train_and_backtest_seconds) + "s";
          return ok;
        });

  h.run(10, "cycles and captured days are non-increasing in the threshold", [](std::string& d) {
    if (!g_benchmark.ready) build_benchmark();
    const double thresholds[5] = {0.01, 0.03, 0.075, 0.12, 0.20};
    long prev_cycles = -1, prev_days = -1;
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      BacktestConfig bc;
      bc.years = kTestYears;
      bc.threshold = thresholds[i];
      bc.kind = PeakDayKind::indirect;
      const BacktestReport r = run_backtest(g_benchmark.models, g_benchmark.table, bc);
      long cycles = 0, days = 0;
      for (const auto& y : r.years) {
        cycles += y.cycles;
        days += y.peak_days_captured;
      }
      if (i > 0) {
        ok = check(cycles <= prev_cycles, "cycles increased with the threshold", d) &&
             check(days <= prev_days, "captured days increased with the threshold", d);
      }
      prev_cycles = cycles;
      prev_days = days;
    }
    return ok;
  });

  h.run(11, "pca: reconstruction and orthonormality to 1e-8, scale-invariant ratios", [](std::string& d) {
    Rng rng(1011);
    Matrix X(80, 6);
    for (auto& v : X.data) v = rng.uniform(-3.0, 3.0);
    for (std::size_t i = 0; i < X.n_rows; ++i) X.at(i, 2) = 0.6 * X.at(i, 0) + 0.4 * X.at(i, 2);
    const PcaResult p = pca(X, 6);
    bool ok = true;
    for (std::size_t a = 0; a < 6 && ok; ++a)
      for (std::size_t b = 0; b < 6 && ok; ++b) {
        double dot = 0;
        for (std::size_t j = 0; j < 6; ++j) dot += p.loadings.at(j, a) * p.loadings.at(j, b);
        ok = check(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-8, "loadings not orthonormal", d);
      }
    const Matrix recon = pca_reconstruct_standardized(p, X);
    for (std::size_t i = 0; i < X.n_rows && ok; ++i)
      for (std::size_t j = 0; j < 6 && ok; ++j) {
        const double z = (X.at(i, j) - p.mean[j]) / p.scale[j];
        ok = check(std::abs(recon.at(i, j) - z) <= 1e-8, "reconstruction error above 1e-8", d);
      }
    Matrix scaled = X;
    for (std::size_t i = 0; i < X.n_rows; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        scaled.at(i, j) = X.at(i, j) * (0.001 + 17.0 * static_cast<double>(j)) - 3.0 * static_cast<double>(j);
    const PcaResult q = pca(scaled, 6);
    for (std::size_t c = 0; c < 6 && ok; ++c)
      ok = check(std::abs(q.explained_variance_ratio[c] - p.explained_variance_ratio[c]) <= 1e-9,
                 "variance ratios changed under rescaling", d);
    return ok;
  });

  h.run(12, "two identical pipeline runs produce byte-identical manifests", [](std::string& d) {
    const fs::path work = fs::temp_directory_path() / "peakcast_acceptance_repro";
    fs::remove_all(work);
    const std::string cfg_text = std::string(R"({
  "seed": 202,
  "workdir": ")") + work.generic_string() + R"(",
  "data": {"synthetic": {"start_year": 2005, "end_year": 2009, "seed": 9}},
  "train_years": [2005, 2006, 2007, 2008],
  "test_years": [2009],
  "augment": {"train_begin": "2005-01-01", "train_end": "2005-12-31",
              "gen_begin": "2005-06-01", "gen_end": "2005-06-30", "epochs": 5},
  "learner": {"kind": "rf", "n_tree": 25, "max_depth": 10},
  "threshold": 0.03,
  "kind": "indirect",
  "write_features": false,
  "write_report": true
})";
    const PipelineConfig cfg = parse_pipeline_config(cfg_text);
    const PipelineResult r1 = run_pipeline(cfg, cfg_text);
    const std::string m1 = read_file(r1.manifest_path);
    const PipelineResult r2 = run_pipeline(cfg, cfg_text);
    const std::string m2 = read_file(r2.manifest_path);
    fs::remove_all(work);
    return check(!m1.empty() && m1 == m2, "manifests differ", d);
  });

  if (h.failures == 0) {
    std::printf("all %d criteria passed\n", 12);
    return 0;
  }
  std::printf("%d criteria FAILED\n", h.failures);
  return 1;
}
