#include "peakcast/forest.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "peakcast/errors.hpp"

namespace peakcast {

namespace {

TreeNodePtr fit_one_tree(const Matrix& X, const Labels& y, const ForestParams& params,
                         std::span<const std::size_t> positives, std::uint64_t tree_seed,
                         std::vector<double>& importance_acc) {
  Rng rng(tree_seed);
  const std::size_t n = X.n_rows;

  Matrix Xb;
  Labels yb;
  const Matrix* Xp = &X;
  const Labels* yp = &y;
  if (params.bootstrap) {
    std::vector<std::size_t> pick(n);
    bool has_positive = false;
    for (std::size_t i = 0; i < n; ++i) {
      pick[i] = static_cast<std::size_t>(rng.below(n));
      has_positive = has_positive || y[pick[i]] == 1;
    }
    if (params.stratified && !has_positive && !positives.empty()) {
      // Guaranteed at least one positive per bootstrap; peak-day labels run
      // about one positive per 30 rows.
      pick[static_cast<std::size_t>(rng.below(n))] =
          positives[static_cast<std::size_t>(rng.below(positives.size()))];
    }
    Xb = Matrix(n, X.n_cols);
    yb.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = X.row(pick[i]);
      std::copy(src.begin(), src.end(), Xb.row(i).begin());
      yb[i] = y[pick[i]];
    }
    Xp = &Xb;
    yp = &yb;
  }

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.m_try = params.m_try;
  return fit_tree(*Xp, *yp, tp, &rng, &importance_acc);
}

}  // namespace

ForestModel fit_random_forest(const Matrix& X, const Labels& y, ForestParams params) {
  if (X.n_rows == 0 || X.n_cols == 0) raise(errc::empty_data, "fit_random_forest: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_random_forest: label count mismatch");
  if (params.n_tree < 1) raise(errc::domain_error, "fit_random_forest: n_tree must be >= 1");
  if (params.m_try == 0)
    params.m_try = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(X.n_cols))));
  params.m_try = std::min(params.m_try, static_cast<int>(X.n_cols));

  std::vector<std::size_t> positives;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] == 1) positives.push_back(i);

  ForestModel model;
  model.params = params;
  model.n_features = static_cast<int>(X.n_cols);
  model.trees.resize(static_cast<std::size_t>(params.n_tree));

  std::vector<std::vector<double>> importances(static_cast<std::size_t>(params.n_tree));

  unsigned n_threads = params.n_threads > 0 ? static_cast<unsigned>(params.n_threads)
                                            : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(params.n_tree));

  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= params.n_tree) break;
      model.trees[static_cast<std::size_t>(t)] =
          fit_one_tree(X, y, params, positives, derive_seed(params.seed, static_cast<std::uint64_t>(t)),
                       importances[static_cast<std::size_t>(t)]);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  model.feature_importances.assign(X.n_cols, 0.0);
  for (const auto& imp : importances)
    for (std::size_t f = 0; f < imp.size(); ++f) model.feature_importances[f] += imp[f];
  const double total = std::accumulate(model.feature_importances.begin(),
                                       model.feature_importances.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : model.feature_importances) v /= total;
  } else {
    // No split anywhere (pure or degenerate data): no feature carries
    // information, report the uniform vector.
    for (auto& v : model.feature_importances) v = 1.0 / static_cast<double>(X.n_cols);
  }
  return model;
}

double predict_proba_forest(const ForestModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.n_features)
    raise(errc::arity_mismatch, "predict_proba_forest: expected " + std::to_string(model.n_features) +
                                    " features, got " + std::to_string(x.size()));
  int votes = 0;
  for (const auto& tree : model.trees)
    if (predict_tree(*tree, x) >= 0.5) ++votes;
  return static_cast<double>(votes) / static_cast<double>(model.trees.size());
}

int predict_forest(const ForestModel& model, std::span<const double> x) {
  return predict_proba_forest(model, x) >= 0.5 ? 1 : 0;
}

const std::vector<double>& feature_importance(const ForestModel& model) {
  return model.feature_importances;
}

}  // namespace peakcast
