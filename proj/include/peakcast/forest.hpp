#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "peakcast/tree.hpp"

namespace peakcast {

struct ForestParams {
  int n_tree = 500;
  int max_depth = 60;
  int m_try = 0;  // 0 = ceil(sqrt(n_features))
  int min_leaf = 1;
  bool bootstrap = true;      // with replacement, sample size = |X|
  bool stratified = false;    // force at least one positive into each bootstrap
  std::uint64_t seed = 0;
  int n_threads = 0;  // 0 = hardware concurrency
};

struct ForestModel {
  ForestParams params;
  int n_features = 0;
  std::vector<TreeNodePtr> trees;
  std::vector<double> feature_importances;  // non-negative, sums to 1
};

// Bagged CART ensemble: each tree is grown on a bootstrap sample with m_try
// predictors sampled per split. Tree seeds derive from the master seed by
// tree index, so results are identical for any thread count.
ForestModel fit_random_forest(const Matrix& X, const Labels& y, ForestParams params);

// Fraction of trees voting class 1 (a tree votes 1 when its leaf probability
// is >= 0.5). Classify via p >= 0.5.
double predict_proba_forest(const ForestModel& model, std::span<const double> x);
int predict_forest(const ForestModel& model, std::span<const double> x);

const std::vector<double>& feature_importance(const ForestModel& model);

}  // namespace peakcast
