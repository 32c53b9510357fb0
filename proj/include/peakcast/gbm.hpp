#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "peakcast/tree.hpp"

namespace peakcast {

struct GbmParams {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_leaf = 1;
};

// Logistic-loss boosting. Each round fits a regression tree to the residuals
// y - p, with leaf values from one Newton step (sum of residuals over sum of
// p(1-p), denominator floored at 1e-6) scaled by the learning rate. Leaf
// values are stored already scaled, so prediction is base_score plus the sum
// of leaf values.
struct GbmModel {
  GbmParams params;
  int n_features = 0;
  double base_score = 0.0;  // empirical log-odds
  std::vector<TreeNodePtr> trees;
  // Training log-loss: entry 0 is the base model, entry r is after round r.
  std::vector<double> train_log_loss;
};

GbmModel fit_gbm(const Matrix& X, const Labels& y, const GbmParams& params);

double predict_proba_gbm(const GbmModel& model, std::span<const double> x);
double predict_margin_gbm(const GbmModel& model, std::span<const double> x);

}  // namespace peakcast
