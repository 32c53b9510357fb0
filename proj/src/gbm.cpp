#include "peakcast/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakcast/errors.hpp"

namespace peakcast {

namespace {

constexpr double kHessianFloor = 1e-6;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double log_loss(std::span<const double> margin, const Labels& y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = std::clamp(sigmoid(margin[i]), 1e-12, 1.0 - 1e-12);
    loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return loss / static_cast<double>(y.size());
}

struct ResidualTreeContext {
  const Matrix& X;
  std::span<const double> grad;  // residuals y - p
  std::span<const double> hess;  // p (1 - p)
  const GbmParams& params;
  std::vector<std::pair<double, std::size_t>> sort_scratch;  // (value, row)
};

// Regression tree on the residuals: splits maximize the squared-error
// reduction of the residual fit, leaves take the Newton step.
TreeNodePtr grow_residual_tree(ResidualTreeContext& ctx, std::vector<std::size_t>& idx, int depth) {
  const long n = static_cast<long>(idx.size());
  double sum_g = 0.0, sum_h = 0.0;
  for (const std::size_t i : idx) {
    sum_g += ctx.grad[i];
    sum_h += ctx.hess[i];
  }

  auto leaf = [&]() {
    auto node = std::make_unique<TreeNode>();
    node->value = ctx.params.learning_rate * sum_g / std::max(sum_h, kHessianFloor);
    return node;
  };

  if (depth >= ctx.params.max_depth || n < 2 * ctx.params.min_leaf) return leaf();

  // SSE reduction of fitting a constant per side: sum_l^2/n_l + sum_r^2/n_r - sum^2/n.
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  auto& vals = ctx.sort_scratch;
  for (std::size_t f = 0; f < ctx.X.n_cols; ++f) {
    vals.clear();
    for (const std::size_t i : idx) vals.emplace_back(ctx.X.at(i, f), i);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (vals.front().first == vals.back().first) continue;

    double left_sum = 0.0;
    for (long i = 1; i < n; ++i) {
      left_sum += ctx.grad[vals[static_cast<std::size_t>(i - 1)].second];
      if (vals[static_cast<std::size_t>(i - 1)].first == vals[static_cast<std::size_t>(i)].first) continue;
      const long nl = i, nr = n - i;
      if (nl < ctx.params.min_leaf || nr < ctx.params.min_leaf) continue;
      const double right_sum = sum_g - left_sum;
      const double gain = left_sum * left_sum / static_cast<double>(nl) +
                          right_sum * right_sum / static_cast<double>(nr) -
                          sum_g * sum_g / static_cast<double>(n);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = static_cast<int>(f);
        best_threshold = (vals[static_cast<std::size_t>(i - 1)].first + vals[static_cast<std::size_t>(i)].first) / 2.0;
      }
    }
  }
  if (best_feature < 0) return leaf();

  std::vector<std::size_t> left_idx, right_idx;
  left_idx.reserve(idx.size());
  right_idx.reserve(idx.size());
  for (const std::size_t i : idx) {
    if (ctx.X.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold)
      left_idx.push_back(i);
    else
      right_idx.push_back(i);
  }
  idx.clear();
  idx.shrink_to_fit();

  auto node = std::make_unique<TreeNode>();
  node->feature = best_feature;
  node->threshold = best_threshold;
  node->left = grow_residual_tree(ctx, left_idx, depth + 1);
  node->right = grow_residual_tree(ctx, right_idx, depth + 1);
  return node;
}

}  // namespace

GbmModel fit_gbm(const Matrix& X, const Labels& y, const GbmParams& params) {
  if (X.n_rows == 0 || X.n_cols == 0) raise(errc::empty_data, "fit_gbm: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_gbm: label count mismatch");
  if (params.n_rounds < 0) raise(errc::domain_error, "fit_gbm: n_rounds must be >= 0");

  GbmModel model;
  model.params = params;
  model.n_features = static_cast<int>(X.n_cols);

  const double positives =
      static_cast<double>(std::accumulate(y.begin(), y.end(), 0L));
  const double rate = std::clamp(positives / static_cast<double>(y.size()), 1e-6, 1.0 - 1e-6);
  model.base_score = std::log(rate / (1.0 - rate));

  std::vector<double> margin(X.n_rows, model.base_score);
  model.train_log_loss.reserve(static_cast<std::size_t>(params.n_rounds) + 1);
  model.train_log_loss.push_back(log_loss(margin, y));

  std::vector<double> grad(X.n_rows), hess(X.n_rows);
  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < X.n_rows; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = static_cast<double>(y[i]) - p;
      hess[i] = p * (1.0 - p);
    }
    ResidualTreeContext ctx{X, grad, hess, params, {}};
    std::vector<std::size_t> idx(X.n_rows);
    std::iota(idx.begin(), idx.end(), 0);
    TreeNodePtr tree = grow_residual_tree(ctx, idx, 0);

    for (std::size_t i = 0; i < X.n_rows; ++i) margin[i] += predict_tree(*tree, X.row(i));
    model.trees.push_back(std::move(tree));

    const double loss = log_loss(margin, y);
    if (!std::isfinite(loss)) raise(errc::non_finite_loss, "fit_gbm: non-finite training loss");
    model.train_log_loss.push_back(loss);
  }
  return model;
}

double predict_margin_gbm(const GbmModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.n_features)
    raise(errc::arity_mismatch, "predict_margin_gbm: feature arity mismatch");
  double z = model.base_score;
  for (const auto& tree : model.trees) z += predict_tree(*tree, x);
  return z;
}

double predict_proba_gbm(const GbmModel& model, std::span<const double> x) {
  return sigmoid(predict_margin_gbm(model, x));
}

}  // namespace peakcast
