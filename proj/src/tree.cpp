#include "peakcast/tree.hpp"

#include <algorithm>
#include <numeric>

#include "peakcast/errors.hpp"

namespace peakcast {

namespace {

double gini_from_counts(long c0, long c1) {
  const long n = c0 + c1;
  if (n == 0) return 0.0;
  const double p0 = static_cast<double>(c0) / static_cast<double>(n);
  const double p1 = static_cast<double>(c1) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
};

struct FitContext {
  const Matrix& X;
  const Labels& y;
  TreeParams params;
  Rng* rng;
  std::vector<double>* importance;
  std::size_t n_total;
  std::vector<int> feature_scratch;
  std::vector<std::pair<double, int>> sort_scratch;  // (value, label)
};

// Exhaustive best split over the candidate features: sort the node's values
// per feature and scan boundaries between distinct values.
Split best_split(FitContext& ctx, std::span<const std::size_t> idx, long c0, long c1) {
  const long n = static_cast<long>(idx.size());
  const double parent_gini = gini_from_counts(c0, c1);

  auto& features = ctx.feature_scratch;
  features.resize(ctx.X.n_cols);
  std::iota(features.begin(), features.end(), 0);
  if (ctx.params.m_try > 0 && ctx.params.m_try < static_cast<int>(ctx.X.n_cols)) {
    for (int k = 0; k < ctx.params.m_try; ++k) {
      const int j = k + static_cast<int>(ctx.rng->below(features.size() - static_cast<std::size_t>(k)));
      std::swap(features[static_cast<std::size_t>(k)], features[static_cast<std::size_t>(j)]);
    }
    features.resize(static_cast<std::size_t>(ctx.params.m_try));
    // Deterministic tie-breaking independent of the sampling order.
    std::sort(features.begin(), features.end());
  }

  Split best;
  auto& vals = ctx.sort_scratch;
  for (int f : features) {
    vals.clear();
    for (const std::size_t i : idx) vals.emplace_back(ctx.X.at(i, static_cast<std::size_t>(f)), ctx.y[i]);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (vals.front().first == vals.back().first) continue;  // constant within node

    long left0 = 0, left1 = 0;
    for (long i = 1; i < n; ++i) {
      if (vals[static_cast<std::size_t>(i - 1)].second == 1)
        ++left1;
      else
        ++left0;
      if (vals[static_cast<std::size_t>(i - 1)].first == vals[static_cast<std::size_t>(i)].first) continue;
      const long nl = i, nr = n - i;
      if (nl < ctx.params.min_leaf || nr < ctx.params.min_leaf) continue;
      const double decrease = parent_gini -
                              (static_cast<double>(nl) * gini_from_counts(left0, left1) +
                               static_cast<double>(nr) * gini_from_counts(c0 - left0, c1 - left1)) /
                                  static_cast<double>(n);
      if (decrease > best.decrease) {  // strict improvement; first max wins ties
        best.found = true;
        best.feature = f;
        best.threshold = (vals[static_cast<std::size_t>(i - 1)].first + vals[static_cast<std::size_t>(i)].first) / 2.0;
        best.decrease = decrease;
      }
    }
  }
  return best;
}

TreeNodePtr grow(FitContext& ctx, std::vector<std::size_t>& idx, int depth) {
  long c1 = 0;
  for (const std::size_t i : idx) c1 += ctx.y[i];
  const long c0 = static_cast<long>(idx.size()) - c1;

  auto leaf = [&]() {
    auto node = std::make_unique<TreeNode>();
    node->count0 = c0;
    node->count1 = c1;
    node->value = static_cast<double>(c1) / static_cast<double>(c0 + c1);
    return node;
  };

  if (c0 == 0 || c1 == 0 || depth >= ctx.params.max_depth ||
      static_cast<long>(idx.size()) < 2 * ctx.params.min_leaf)
    return leaf();

  const Split split = best_split(ctx, idx, c0, c1);
  if (!split.found) return leaf();

  if (ctx.importance)
    (*ctx.importance)[static_cast<std::size_t>(split.feature)] +=
        split.decrease * static_cast<double>(idx.size()) / static_cast<double>(ctx.n_total);

  std::vector<std::size_t> left_idx, right_idx;
  left_idx.reserve(idx.size());
  right_idx.reserve(idx.size());
  for (const std::size_t i : idx) {
    if (ctx.X.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold)
      left_idx.push_back(i);
    else
      right_idx.push_back(i);
  }
  idx.clear();
  idx.shrink_to_fit();

  auto node = std::make_unique<TreeNode>();
  node->feature = split.feature;
  node->threshold = split.threshold;
  node->count0 = c0;
  node->count1 = c1;
  node->left = grow(ctx, left_idx, depth + 1);
  node->right = grow(ctx, right_idx, depth + 1);
  return node;
}

}  // namespace

TreeNodePtr fit_tree(const Matrix& X, const Labels& y, const TreeParams& params, Rng* rng,
                     std::vector<double>* importance_acc) {
  if (X.n_rows == 0 || X.n_cols == 0) raise(errc::empty_data, "fit_tree: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_tree: label count mismatch");
  for (const int v : y)
    if (v != 0 && v != 1) raise(errc::domain_error, "fit_tree: labels must be 0 or 1");
  if (params.m_try > 0 && rng == nullptr)
    raise(errc::domain_error, "fit_tree: m_try sampling requires an rng");
  if (importance_acc) importance_acc->resize(X.n_cols, 0.0);

  FitContext ctx{X, y, params, rng, importance_acc, X.n_rows, {}, {}};
  std::vector<std::size_t> idx(X.n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  return grow(ctx, idx, 0);
}

double predict_tree(const TreeNode& root, std::span<const double> x) {
  const TreeNode* node = &root;
  while (!node->is_leaf())
    node = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left.get()
                                                                         : node->right.get();
  return node->value;
}

int tree_depth(const TreeNode& root) {
  if (root.is_leaf()) return 0;
  return 1 + std::max(tree_depth(*root.left), tree_depth(*root.right));
}

int tree_leaf_count(const TreeNode& root) {
  if (root.is_leaf()) return 1;
  return tree_leaf_count(*root.left) + tree_leaf_count(*root.right);
}

}  // namespace peakcast
