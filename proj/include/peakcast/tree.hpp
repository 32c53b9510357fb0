#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "peakcast/matrix.hpp"
#include "peakcast/rng.hpp"

namespace peakcast {

// Binary CART node. Internal nodes carry a numeric threshold (x <= threshold
// goes left); categorical inputs enter as 0/1 indicator columns. Leaves carry
// the training class counts; the predicted probability is count1 / total.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  long count0 = 0;
  long count1 = 0;
  double value = 0.0;  // leaf: P(class 1); GBM leaf: additive log-odds step

  bool is_leaf() const { return feature < 0; }
};

using TreeNodePtr = std::unique_ptr<TreeNode>;

struct TreeParams {
  int max_depth = std::numeric_limits<int>::max();
  int min_leaf = 1;
  int m_try = 0;  // predictors sampled per split; 0 = all features
};

// Greedy Gini CART on binary labels. Split candidates are the midpoints of
// sorted unique feature values; the best impurity decrease wins, ties broken
// toward the lower feature index, then the lower threshold. Growth stops at
// max_depth, on pure nodes, or when min_leaf cannot be respected. A dataset
// with all-constant columns yields a single leaf.
//
// `rng` is required when m_try > 0 (per-split predictor sampling).
// `importance_acc`, when given, accumulates (n_node/n_total) * decrease per
// feature, the raw material of mean-impurity-decrease importances.
TreeNodePtr fit_tree(const Matrix& X, const Labels& y, const TreeParams& params, Rng* rng = nullptr,
                     std::vector<double>* importance_acc = nullptr);

// Probability of class 1 at the leaf reached by x.
double predict_tree(const TreeNode& root, std::span<const double> x);

int tree_depth(const TreeNode& root);
int tree_leaf_count(const TreeNode& root);

}  // namespace peakcast
