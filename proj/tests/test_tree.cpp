#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/rng.hpp"
#include "peakcast/tree.hpp"

using namespace peakcast;

namespace {

std::pair<Matrix, Labels> random_dataset(Rng& rng, std::size_t max_rows = 200, std::size_t max_cols = 8) {
  const std::size_t n = 10 + rng.below(max_rows - 9);
  const std::size_t m = 1 + rng.below(max_cols);
  Matrix X(n, m);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      // A mix of continuous and low-cardinality values makes threshold ties common.
      X.at(i, j) = rng.below(4) == 0 ? static_cast<double>(rng.below(3)) : rng.uniform(-2.0, 2.0);
    }
    y[i] = static_cast<int>(rng.below(2));
  }
  return {std::move(X), std::move(y)};
}

}  // namespace

TEST_CASE("a single binary feature separates in one split") {
  Matrix X(40, 2);
  Labels y(40);
  Rng rng(3);
  for (std::size_t i = 0; i < 40; ++i) {
    const int flag = static_cast<int>(rng.below(2));
    X.at(i, 0) = rng.uniform(-1.0, 1.0);  // noise
    X.at(i, 1) = flag;
    y[i] = flag;
  }
  const auto root = fit_tree(X, y, TreeParams{});
  CHECK(root->feature == 1);
  CHECK(tree_depth(*root) == 1);
  for (std::size_t i = 0; i < 40; ++i)
    CHECK((predict_tree(*root, X.row(i)) >= 0.5 ? 1 : 0) == y[i]);
}

TEST_CASE("pure labels give a single leaf") {
  Matrix X(10, 3);
  Labels y(10, 1);
  Rng rng(4);
  for (auto& v : X.data) v = rng.uniform(0.0, 1.0);
  const auto root = fit_tree(X, y, TreeParams{});
  CHECK(root->is_leaf());
  CHECK(root->value == 1.0);
}

TEST_CASE("all-constant features give a single leaf, not an error") {
  Matrix X(12, 2, 3.5);
  Labels y(12);
  for (std::size_t i = 0; i < 12; ++i) y[i] = i % 2;
  const auto root = fit_tree(X, y, TreeParams{});
  CHECK(root->is_leaf());
  CHECK(root->value == 0.5);
}

TEST_CASE("root split equals brute-force enumeration on 100 random datasets") {
  Rng rng(1234);
  for (int rep = 0; rep < 100; ++rep) {
    auto [X, y] = random_dataset(rng);
    const auto expected = oracle::best_split_enumeration(X, y);
    const auto root = fit_tree(X, y, TreeParams{});
    if (!expected.found) {
      CHECK(root->is_leaf());
      continue;
    }
    REQUIRE_FALSE(root->is_leaf());
    CHECK(root->feature == expected.feature);
    CHECK(root->threshold == doctest::Approx(expected.threshold).epsilon(1e-12));
    // Recompute the decrease of the chosen split and compare values.
    long c0 = 0, c1 = 0, l0 = 0, l1 = 0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
      (y[i] == 1 ? c1 : c0) += 1;
      if (X.at(i, static_cast<std::size_t>(root->feature)) <= root->threshold) (y[i] == 1 ? l1 : l0) += 1;
    }
    const double chosen =
        oracle::gini(c0, c1) - (double(l0 + l1) * oracle::gini(l0, l1) +
                                double(c0 + c1 - l0 - l1) * oracle::gini(c0 - l0, c1 - l1)) /
                                   double(c0 + c1);
    CHECK(chosen == doctest::Approx(expected.decrease).epsilon(1e-12));
  }
}

TEST_CASE("min_leaf is respected") {
  Rng rng(9);
  auto [X, y] = random_dataset(rng, 120, 4);
  TreeParams p;
  p.min_leaf = 7;
  const auto root = fit_tree(X, y, p);
  // Walk all leaves and check sizes.
  std::vector<const TreeNode*> stack{root.get()};
  while (!stack.empty()) {
    const TreeNode* n = stack.back();
    stack.pop_back();
    if (n->is_leaf()) {
      CHECK(n->count0 + n->count1 >= 7);
    } else {
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
  }
}

TEST_CASE("max_depth bounds the tree") {
  Rng rng(10);
  auto [X, y] = random_dataset(rng, 150, 5);
  TreeParams p;
  p.max_depth = 2;
  const auto root = fit_tree(X, y, p);
  CHECK(tree_depth(*root) <= 2);
}

TEST_CASE("leaf probabilities are class fractions") {
  Rng rng(11);
  auto [X, y] = random_dataset(rng, 80, 3);
  TreeParams p;
  p.max_depth = 3;
  const auto root = fit_tree(X, y, p);
  std::vector<const TreeNode*> stack{root.get()};
  while (!stack.empty()) {
    const TreeNode* n = stack.back();
    stack.pop_back();
    if (n->is_leaf()) {
      CHECK(n->value == doctest::Approx(double(n->count1) / double(n->count0 + n->count1)));
    } else {
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
  }
}

TEST_CASE("input validation") {
  Matrix empty;
  Labels y;
  CHECK_THROWS_AS(fit_tree(empty, y, TreeParams{}), Error);
  Matrix X(3, 1);
  CHECK_THROWS_AS(fit_tree(X, Labels{0, 1}, TreeParams{}), Error);
  CHECK_THROWS_AS(fit_tree(X, Labels{0, 1, 2}, TreeParams{}), Error);
  TreeParams with_mtry;
  with_mtry.m_try = 1;
  CHECK_THROWS_AS(fit_tree(X, Labels{0, 1, 1}, with_mtry, nullptr), Error);
}
