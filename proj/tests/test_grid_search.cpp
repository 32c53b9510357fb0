#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peakcast/errors.hpp"
#include "peakcast/grid_search.hpp"
#include "peakcast/log.hpp"
#include "peakcast/rng.hpp"

using namespace peakcast;

namespace {

std::pair<Matrix, Labels> depth2_data(Rng& rng, std::size_t n) {
  // XOR-ish rule: needs two splits, deeper adds nothing.
  Matrix X(n, 3);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int a = static_cast<int>(rng.below(2));
    const int b = static_cast<int>(rng.below(2));
    X.at(i, 0) = a;
    X.at(i, 1) = b;
    X.at(i, 2) = rng.uniform(-1.0, 1.0);
    y[i] = (a ^ b);
  }
  return {std::move(X), std::move(y)};
}

}  // namespace

TEST_CASE("grid of one point returns it") {
  Rng rng(51);
  auto [X, y] = depth2_data(rng, 80);
  HyperGrid grid;
  grid.n_trees = {15};
  grid.max_depths = {4};
  const auto result = grid_search(LearnerKind::random_forest, X, y, grid, 3, 1);
  CHECK(result.best_n_tree == 15);
  CHECK(result.best_max_depth == 4);
  CHECK(result.accuracy.n_rows == 1);
  CHECK(result.accuracy.n_cols == 1);
  CHECK(result.best_accuracy == result.accuracy.at(0, 0));
}

TEST_CASE("accuracy surface matches the full grid shape") {
  Rng rng(52);
  auto [X, y] = depth2_data(rng, 60);
  HyperGrid grid;  // defaults: 6 tree counts x 5 depths
  grid.n_trees = {5, 10, 20, 50, 100, 200};  // scaled down for test speed
  const auto result = grid_search(LearnerKind::random_forest, X, y, grid, 3, 2);
  CHECK(result.accuracy.n_rows == 6);
  CHECK(result.accuracy.n_cols == 5);
  for (const double acc : result.accuracy.data) {
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
}

TEST_CASE("ties prefer the smaller model") {
  // With perfectly learnable data every grid point reaches accuracy 1, so the
  // smallest must win.
  Rng rng(53);
  const std::size_t n = 120;
  Matrix X(n, 2);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.at(i, 0) = static_cast<double>(i % 2);
    X.at(i, 1) = rng.uniform(-1.0, 1.0);
    y[i] = i % 2;
  }
  HyperGrid grid;
  grid.n_trees = {10, 50};
  grid.max_depths = {2, 8};
  const auto result = grid_search(LearnerKind::random_forest, X, y, grid, 4, 3);
  CHECK(result.best_accuracy == doctest::Approx(1.0));
  CHECK(result.best_n_tree == 10);
  CHECK(result.best_max_depth == 2);
}

TEST_CASE("too few positives falls back to fewer folds with a warning") {
  Rng rng(54);
  const std::size_t n = 60;
  Matrix X(n, 2);
  Labels y(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    X.at(i, 0) = rng.uniform(0.0, 1.0);
    X.at(i, 1) = rng.uniform(0.0, 1.0);
  }
  y[10] = 1;
  y[40] = 1;
  y[50] = 1;  // 3 positives < 5 folds
  HyperGrid grid;
  grid.n_trees = {5};
  grid.max_depths = {3};
  log::reset_warn_count();
  const auto result = grid_search(LearnerKind::random_forest, X, y, grid, 5, 4);
  CHECK(result.k_folds_used == 3);
  CHECK(log::warn_count() >= 1);

  Labels too_few(n, 0);
  too_few[5] = 1;
  CHECK_THROWS_AS(grid_search(LearnerKind::random_forest, X, too_few, grid, 5, 4), Error);
}

TEST_CASE("stratified folds put positives everywhere") {
  Rng rng(55);
  Labels y(90, 0);
  for (int i = 0; i < 9; ++i) y[static_cast<std::size_t>(i * 10)] = 1;
  const auto folds = stratified_folds(y, 3, rng);
  std::vector<int> pos_per_fold(3, 0), count(3, 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++count[static_cast<std::size_t>(folds[i])];
    if (y[i] == 1) ++pos_per_fold[static_cast<std::size_t>(folds[i])];
  }
  for (int f = 0; f < 3; ++f) {
    CHECK(pos_per_fold[static_cast<std::size_t>(f)] == 3);
    CHECK(count[static_cast<std::size_t>(f)] == 30);
  }
}

TEST_CASE("gbm learner works through the same interface") {
  Rng rng(56);
  auto [X, y] = depth2_data(rng, 70);
  HyperGrid grid;
  grid.n_trees = {20};
  grid.max_depths = {3};
  const auto result = grid_search(LearnerKind::gbm, X, y, grid, 3, 5);
  CHECK(result.best_accuracy > 0.8);
}

TEST_CASE("k_folds below 2 is rejected") {
  Matrix X(10, 1);
  Labels y(10, 0);
  y[0] = y[1] = 1;
  HyperGrid grid;
  CHECK_THROWS_AS(grid_search(LearnerKind::random_forest, X, y, grid, 1, 0), Error);
}
