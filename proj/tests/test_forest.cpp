#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/forest.hpp"
#include "peakcast/model_io.hpp"
#include "peakcast/rng.hpp"

using namespace peakcast;

namespace {

// Labels determined by a smooth rule of two features plus noise features.
std::pair<Matrix, Labels> toy_separable(Rng& rng, std::size_t n, std::size_t extra_noise = 2) {
  Matrix X(n, 2 + extra_noise);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    X.at(i, 0) = a;
    X.at(i, 1) = b;
    for (std::size_t j = 0; j < extra_noise; ++j) X.at(i, 2 + j) = rng.uniform(-1.0, 1.0);
    y[i] = (a + 0.5 * b > 0.1) ? 1 : 0;
  }
  return {std::move(X), std::move(y)};
}

}  // namespace

TEST_CASE("degenerate forest equals a single tree") {
  Rng rng(5);
  auto [X, y] = toy_separable(rng, 60);
  ForestParams p;
  p.n_tree = 1;
  p.bootstrap = false;
  p.m_try = static_cast<int>(X.n_cols);
  p.seed = 9;
  const ForestModel forest = fit_random_forest(X, y, p);
  const auto tree = fit_tree(X, y, TreeParams{.max_depth = p.max_depth, .min_leaf = 1, .m_try = 0});
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    const double pf = predict_proba_forest(forest, X.row(i));
    const double pt = predict_tree(*tree, X.row(i)) >= 0.5 ? 1.0 : 0.0;
    CHECK(pf == pt);
  }
}

TEST_CASE("same seed gives bit-identical forests") {
  Rng rng(6);
  auto [X, y] = toy_separable(rng, 80);
  ForestParams p;
  p.n_tree = 25;
  p.max_depth = 8;
  p.seed = 1234;
  ForestModel a = fit_random_forest(X, y, p);
  p.n_threads = 1;  // thread count must not matter
  ForestModel b = fit_random_forest(X, y, p);

  const auto to_bytes = [](ForestModel m) {
    ModelBundle bundle;
    bundle.task = "peak_day_direct";
    bundle.month = 1;
    bundle.classifier = make_classifier(std::move(m));
    return bundle_to_json(bundle);
  };
  CHECK(to_bytes(std::move(a)) == to_bytes(std::move(b)));
}

TEST_CASE("different seeds give different forests") {
  Rng rng(61);
  auto [X, y] = toy_separable(rng, 80);
  ForestParams p;
  p.n_tree = 10;
  p.seed = 1;
  const ForestModel a = fit_random_forest(X, y, p);
  p.seed = 2;
  const ForestModel b = fit_random_forest(X, y, p);
  bool any_diff = false;
  for (std::size_t i = 0; i < X.n_rows && !any_diff; ++i)
    any_diff = predict_proba_forest(a, X.row(i)) != predict_proba_forest(b, X.row(i));
  CHECK(any_diff);
}

TEST_CASE("forest probability is the vote fraction") {
  Rng rng(7);
  auto [X, y] = toy_separable(rng, 100);
  ForestParams p;
  p.n_tree = 33;
  p.max_depth = 6;
  p.seed = 99;
  const ForestModel forest = fit_random_forest(X, y, p);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(X.n_cols);
    for (auto& v : x) v = rng.uniform(-1.2, 1.2);
    int votes = 0;
    for (const auto& t : forest.trees)
      if (predict_tree(*t, x) >= 0.5) ++votes;
    CHECK(predict_proba_forest(forest, x) == doctest::Approx(double(votes) / 33.0).epsilon(1e-15));
  }
  // Probability lands on the vote lattice {0, 1/33, ..., 1}.
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(X.n_cols);
    for (auto& v : x) v = rng.uniform(-1.2, 1.2);
    const double p33 = predict_proba_forest(forest, x) * 33.0;
    CHECK(p33 == doctest::Approx(std::round(p33)).epsilon(1e-12));
  }
}

TEST_CASE("held-out accuracy on separable data is at least 0.95") {
  Rng rng(8);
  auto [X, y] = toy_separable(rng, 400);
  ForestParams p;
  p.n_tree = 50;
  p.seed = 2024;
  const ForestModel forest = fit_random_forest(X, y, p);
  auto [Xte, yte] = toy_separable(rng, 400);
  long correct = 0;
  for (std::size_t i = 0; i < Xte.n_rows; ++i)
    correct += predict_forest(forest, Xte.row(i)) == yte[i];
  CHECK(double(correct) / double(Xte.n_rows) >= 0.95);
}

TEST_CASE("feature importances are a distribution concentrated on the signal") {
  Rng rng(12);
  const std::size_t n = 300;
  Matrix X(n, 5);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int flag = static_cast<int>(rng.below(2));
    X.at(i, 0) = rng.uniform(-1.0, 1.0);
    X.at(i, 1) = rng.uniform(-1.0, 1.0);
    X.at(i, 2) = flag;  // decisive
    X.at(i, 3) = rng.uniform(-1.0, 1.0);
    X.at(i, 4) = rng.uniform(-1.0, 1.0);
    y[i] = flag;
  }
  ForestParams p;
  p.n_tree = 60;
  p.seed = 5;
  const ForestModel forest = fit_random_forest(X, y, p);
  const auto& imp = feature_importance(forest);
  REQUIRE(imp.size() == 5);
  double sum = 0;
  for (const double v : imp) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(imp[2] >= 0.9);
}

TEST_CASE("two redundant copies of the signal share importance") {
  // Across seeds, two identical-information features should split importance
  // roughly evenly.
  Rng rng(13);
  const std::size_t n = 250;
  Matrix X(n, 3);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    X.at(i, 0) = a;
    X.at(i, 1) = a + rng.uniform(-1e-3, 1e-3);  // near-duplicate
    X.at(i, 2) = rng.uniform(-1.0, 1.0);
    y[i] = a > 0 ? 1 : 0;
  }
  double imp0 = 0, imp1 = 0;
  const int n_seeds = 8;
  for (int s = 0; s < n_seeds; ++s) {
    ForestParams p;
    p.n_tree = 40;
    p.m_try = 1;  // force both copies to be used
    p.seed = static_cast<std::uint64_t>(s);
    const ForestModel f = fit_random_forest(X, y, p);
    imp0 += f.feature_importances[0];
    imp1 += f.feature_importances[1];
  }
  imp0 /= n_seeds;
  imp1 /= n_seeds;
  CHECK(std::abs(imp0 - imp1) < 0.15);
  CHECK(imp0 + imp1 > 0.8);
}

TEST_CASE("stratified bootstrap guarantees a positive in every tree") {
  Rng rng(14);
  const std::size_t n = 200;
  Matrix X(n, 3);
  Labels y(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 3; ++j) X.at(i, j) = rng.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < 3; ++i) y[i * 50] = 1;  // 3 positives in 200 rows
  ForestParams p;
  p.n_tree = 100;
  p.stratified = true;
  p.seed = 3;
  const ForestModel forest = fit_random_forest(X, y, p);
  for (const auto& t : forest.trees) CHECK(t->count1 >= 1);
}

TEST_CASE("arity mismatch raises") {
  Rng rng(15);
  auto [X, y] = toy_separable(rng, 30);
  ForestParams p;
  p.n_tree = 3;
  const ForestModel forest = fit_random_forest(X, y, p);
  std::vector<double> short_x(X.n_cols - 1, 0.0);
  CHECK_THROWS_AS(predict_proba_forest(forest, short_x), Error);
}
