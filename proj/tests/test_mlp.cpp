#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/mlp.hpp"
#include "peakcast/rng.hpp"

using namespace peakcast;

TEST_CASE("zero-weight network predicts the output bias") {
  MlpConfig cfg;
  cfg.hidden = {4, 3};
  std::vector<Matrix> W{Matrix(2, 4), Matrix(4, 3), Matrix(3, 1)};
  std::vector<std::vector<double>> b{{0, 0, 0, 0}, {0, 0, 0}, {2.75}};
  const MlpModel m = MlpModel::from_weights(2, cfg, std::move(W), std::move(b));
  CHECK(predict_mlp(m, std::vector<double>{1.0, -3.0}) == doctest::Approx(2.75));
  CHECK(predict_mlp(m, std::vector<double>{100.0, 42.0}) == doctest::Approx(2.75));
}

TEST_CASE("backprop matches central finite differences") {
  Rng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 6 + rng.below(8);
    const int n_in = 3;
    MlpConfig cfg;
    cfg.hidden = {5, 4};
    cfg.activation = rep % 2 ? Activation::sigmoid : Activation::tanh;

    std::vector<Matrix> W{Matrix(3, 5), Matrix(5, 4), Matrix(4, 1)};
    std::vector<std::vector<double>> b{{}, {}, {}};
    b[0].resize(5);
    b[1].resize(4);
    b[2].resize(1);
    for (auto& w : W)
      for (auto& v : w.data) v = rng.uniform(-0.8, 0.8);
    for (auto& bias : b)
      for (auto& v : bias) v = rng.uniform(-0.3, 0.3);
    MlpModel m = MlpModel::from_weights(n_in, cfg, std::move(W), std::move(b));

    Matrix X(n, static_cast<std::size_t>(n_in));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < n_in; ++j) X.at(i, static_cast<std::size_t>(j)) = rng.uniform(-1.0, 1.0);
      y[i] = rng.uniform(-1.0, 1.0);
    }
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);

    std::vector<Matrix> gW;
    std::vector<std::vector<double>> gB;
    detail::mlp_loss_and_gradients(m, X, y, rows, gW, gB);

    // Probe 5 random weights per instance with central differences.
    for (int probe = 0; probe < 5; ++probe) {
      const std::size_t layer = rng.below(m.weights.size());
      const std::size_t k = rng.below(m.weights[layer].data.size());
      auto loss_at = [&](double v) {
        MlpModel probe_model = m;
        probe_model.weights[layer].data[k] = v;
        std::vector<Matrix> tw;
        std::vector<std::vector<double>> tb;
        return detail::mlp_loss_and_gradients(probe_model, X, y, rows, tw, tb);
      };
      const double orig = m.weights[layer].data[k];
      const double h = 1e-5;
      const double fd = (loss_at(orig + h) - loss_at(orig - h)) / (2.0 * h);
      const double analytic = gW[layer].data[k];
      const double denom = std::max(1.0, std::abs(fd));
      CHECK(std::abs(analytic - fd) / denom <= 1e-4);
    }
  }
}

TEST_CASE("fits a linear target to small error") {
  Rng rng(42);
  const std::size_t n = 100;
  Matrix X(n, 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.at(i, 0) = rng.uniform(-1.0, 1.0);
    y[i] = 2.0 * X.at(i, 0);
  }
  MlpConfig cfg;
  cfg.hidden = {20, 20};
  cfg.epochs = 400;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 16;
  cfg.seed = 7;
  const MlpModel m = fit_mlp(X, y, cfg);
  CHECK(m.train_rmse <= 0.05);
  CHECK(predict_mlp(m, std::vector<double>{0.5}) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("training is deterministic for a fixed seed") {
  Rng rng(43);
  const std::size_t n = 60;
  Matrix X(n, 2);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X.at(i, 0) = rng.uniform(-1.0, 1.0);
    X.at(i, 1) = rng.uniform(-1.0, 1.0);
    y[i] = std::sin(X.at(i, 0)) + 0.3 * X.at(i, 1);
  }
  MlpConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 99;
  const MlpModel a = fit_mlp(X, y, cfg);
  const MlpModel b = fit_mlp(X, y, cfg);
  REQUIRE(a.weights.size() == b.weights.size());
  for (std::size_t l = 0; l < a.weights.size(); ++l)
    CHECK(a.weights[l].data == b.weights[l].data);
  CHECK(a.train_rmse == b.train_rmse);
}

TEST_CASE("constant target collapses to the mean") {
  Matrix X(30, 2);
  Rng rng(44);
  for (auto& v : X.data) v = rng.uniform(0.0, 1.0);
  std::vector<double> y(30, 5.5);
  MlpConfig cfg;
  cfg.epochs = 30;
  const MlpModel m = fit_mlp(X, y, cfg);
  CHECK(m.train_rmse <= 1e-6);
  CHECK(predict_mlp(m, X.row(0)) == doctest::Approx(5.5).epsilon(1e-6));
}

TEST_CASE("diverging training raises non-finite loss") {
  Matrix X(20, 1);
  std::vector<double> y(20);
  Rng rng(45);
  for (std::size_t i = 0; i < 20; ++i) {
    X.at(i, 0) = rng.uniform(-1.0, 1.0);
    y[i] = 3.0 * X.at(i, 0);
  }
  MlpConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 1e4;  // force divergence
  CHECK_THROWS_AS(fit_mlp(X, y, cfg), Error);
}
