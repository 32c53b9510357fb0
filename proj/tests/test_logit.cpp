#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "peakcast/errors.hpp"
#include "peakcast/logit.hpp"
#include "peakcast/rng.hpp"

using namespace peakcast;

namespace {

std::pair<Matrix, Labels> logistic_data(Rng& rng, std::size_t n, std::vector<double> beta,
                                        double intercept) {
  const std::size_t m = beta.size();
  Matrix X(n, m);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = intercept;
    for (std::size_t j = 0; j < m; ++j) {
      X.at(i, j) = rng.uniform(-1.5, 1.5);
      z += beta[j] * X.at(i, j);
    }
    y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
  }
  return {std::move(X), std::move(y)};
}

}  // namespace

TEST_CASE("intercept-only on balanced labels predicts one half") {
  Matrix X(40, 1);
  Labels y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    X.at(i, 0) = 1.0;  // constant column, dropped
    y[i] = i % 2;
  }
  const LogitModel m = fit_logit_aic(X, y);
  CHECK(m.selected.empty());
  CHECK(m.coef[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(predict_proba_logit(m, std::vector<double>{123.0}) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 15 + rng.below(40);
    const std::size_t m = 1 + rng.below(4);
    Matrix X(n, m);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) X.at(i, j) = rng.uniform(-2.0, 2.0);
      y[i] = static_cast<int>(rng.below(2));
    }
    std::vector<double> beta(m + 1);
    for (auto& b : beta) b = rng.uniform(-1.0, 1.0);

    const auto grad = detail::logit_gradient(X, y, beta);
    auto ll = [&](std::vector<double>& b) { return detail::logit_log_likelihood(X, y, b); };
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const double fd = oracle::central_diff(ll, beta, j, 1e-5);
      const double denom = std::max(1.0, std::abs(fd));
      CHECK(std::abs(grad[j] - fd) / denom <= 1e-4);
    }
  }
}

TEST_CASE("recovers generating coefficients approximately") {
  Rng rng(32);
  auto [X, y] = logistic_data(rng, 4000, {1.2, -0.8}, 0.3);
  const LogitModel m = fit_logit(X, y, std::vector<int>{0, 1});
  CHECK_FALSE(m.separation);
  // Coefficients are on the standardized scale; map back.
  const double b1 = m.coef[1] / m.feature_scale[0];
  const double b2 = m.coef[2] / m.feature_scale[1];
  CHECK(b1 == doctest::Approx(1.2).epsilon(0.15));
  CHECK(b2 == doctest::Approx(-0.8).epsilon(0.2));
}

TEST_CASE("backward stepwise never keeps a pure-noise feature") {
  Rng rng(33);
  auto [X, y] = logistic_data(rng, 600, {1.5}, 0.0);
  // Add a pure-noise column.
  Matrix Xn(X.n_rows, 2);
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    Xn.at(i, 0) = X.at(i, 0);
    Xn.at(i, 1) = rng.uniform(-1.0, 1.0);
  }
  const LogitModel with_noise = fit_logit_aic(Xn, y);
  const LogitModel without = fit_logit_aic(X, y);
  // The noise column must not survive selection or improve the model.
  CHECK(with_noise.selected == std::vector<int>{0});
  CHECK(with_noise.aic == doctest::Approx(without.aic).epsilon(1e-9));
  CHECK(with_noise.aic >= without.aic - 1e-9);
}

TEST_CASE("selected AIC is the minimum over visited subsets") {
  Rng rng(34);
  auto [X, y] = logistic_data(rng, 300, {1.0, 0.0, -0.7, 0.05}, 0.1);
  const LogitModel m = fit_logit_aic(X, y);
  REQUIRE_FALSE(m.visited_aics.empty());
  for (const double aic : m.visited_aics) CHECK(m.aic <= aic + 1e-9);
}

TEST_CASE("perfect separation is flagged, not fatal") {
  Matrix X(30, 1);
  Labels y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    X.at(i, 0) = static_cast<double>(i);
    y[i] = i >= 15 ? 1 : 0;
  }
  const LogitModel m = fit_logit(X, y, std::vector<int>{0});
  CHECK(m.separation);
  // Still usable for prediction.
  CHECK(predict_proba_logit(m, std::vector<double>{0.0}) < 0.5);
  CHECK(predict_proba_logit(m, std::vector<double>{29.0}) > 0.5);
}
