#include "peakcast/logit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"

namespace peakcast {

namespace {

constexpr double kGradTol = 1e-8;
constexpr int kMaxIter = 100;
constexpr double kSeparationCoef = 30.0;  // |beta| beyond this on z-scored data means separation

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Standardized {
  Matrix Z;  // z-scored selected columns
  std::vector<double> mean, scale;
};

Standardized standardize(const Matrix& X, std::span<const int> subset) {
  Standardized s;
  s.Z = Matrix(X.n_rows, subset.size());
  s.mean.resize(subset.size());
  s.scale.resize(subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const auto col = static_cast<std::size_t>(subset[j]);
    double sum = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) sum += X.at(i, col);
    const double mean = sum / static_cast<double>(X.n_rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
      const double d = X.at(i, col) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(X.n_rows));
    s.mean[j] = mean;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) s.Z.at(i, j) = (X.at(i, col) - mean) / s.scale[j];
  }
  return s;
}

// IRLS on the standardized design (intercept implicit).
LogitModel irls(const Matrix& X, const Labels& y, std::span<const int> subset) {
  const Standardized s = standardize(X, subset);
  const std::size_t n = X.n_rows;
  const std::size_t k = subset.size() + 1;

  LogitModel model;
  model.selected.assign(subset.begin(), subset.end());
  model.feature_mean = s.mean;
  model.feature_scale = s.scale;
  model.coef.assign(k, 0.0);

  Eigen::MatrixXd Z(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    Z(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j + 1 < k; ++j)
      Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = s.Z.at(i, j);
  }
  Eigen::VectorXd yv(n);
  for (std::size_t i = 0; i < n; ++i) yv(static_cast<Eigen::Index>(i)) = y[i];

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  for (int iter = 0; iter < kMaxIter; ++iter) {
    model.n_iterations = iter + 1;
    const Eigen::VectorXd eta = Z * beta;
    Eigen::VectorXd p(eta.size()), w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      p(i) = std::clamp(sigmoid(eta(i)), 1e-10, 1.0 - 1e-10);
      w(i) = std::max(p(i) * (1.0 - p(i)), 1e-10);
    }
    const Eigen::VectorXd grad = Z.transpose() * (yv - p);
    if (grad.lpNorm<Eigen::Infinity>() <= kGradTol) break;

    // Weighted least squares step with a tiny ridge for numerical safety.
    Eigen::MatrixXd H = Z.transpose() * w.asDiagonal() * Z;
    H.diagonal().array() += 1e-10;
    beta += H.ldlt().solve(grad);

    if (beta.lpNorm<Eigen::Infinity>() > kSeparationCoef) {
      model.separation = true;
      break;
    }
  }

  double ll = 0.0;
  const Eigen::VectorXd eta = Z * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = std::clamp(sigmoid(eta(i)), 1e-12, 1.0 - 1e-12);
    ll += yv(i) == 1.0 ? std::log(p) : std::log(1.0 - p);
  }
  for (std::size_t j = 0; j < k; ++j) model.coef[j] = beta(static_cast<Eigen::Index>(j));
  model.log_likelihood = ll;
  model.aic = 2.0 * static_cast<double>(k) - 2.0 * ll;
  return model;
}

}  // namespace

LogitModel fit_logit(const Matrix& X, const Labels& y, std::span<const int> subset) {
  if (X.n_rows == 0) raise(errc::empty_data, "fit_logit: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_logit: label count mismatch");
  return irls(X, y, subset);
}

LogitModel fit_logit_aic(const Matrix& X, const Labels& y) {
  if (X.n_rows == 0 || X.n_cols == 0) raise(errc::empty_data, "fit_logit_aic: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_logit_aic: label count mismatch");

  // Constant columns carry no information and break standardization.
  std::vector<int> subset;
  for (std::size_t j = 0; j < X.n_cols; ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < X.n_rows && constant; ++i)
      constant = X.at(i, j) == X.at(0, j);
    if (constant)
      log::warn("fit_logit_aic: dropping constant column " + std::to_string(j));
    else
      subset.push_back(static_cast<int>(j));
  }

  LogitModel current = irls(X, y, subset);
  std::vector<double> visited{current.aic};

  // Backward stepwise: drop the feature whose removal lowers AIC the most,
  // stop when no removal helps.
  while (!current.selected.empty()) {
    LogitModel best_candidate;
    bool improved = false;
    for (std::size_t drop = 0; drop < current.selected.size(); ++drop) {
      std::vector<int> trial;
      trial.reserve(current.selected.size() - 1);
      for (std::size_t j = 0; j < current.selected.size(); ++j)
        if (j != drop) trial.push_back(current.selected[j]);
      LogitModel candidate = irls(X, y, trial);
      visited.push_back(candidate.aic);
      if (candidate.aic < current.aic && (!improved || candidate.aic < best_candidate.aic)) {
        best_candidate = std::move(candidate);
        improved = true;
      }
    }
    if (!improved) break;
    current = std::move(best_candidate);
  }

  current.visited_aics = std::move(visited);
  return current;
}

double predict_proba_logit(const LogitModel& model, std::span<const double> x) {
  double z = model.coef[0];
  for (std::size_t j = 0; j < model.selected.size(); ++j) {
    const double v = (x[static_cast<std::size_t>(model.selected[j])] - model.feature_mean[j]) /
                     model.feature_scale[j];
    z += model.coef[j + 1] * v;
  }
  return sigmoid(z);
}

namespace detail {

double logit_log_likelihood(const Matrix& X, const Labels& y, std::span<const double> beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    double z = beta[0];
    for (std::size_t j = 0; j < X.n_cols; ++j) z += beta[j + 1] * X.at(i, j);
    const double p = std::clamp(sigmoid(z), 1e-12, 1.0 - 1e-12);
    ll += y[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return ll;
}

std::vector<double> logit_gradient(const Matrix& X, const Labels& y, std::span<const double> beta) {
  std::vector<double> grad(X.n_cols + 1, 0.0);
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    double z = beta[0];
    for (std::size_t j = 0; j < X.n_cols; ++j) z += beta[j + 1] * X.at(i, j);
    const double r = static_cast<double>(y[i]) - sigmoid(z);
    grad[0] += r;
    for (std::size_t j = 0; j < X.n_cols; ++j) grad[j + 1] += r * X.at(i, j);
  }
  return grad;
}

}  // namespace detail

}  // namespace peakcast
