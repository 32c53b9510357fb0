#pragma once

#include <span>
#include <vector>

#include "peakcast/matrix.hpp"

namespace peakcast {

// Logistic regression fitted by IRLS on z-scored features, with backward
// stepwise elimination minimizing AIC = 2k - 2 log L.
struct LogitModel {
  std::vector<int> selected;            // original column indices, ascending
  std::vector<double> coef;             // [intercept, one per selected feature], standardized scale
  std::vector<double> feature_mean;     // standardization of the selected columns
  std::vector<double> feature_scale;
  double aic = 0.0;
  double log_likelihood = 0.0;
  bool separation = false;  // coefficients diverged (perfectly separable data)
  int n_iterations = 0;
  std::vector<double> visited_aics;  // every subset AIC seen during the search
};

// IRLS to max-gradient <= 1e-8 or 100 iterations; constant columns are
// dropped before the search. Perfect separation flags the model instead of
// raising.
LogitModel fit_logit_aic(const Matrix& X, const Labels& y);

// Single fit on a fixed feature subset (no stepwise search).
LogitModel fit_logit(const Matrix& X, const Labels& y, std::span<const int> subset);

double predict_proba_logit(const LogitModel& model, std::span<const double> x);

namespace detail {
// Log-likelihood and its analytic gradient for a design matrix with implicit
// intercept (beta[0]); shared with the IRLS convergence test and checked
// against central finite differences in the test suite.
double logit_log_likelihood(const Matrix& X, const Labels& y, std::span<const double> beta);
std::vector<double> logit_gradient(const Matrix& X, const Labels& y, std::span<const double> beta);
}  // namespace detail

}  // namespace peakcast
