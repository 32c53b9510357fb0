#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peakcast/matrix.hpp"

namespace peakcast {

enum class Activation { sigmoid, tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct MlpConfig {
  std::vector<int> hidden{20, 20};
  Activation activation = Activation::tanh;
  int epochs = 200;
  double learning_rate = 0.01;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

// Feed-forward regressor: hidden layers with the configured activation, one
// linear output. Inputs and the target are z-scored during fit; the
// parameters live in the model so prediction works on raw units. A model
// built directly from weights (tests) keeps identity scaling.
struct MlpModel {
  MlpConfig config;
  int n_inputs = 0;
  std::vector<Matrix> weights;              // weights[l]: (fan_in x fan_out)
  std::vector<std::vector<double>> biases;  // biases[l]: fan_out
  std::vector<double> x_mean, x_scale;
  double y_mean = 0.0, y_scale = 1.0;
  double train_rmse = 0.0;  // raw target units, final epoch

  static MlpModel from_weights(int n_inputs, const MlpConfig& config, std::vector<Matrix> weights,
                               std::vector<std::vector<double>> biases);
};

// Mini-batch gradient descent on mean squared error; deterministic given the
// seed. Raises non_finite_loss if the loss diverges.
MlpModel fit_mlp(const Matrix& X, std::span<const double> y, const MlpConfig& config);

double predict_mlp(const MlpModel& model, std::span<const double> x);

namespace detail {
// Mean of 0.5 * (output - y)^2 in standardized space over the given rows, and
// its analytic gradient with respect to every weight and bias. fit_mlp's
// batch updates run through this same function; the test suite checks it
// against central finite differences.
double mlp_loss_and_gradients(const MlpModel& model, const Matrix& X_std,
                              std::span<const double> y_std, std::span<const std::size_t> rows,
                              std::vector<Matrix>& grad_w, std::vector<std::vector<double>>& grad_b);
}  // namespace detail

}  // namespace peakcast
