#include "peakcast/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakcast/errors.hpp"
#include "peakcast/rng.hpp"

namespace peakcast {

namespace {

double activate(Activation a, double z) {
  return a == Activation::tanh ? std::tanh(z) : 1.0 / (1.0 + std::exp(-z));
}

double activate_deriv_from_output(Activation a, double out) {
  return a == Activation::tanh ? 1.0 - out * out : out * (1.0 - out);
}

// Forward pass in standardized space; keeps every layer's outputs for backprop.
double forward(const MlpModel& model, std::span<const double> x_std,
               std::vector<std::vector<double>>* activations) {
  std::vector<double> current(x_std.begin(), x_std.end());
  if (activations) {
    activations->clear();
    activations->push_back(current);
  }
  const std::size_t n_layers = model.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Matrix& W = model.weights[l];
    const auto& b = model.biases[l];
    std::vector<double> next(W.n_cols);
    for (std::size_t j = 0; j < W.n_cols; ++j) {
      double z = b[j];
      for (std::size_t i = 0; i < W.n_rows; ++i) z += current[i] * W.at(i, j);
      next[j] = l + 1 == n_layers ? z : activate(model.config.activation, z);  // linear output
    }
    current = std::move(next);
    if (activations) activations->push_back(current);
  }
  return current[0];
}

}  // namespace

std::string to_string(Activation a) { return a == Activation::tanh ? "tanh" : "sigmoid"; }

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  raise(errc::config_invalid, "unknown activation: " + s);
}

MlpModel MlpModel::from_weights(int n_inputs, const MlpConfig& config, std::vector<Matrix> weights,
                                std::vector<std::vector<double>> biases) {
  MlpModel m;
  m.config = config;
  m.n_inputs = n_inputs;
  m.weights = std::move(weights);
  m.biases = std::move(biases);
  m.x_mean.assign(static_cast<std::size_t>(n_inputs), 0.0);
  m.x_scale.assign(static_cast<std::size_t>(n_inputs), 1.0);
  return m;
}

namespace detail {

double mlp_loss_and_gradients(const MlpModel& model, const Matrix& X_std,
                              std::span<const double> y_std, std::span<const std::size_t> rows,
                              std::vector<Matrix>& grad_w, std::vector<std::vector<double>>& grad_b) {
  const std::size_t n_layers = model.weights.size();
  grad_w.resize(n_layers);
  grad_b.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    grad_w[l] = Matrix(model.weights[l].n_rows, model.weights[l].n_cols);
    grad_b[l].assign(model.biases[l].size(), 0.0);
  }

  double loss = 0.0;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, next_delta;
  for (const std::size_t r : rows) {
    const double out = forward(model, X_std.row(r), &acts);
    const double err = out - y_std[r];
    loss += 0.5 * err * err;

    delta.assign(1, err);  // d loss / d output (linear layer)
    for (std::size_t l = n_layers; l-- > 0;) {
      const Matrix& W = model.weights[l];
      const auto& in = acts[l];
      for (std::size_t j = 0; j < W.n_cols; ++j) {
        grad_b[l][j] += delta[j];
        for (std::size_t i = 0; i < W.n_rows; ++i) grad_w[l].at(i, j) += in[i] * delta[j];
      }
      if (l == 0) break;
      next_delta.assign(W.n_rows, 0.0);
      for (std::size_t i = 0; i < W.n_rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < W.n_cols; ++j) s += W.at(i, j) * delta[j];
        next_delta[i] = s * activate_deriv_from_output(model.config.activation, in[i]);
      }
      delta = next_delta;
    }
  }

  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t l = 0; l < n_layers; ++l) {
    for (auto& v : grad_w[l].data) v *= inv_n;
    for (auto& v : grad_b[l]) v *= inv_n;
  }
  return loss * inv_n;
}

}  // namespace detail

MlpModel fit_mlp(const Matrix& X, std::span<const double> y, const MlpConfig& config) {
  if (X.n_rows == 0 || X.n_cols == 0) raise(errc::empty_data, "fit_mlp: empty feature matrix");
  if (y.size() != X.n_rows) raise(errc::arity_mismatch, "fit_mlp: target count mismatch");
  for (const int h : config.hidden)
    if (h < 1) raise(errc::config_invalid, "fit_mlp: hidden layer size must be >= 1");

  MlpModel model;
  model.config = config;
  model.n_inputs = static_cast<int>(X.n_cols);

  // z-score inputs and target; constant columns keep scale 1.
  model.x_mean.assign(X.n_cols, 0.0);
  model.x_scale.assign(X.n_cols, 1.0);
  for (std::size_t j = 0; j < X.n_cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) sum += X.at(i, j);
    model.x_mean[j] = sum / static_cast<double>(X.n_rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) {
      const double d = X.at(i, j) - model.x_mean[j];
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(X.n_rows));
    if (sd > 0.0) model.x_scale[j] = sd;
  }
  bool constant_target = false;
  {
    double sum = 0.0;
    for (const double v : y) sum += v;
    model.y_mean = sum / static_cast<double>(y.size());
    double ss = 0.0;
    for (const double v : y) ss += (v - model.y_mean) * (v - model.y_mean);
    const double sd = std::sqrt(ss / static_cast<double>(y.size()));
    constant_target = sd == 0.0;
    model.y_scale = sd > 0.0 ? sd : 1.0;
  }

  Matrix X_std(X.n_rows, X.n_cols);
  for (std::size_t i = 0; i < X.n_rows; ++i)
    for (std::size_t j = 0; j < X.n_cols; ++j)
      X_std.at(i, j) = (X.at(i, j) - model.x_mean[j]) / model.x_scale[j];
  std::vector<double> y_std(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) y_std[i] = (y[i] - model.y_mean) / model.y_scale;

  // Xavier-uniform initialization.
  Rng rng(config.seed);
  const std::vector<int> sizes = [&] {
    std::vector<int> s{model.n_inputs};
    s.insert(s.end(), config.hidden.begin(), config.hidden.end());
    s.push_back(1);
    return s;
  }();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<std::size_t>(sizes[l]);
    const auto fan_out = static_cast<std::size_t>(sizes[l + 1]);
    Matrix W(fan_in, fan_out);
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : W.data) v = rng.uniform(-a, a);
    model.weights.push_back(std::move(W));
    model.biases.emplace_back(fan_out, 0.0);
  }

  if (constant_target) {
    // Nothing to learn: an all-zero network outputs y_mean exactly.
    for (auto& w : model.weights)
      for (auto& v : w.data) v = 0.0;
    model.train_rmse = 0.0;
    return model;
  }

  std::vector<std::size_t> order(X.n_rows);
  std::iota(order.begin(), order.end(), 0);
  const int batch = std::max(1, std::min<int>(config.batch_size, static_cast<int>(X.n_rows)));

  std::vector<Matrix> grad_w;
  std::vector<std::vector<double>> grad_b;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(batch)) {
      const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(batch), order.size() - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      epoch_loss += detail::mlp_loss_and_gradients(model, X_std, y_std, rows, grad_w, grad_b);
      ++n_batches;
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (std::size_t k = 0; k < grad_w[l].data.size(); ++k)
          model.weights[l].data[k] -= config.learning_rate * grad_w[l].data[k];
        for (std::size_t k = 0; k < grad_b[l].size(); ++k)
          model.biases[l][k] -= config.learning_rate * grad_b[l][k];
      }
    }
    if (!std::isfinite(epoch_loss))
      raise(errc::non_finite_loss, "fit_mlp: loss diverged at epoch " + std::to_string(epoch) +
                                       "; lower the learning rate");
    if (n_batches > 0) epoch_loss /= static_cast<double>(n_batches);
  }

  double sse = 0.0;
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    const double pred = forward(model, X_std.row(i), nullptr) * model.y_scale + model.y_mean;
    sse += (pred - y[i]) * (pred - y[i]);
  }
  model.train_rmse = std::sqrt(sse / static_cast<double>(X.n_rows));
  return model;
}

double predict_mlp(const MlpModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.n_inputs)
    raise(errc::arity_mismatch, "predict_mlp: feature arity mismatch");
  std::vector<double> x_std(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) x_std[j] = (x[j] - model.x_mean[j]) / model.x_scale[j];
  return forward(model, x_std, nullptr) * model.y_scale + model.y_mean;
}

}  // namespace peakcast
