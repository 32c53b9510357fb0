#include "peakcast/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "peakcast/errors.hpp"
#include "peakcast/log.hpp"

namespace peakcast {

PcaResult pca(const Matrix& X, int k) {
  if (X.n_rows < 2) raise(errc::empty_data, "pca: need at least 2 rows");

  PcaResult result;
  for (std::size_t j = 0; j < X.n_cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) sum += X.at(i, j);
    const double mean = sum / static_cast<double>(X.n_rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < X.n_rows; ++i) ss += (X.at(i, j) - mean) * (X.at(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(X.n_rows - 1));
    if (sd == 0.0) {
      log::warn("pca: dropping constant column " + std::to_string(j));
      continue;
    }
    result.kept_columns.push_back(static_cast<int>(j));
    result.mean.push_back(mean);
    result.scale.push_back(sd);
  }
  const std::size_t m = result.kept_columns.size();
  if (m == 0) raise(errc::rank_deficient, "pca: all columns constant");
  if (k < 1 || static_cast<std::size_t>(k) > m)
    raise(errc::index_out_of_range, "pca: component count must be in 1.." + std::to_string(m));

  Eigen::MatrixXd Z(X.n_rows, m);
  for (std::size_t i = 0; i < X.n_rows; ++i)
    for (std::size_t j = 0; j < m; ++j)
      Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (X.at(i, static_cast<std::size_t>(result.kept_columns[j])) - result.mean[j]) / result.scale[j];

  const Eigen::MatrixXd corr = (Z.transpose() * Z) / static_cast<double>(X.n_rows - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success) raise(errc::non_finite_loss, "pca: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; emit descending.
  const Eigen::VectorXd evals = solver.eigenvalues();
  const Eigen::MatrixXd evecs = solver.eigenvectors();
  const double total = evals.sum();

  result.loadings = Matrix(m, static_cast<std::size_t>(k));
  result.explained_variance_ratio.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = static_cast<Eigen::Index>(m) - 1 - c;
    Eigen::VectorXd v = evecs.col(src);
    // Fix the sign: largest-magnitude loading positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (std::size_t j = 0; j < m; ++j) result.loadings.at(j, static_cast<std::size_t>(c)) = v(static_cast<Eigen::Index>(j));
    result.explained_variance_ratio[static_cast<std::size_t>(c)] =
        std::max(evals(src), 0.0) / total;
  }
  return result;
}

Matrix pca_transform(const PcaResult& r, const Matrix& X) {
  const std::size_t m = r.kept_columns.size();
  const std::size_t k = r.loadings.n_cols;
  Matrix scores(X.n_rows, k);
  for (std::size_t i = 0; i < X.n_rows; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double z =
            (X.at(i, static_cast<std::size_t>(r.kept_columns[j])) - r.mean[j]) / r.scale[j];
        s += z * r.loadings.at(j, c);
      }
      scores.at(i, c) = s;
    }
  }
  return scores;
}

Matrix pca_reconstruct_standardized(const PcaResult& r, const Matrix& X) {
  const Matrix scores = pca_transform(r, X);
  const std::size_t m = r.kept_columns.size();
  Matrix recon(X.n_rows, m);
  for (std::size_t i = 0; i < X.n_rows; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < r.loadings.n_cols; ++c) s += scores.at(i, c) * r.loadings.at(j, c);
      recon.at(i, j) = s;
    }
  return recon;
}

double r_squared(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) raise(errc::arity_mismatch, "r_squared: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) raise(errc::empty_data, "r_squared: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) raise(errc::constant_input, "r_squared: x is constant");
  if (syy == 0.0) return 0.0;  // y constant: regression explains nothing
  return (sxy * sxy) / (sxx * syy);
}

std::array<long, 24> peak_hour_histogram(const HourlyTable& table, int month) {
  if (month < 1 || month > 12) raise(errc::index_out_of_range, "peak_hour_histogram: bad month");
  std::array<long, 24> bins{};
  bool any = false;
  for (const int year : table.years()) {
    const int n_days = days_in_month(year, month);
    for (int d = 1; d <= n_days; ++d) {
      const auto s = day_summary(table, CivilDate{year, month, d});
      if (!s) continue;
      ++bins[static_cast<std::size_t>(s->peak_hour_actual)];
      any = true;
    }
  }
  if (!any) raise(errc::empty_month, "peak_hour_histogram: no complete day in month " + std::to_string(month));
  return bins;
}

}  // namespace peakcast
