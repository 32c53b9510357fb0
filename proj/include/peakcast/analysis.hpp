#pragma once

#include <array>
#include <span>
#include <vector>

#include "peakcast/matrix.hpp"
#include "peakcast/table.hpp"

namespace peakcast {

struct PcaResult {
  Matrix loadings;  // rows = kept features, cols = components, orthonormal columns
  std::vector<double> explained_variance_ratio;  // descending, fraction of total variance
  std::vector<double> mean, scale;               // standardization of the kept columns
  std::vector<int> kept_columns;                 // original indices (constants dropped)
};

// PCA on the correlation matrix: columns are z-scored, the symmetric
// eigenproblem is solved, components come out by descending eigenvalue. Sign
// convention: the largest-magnitude loading of each component is positive.
// Constant columns are dropped with a warning (rank_deficient only if nothing
// survives).
PcaResult pca(const Matrix& X, int k);

// Projects standardized data onto the components; with k = all components the
// reconstruction reproduces the standardized input.
Matrix pca_transform(const PcaResult& r, const Matrix& X);
Matrix pca_reconstruct_standardized(const PcaResult& r, const Matrix& X);

// Squared Pearson correlation of the simple linear regression of y on x.
double r_squared(std::span<const double> x, std::span<const double> y);

// Counts of the actual daily peak hour over every complete day of the given
// month across all years in the table.
std::array<long, 24> peak_hour_histogram(const HourlyTable& table, int month);

}  // namespace peakcast
