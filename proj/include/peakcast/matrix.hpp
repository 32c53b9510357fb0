#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace peakcast {

// Dense row-major matrix of doubles; the feature-matrix currency between
// feature builders and learners.
struct Matrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : n_rows(rows), n_cols(cols), data(rows * cols, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }

  std::span<const double> row(std::size_t r) const { return {data.data() + r * n_cols, n_cols}; }
  std::span<double> row(std::size_t r) { return {data.data() + r * n_cols, n_cols}; }
};

using Labels = std::vector<int>;  // binary, values in {0, 1}

template <typename RowRange>
Matrix matrix_from_rows(const RowRange& rows) {
  Matrix m;
  m.n_rows = rows.size();
  if (m.n_rows == 0) return m;
  m.n_cols = rows.front().size();
  m.data.reserve(m.n_rows * m.n_cols);
  for (const auto& r : rows) m.data.insert(m.data.end(), r.begin(), r.end());
  return m;
}

}  // namespace peakcast
