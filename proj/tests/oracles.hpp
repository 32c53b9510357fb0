#pragma once

// Brute-force reference implementations used as test oracles. Everything here
// is written independently of the library code paths it checks: straight
// enumeration, long double arithmetic, no shared helpers.

#include <cmath>
#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "peakcast/matrix.hpp"

namespace oracle {

// Relative humidity, long double evaluation with a differently arranged
// expression than the implementation.
inline long double humidity(long double t, long double dt) {
  const long double a = 17.625L, b = 243.04L;
  const long double exponent = a * (dt / (b + dt) - t / (b + t));
  long double h = std::exp(exponent) * 100.0L;
  if (h > 100.0L) h = 100.0L;
  return h;
}

inline std::size_t argmax_earliest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline std::pair<std::size_t, std::size_t> top2_earliest(std::span<const double> v) {
  const std::size_t first = argmax_earliest(v);
  std::size_t second = first == 0 ? 1 : 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == first) continue;
    if (v[i] > v[second]) second = i;
  }
  return {first, second};
}

// Best Gini split by full enumeration of every (feature, midpoint) pair.
struct BestSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
};

inline double gini(long c0, long c1) {
  const long n = c0 + c1;
  if (n == 0) return 0.0;
  const double p0 = double(c0) / double(n), p1 = double(c1) / double(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

inline BestSplit best_split_enumeration(const peakcast::Matrix& X, const std::vector<int>& y,
                                        int min_leaf = 1) {
  const long n = static_cast<long>(X.n_rows);
  long c0 = 0, c1 = 0;
  for (const int v : y) (v == 1 ? c1 : c0) += 1;
  const double parent = gini(c0, c1);

  BestSplit best;
  for (std::size_t f = 0; f < X.n_cols; ++f) {
    // Candidate thresholds: midpoints of consecutive distinct sorted values.
    std::vector<double> vals;
    for (std::size_t i = 0; i < X.n_rows; ++i) vals.push_back(X.at(i, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double thr = (vals[k] + vals[k + 1]) / 2.0;
      long l0 = 0, l1 = 0;
      for (std::size_t i = 0; i < X.n_rows; ++i)
        if (X.at(i, f) <= thr) (y[i] == 1 ? l1 : l0) += 1;
      const long nl = l0 + l1, nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double dec =
          parent - (double(nl) * gini(l0, l1) + double(nr) * gini(c0 - l0, c1 - l1)) / double(n);
      if (dec > best.decrease) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = thr;
        best.decrease = dec;
      }
    }
  }
  return best;
}

// Central finite difference of f at x[i].
template <typename F>
double central_diff(F&& f, std::vector<double>& x, std::size_t i, double h) {
  const double orig = x[i];
  x[i] = orig + h;
  const double up = f(x);
  x[i] = orig - h;
  const double down = f(x);
  x[i] = orig;
  return (up - down) / (2.0 * h);
}

}  // namespace oracle
