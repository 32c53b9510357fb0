#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "peakcast/matrix.hpp"
#include "peakcast/rng.hpp"

namespace peakcast {

enum class LearnerKind { random_forest, gbm, logit };

std::string to_string(LearnerKind k);
LearnerKind learner_kind_from_string(const std::string& s);

struct HyperGrid {
  std::vector<int> n_trees{50, 100, 200, 500, 1000, 2000};
  std::vector<int> max_depths{5, 10, 20, 40, 60};
};

struct GridSearchResult {
  Matrix accuracy;  // n_trees x max_depths, mean held-out accuracy
  int best_n_tree = 0;
  int best_max_depth = 0;
  double best_accuracy = 0.0;
  int k_folds_used = 0;
};

// Label-stratified fold assignment; every fold receives positives and
// negatives in round-robin after a seeded shuffle.
std::vector<int> stratified_folds(const Labels& y, int k_folds, Rng& rng);

// Mean held-out classification accuracy for every (n_tree, max_depth) grid
// point. Ties prefer the smaller model: fewer trees first, then shallower.
// If some fold would receive no positive label the fold count falls back to
// the number of positives (warning); fewer than 2 positives raise
// too_few_positives.
GridSearchResult grid_search(LearnerKind learner, const Matrix& X, const Labels& y,
                             const HyperGrid& grid, int k_folds, std::uint64_t seed);

}  // namespace peakcast
