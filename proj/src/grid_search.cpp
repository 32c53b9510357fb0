#include "peakcast/grid_search.hpp"

#include <algorithm>

#include "peakcast/errors.hpp"
#include "peakcast/forest.hpp"
#include "peakcast/gbm.hpp"
#include "peakcast/log.hpp"
#include "peakcast/logit.hpp"

namespace peakcast {

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::random_forest:
      return "rf";
    case LearnerKind::gbm:
      return "gbm";
    case LearnerKind::logit:
      return "logit";
  }
  return "rf";
}

LearnerKind learner_kind_from_string(const std::string& s) {
  if (s == "rf" || s == "random_forest") return LearnerKind::random_forest;
  if (s == "gbm") return LearnerKind::gbm;
  if (s == "logit" || s == "lr") return LearnerKind::logit;
  raise(errc::config_invalid, "unknown learner kind: " + s);
}

std::vector<int> stratified_folds(const Labels& y, int k_folds, Rng& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> fold(y.size(), 0);
  for (std::size_t i = 0; i < pos.size(); ++i) fold[pos[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
  for (std::size_t i = 0; i < neg.size(); ++i) fold[neg[i]] = static_cast<int>(i % static_cast<std::size_t>(k_folds));
  return fold;
}

GridSearchResult grid_search(LearnerKind learner, const Matrix& X, const Labels& y,
                             const HyperGrid& grid, int k_folds, std::uint64_t seed) {
  if (k_folds < 2) raise(errc::config_invalid, "grid_search: k_folds must be >= 2");
  if (grid.n_trees.empty() || grid.max_depths.empty())
    raise(errc::config_invalid, "grid_search: empty grid");

  long n_pos = 0;
  for (const int v : y) n_pos += v;
  if (n_pos < 2) raise(errc::too_few_positives, "grid_search: need at least 2 positive labels");
  int k = k_folds;
  if (n_pos < k) {
    k = static_cast<int>(n_pos);
    log::warn("grid_search: only " + std::to_string(n_pos) + " positives, falling back to " +
              std::to_string(k) + " folds");
  }

  Rng rng(derive_seed(seed, "grid_search_folds"));
  const std::vector<int> fold = stratified_folds(y, k, rng);

  // Per-fold train/test index sets, shared across grid points.
  std::vector<std::vector<std::size_t>> train_idx(static_cast<std::size_t>(k)),
      test_idx(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < y.size(); ++i)
    for (int f = 0; f < k; ++f)
      (fold[i] == f ? test_idx : train_idx)[static_cast<std::size_t>(f)].push_back(i);

  GridSearchResult result;
  result.k_folds_used = k;
  result.accuracy = Matrix(grid.n_trees.size(), grid.max_depths.size());
  result.best_accuracy = -1.0;

  for (std::size_t ti = 0; ti < grid.n_trees.size(); ++ti) {
    for (std::size_t di = 0; di < grid.max_depths.size(); ++di) {
      double acc_sum = 0.0;
      for (int f = 0; f < k; ++f) {
        const auto& tr = train_idx[static_cast<std::size_t>(f)];
        const auto& te = test_idx[static_cast<std::size_t>(f)];
        Matrix Xtr(tr.size(), X.n_cols);
        Labels ytr(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) {
          const auto src = X.row(tr[i]);
          std::copy(src.begin(), src.end(), Xtr.row(i).begin());
          ytr[i] = y[tr[i]];
        }
        const std::uint64_t fit_seed =
            derive_seed(seed, "grid_pt_" + std::to_string(ti) + "_" + std::to_string(di) + "_f" +
                                  std::to_string(f));
        long correct = 0;
        switch (learner) {
          case LearnerKind::random_forest: {
            ForestParams p;
            p.n_tree = grid.n_trees[ti];
            p.max_depth = grid.max_depths[di];
            p.seed = fit_seed;
            const ForestModel m = fit_random_forest(Xtr, ytr, p);
            for (const std::size_t i : te) correct += predict_forest(m, X.row(i)) == y[i];
            break;
          }
          case LearnerKind::gbm: {
            GbmParams p;
            p.n_rounds = grid.n_trees[ti];
            p.max_depth = grid.max_depths[di];
            const GbmModel m = fit_gbm(Xtr, ytr, p);
            for (const std::size_t i : te)
              correct += (predict_proba_gbm(m, X.row(i)) >= 0.5 ? 1 : 0) == y[i];
            break;
          }
          case LearnerKind::logit: {
            const LogitModel m = fit_logit_aic(Xtr, ytr);
            for (const std::size_t i : te)
              correct += (predict_proba_logit(m, X.row(i)) >= 0.5 ? 1 : 0) == y[i];
            break;
          }
        }
        acc_sum += static_cast<double>(correct) / static_cast<double>(te.size());
      }
      const double acc = acc_sum / static_cast<double>(k);
      result.accuracy.at(ti, di) = acc;
      // Strict improvement only: scanning trees then depths ascending makes
      // ties land on the smaller model.
      if (acc > result.best_accuracy) {
        result.best_accuracy = acc;
        result.best_n_tree = grid.n_trees[ti];
        result.best_max_depth = grid.max_depths[di];
      }
    }
  }
  return result;
}

}  // namespace peakcast
