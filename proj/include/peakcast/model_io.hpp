#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "peakcast/forest.hpp"
#include "peakcast/gbm.hpp"
#include "peakcast/logit.hpp"
#include "peakcast/mlp.hpp"

namespace peakcast {

inline constexpr int kModelFormatVersion = 1;

// Probability model behind a uniform surface; prediction stages do not care
// which learner a bundle holds.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual double predict_proba(std::span<const double> x) const = 0;
  virtual int n_features() const = 0;
  virtual std::string kind() const = 0;
};

std::unique_ptr<Classifier> make_classifier(ForestModel model);
std::unique_ptr<Classifier> make_classifier(GbmModel model);
std::unique_ptr<Classifier> make_classifier(LogitModel model);

// Forest access for stages that need importances; null when the bundle holds
// a different learner.
const ForestModel* as_forest(const Classifier& c);

// A trained model plus the metadata the prediction and backtest stages need.
struct ModelBundle {
  std::string task;  // peak_day_direct | peak_day_indirect | peak_hour
  int month = 0;     // 1..12
  std::vector<int> training_years;
  std::vector<std::string> feature_names;
  std::unique_ptr<Classifier> classifier;
};

// Self-describing JSON documents (version field mandatory, tree structures as
// nested arrays). Serialization is key-sorted and uses shortest round-trip
// doubles, so identical models produce identical bytes.
std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const std::string& text);
void save_bundle(const std::string& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::string& path);

std::string mlp_to_json(const MlpModel& model);
MlpModel mlp_from_json(const std::string& text);

// peak_day_direct_m01.json etc.
std::string bundle_filename(const std::string& task, int month);

// All bundles of a models directory, keyed by (task, month).
class ModelSet {
 public:
  static ModelSet load_dir(const std::string& dir);

  void put(ModelBundle bundle);
  const ModelBundle& get(const std::string& task, int month) const;
  bool has(const std::string& task, int month) const;
  const std::map<std::pair<std::string, int>, ModelBundle>& all() const { return bundles_; }

 private:
  std::map<std::pair<std::string, int>, ModelBundle> bundles_;
};

}  // namespace peakcast
