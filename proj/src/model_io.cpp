#include "peakcast/model_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "peakcast/csv.hpp"
#include "peakcast/errors.hpp"

namespace peakcast {

using nlohmann::json;

namespace {

json tree_to_json(const TreeNode& node) {
  if (node.is_leaf()) return json::array({"leaf", node.count0, node.count1, node.value});
  return json::array(
      {"split", node.feature, node.threshold, tree_to_json(*node.left), tree_to_json(*node.right)});
}

TreeNodePtr tree_from_json(const json& j) {
  if (!j.is_array() || j.empty()) raise(errc::malformed_row, "model json: bad tree node");
  auto node = std::make_unique<TreeNode>();
  const std::string tag = j.at(0).get<std::string>();
  if (tag == "leaf") {
    node->count0 = j.at(1).get<long>();
    node->count1 = j.at(2).get<long>();
    node->value = j.at(3).get<double>();
  } else if (tag == "split") {
    node->feature = j.at(1).get<int>();
    node->threshold = j.at(2).get<double>();
    node->left = tree_from_json(j.at(3));
    node->right = tree_from_json(j.at(4));
  } else {
    raise(errc::malformed_row, "model json: unknown node tag " + tag);
  }
  return node;
}

json forest_to_json(const ForestModel& m) {
  json j;
  j["n_features"] = m.n_features;
  j["hyperparameters"] = {{"n_tree", m.params.n_tree},       {"max_depth", m.params.max_depth},
                          {"m_try", m.params.m_try},         {"min_leaf", m.params.min_leaf},
                          {"bootstrap", m.params.bootstrap}, {"stratified", m.params.stratified}};
  j["seed"] = m.params.seed;
  j["feature_importances"] = m.feature_importances;
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(tree_to_json(*t));
  j["trees"] = std::move(trees);
  return j;
}

ForestModel forest_from_json(const json& j) {
  ForestModel m;
  m.n_features = j.at("n_features").get<int>();
  const json& h = j.at("hyperparameters");
  m.params.n_tree = h.at("n_tree").get<int>();
  m.params.max_depth = h.at("max_depth").get<int>();
  m.params.m_try = h.at("m_try").get<int>();
  m.params.min_leaf = h.at("min_leaf").get<int>();
  m.params.bootstrap = h.at("bootstrap").get<bool>();
  m.params.stratified = h.at("stratified").get<bool>();
  m.params.seed = j.at("seed").get<std::uint64_t>();
  m.feature_importances = j.at("feature_importances").get<std::vector<double>>();
  for (const json& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
  return m;
}

json gbm_to_json(const GbmModel& m) {
  json j;
  j["n_features"] = m.n_features;
  j["hyperparameters"] = {{"n_rounds", m.params.n_rounds},
                          {"learning_rate", m.params.learning_rate},
                          {"max_depth", m.params.max_depth},
                          {"min_leaf", m.params.min_leaf}};
  j["base_score"] = m.base_score;
  j["train_log_loss"] = m.train_log_loss;
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(tree_to_json(*t));
  j["trees"] = std::move(trees);
  return j;
}

GbmModel gbm_from_json(const json& j) {
  GbmModel m;
  m.n_features = j.at("n_features").get<int>();
  const json& h = j.at("hyperparameters");
  m.params.n_rounds = h.at("n_rounds").get<int>();
  m.params.learning_rate = h.at("learning_rate").get<double>();
  m.params.max_depth = h.at("max_depth").get<int>();
  m.params.min_leaf = h.at("min_leaf").get<int>();
  m.base_score = j.at("base_score").get<double>();
  m.train_log_loss = j.at("train_log_loss").get<std::vector<double>>();
  for (const json& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
  return m;
}

json logit_to_json(const LogitModel& m) {
  json j;
  j["selected"] = m.selected;
  j["coef"] = m.coef;
  j["feature_mean"] = m.feature_mean;
  j["feature_scale"] = m.feature_scale;
  j["aic"] = m.aic;
  j["log_likelihood"] = m.log_likelihood;
  j["separation"] = m.separation;
  return j;
}

LogitModel logit_from_json(const json& j) {
  LogitModel m;
  m.selected = j.at("selected").get<std::vector<int>>();
  m.coef = j.at("coef").get<std::vector<double>>();
  m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
  m.feature_scale = j.at("feature_scale").get<std::vector<double>>();
  m.aic = j.at("aic").get<double>();
  m.log_likelihood = j.at("log_likelihood").get<double>();
  m.separation = j.at("separation").get<bool>();
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.n_rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.n_cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.n_rows = j.size();
  if (m.n_rows == 0) return m;
  m.n_cols = j.at(0).size();
  m.data.reserve(m.n_rows * m.n_cols);
  for (const json& row : j)
    for (const json& v : row) m.data.push_back(v.get<double>());
  return m;
}

class ForestClassifier final : public Classifier {
 public:
  explicit ForestClassifier(ForestModel m) : model_(std::move(m)) {}
  double predict_proba(std::span<const double> x) const override {
    return predict_proba_forest(model_, x);
  }
  int n_features() const override { return model_.n_features; }
  std::string kind() const override { return "rf"; }
  const ForestModel& model() const { return model_; }

 private:
  ForestModel model_;
};

class GbmClassifier final : public Classifier {
 public:
  explicit GbmClassifier(GbmModel m) : model_(std::move(m)) {}
  double predict_proba(std::span<const double> x) const override {
    return predict_proba_gbm(model_, x);
  }
  int n_features() const override { return model_.n_features; }
  std::string kind() const override { return "gbm"; }
  const GbmModel& model() const { return model_; }

 private:
  GbmModel model_;
};

class LogitClassifier final : public Classifier {
 public:
  LogitClassifier(LogitModel m, int n_features) : model_(std::move(m)), n_features_(n_features) {}
  double predict_proba(std::span<const double> x) const override {
    return predict_proba_logit(model_, x);
  }
  int n_features() const override { return n_features_; }
  std::string kind() const override { return "logit"; }
  const LogitModel& model() const { return model_; }

 private:
  LogitModel model_;
  int n_features_;
};

json classifier_to_json(const Classifier& c) {
  json j;
  j["kind"] = c.kind();
  if (const auto* f = dynamic_cast<const ForestClassifier*>(&c)) {
    j["model"] = forest_to_json(f->model());
  } else if (const auto* g = dynamic_cast<const GbmClassifier*>(&c)) {
    j["model"] = gbm_to_json(g->model());
  } else if (const auto* l = dynamic_cast<const LogitClassifier*>(&c)) {
    j["model"] = logit_to_json(l->model());
    j["n_features"] = l->n_features();
  } else {
    raise(errc::config_invalid, "unserializable classifier kind: " + c.kind());
  }
  return j;
}

std::unique_ptr<Classifier> classifier_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "rf") return make_classifier(forest_from_json(j.at("model")));
  if (kind == "gbm") return make_classifier(gbm_from_json(j.at("model")));
  if (kind == "logit")
    return std::make_unique<LogitClassifier>(logit_from_json(j.at("model")),
                                             j.at("n_features").get<int>());
  raise(errc::malformed_row, "model json: unknown learner kind " + kind);
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(ForestModel model) {
  return std::make_unique<ForestClassifier>(std::move(model));
}
std::unique_ptr<Classifier> make_classifier(GbmModel model) {
  return std::make_unique<GbmClassifier>(std::move(model));
}
std::unique_ptr<Classifier> make_classifier(LogitModel model) {
  const int n = model.selected.empty() ? 0 : *std::max_element(model.selected.begin(), model.selected.end()) + 1;
  return std::make_unique<LogitClassifier>(std::move(model), n);
}

const ForestModel* as_forest(const Classifier& c) {
  const auto* f = dynamic_cast<const ForestClassifier*>(&c);
  return f ? &f->model() : nullptr;
}

std::string bundle_to_json(const ModelBundle& bundle) {
  json j;
  j["version"] = kModelFormatVersion;
  j["task"] = bundle.task;
  j["month"] = bundle.month;
  j["training_years"] = bundle.training_years;
  j["feature_names"] = bundle.feature_names;
  j["classifier"] = classifier_to_json(*bundle.classifier);
  return j.dump(1) + "\n";
}

ModelBundle bundle_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("version")) raise(errc::malformed_row, "model json: missing version field");
  if (j.at("version").get<int>() != kModelFormatVersion)
    raise(errc::malformed_row, "model json: unsupported version");
  ModelBundle b;
  b.task = j.at("task").get<std::string>();
  b.month = j.at("month").get<int>();
  b.training_years = j.at("training_years").get<std::vector<int>>();
  b.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  b.classifier = classifier_from_json(j.at("classifier"));
  return b;
}

void save_bundle(const std::string& path, const ModelBundle& bundle) {
  write_file(path, bundle_to_json(bundle));
}

ModelBundle load_bundle(const std::string& path) { return bundle_from_json(read_file(path)); }

std::string mlp_to_json(const MlpModel& model) {
  json j;
  j["version"] = kModelFormatVersion;
  j["kind"] = "mlp";
  j["n_inputs"] = model.n_inputs;
  j["hyperparameters"] = {{"hidden", model.config.hidden},
                          {"activation", to_string(model.config.activation)},
                          {"epochs", model.config.epochs},
                          {"learning_rate", model.config.learning_rate},
                          {"batch_size", model.config.batch_size}};
  j["seed"] = model.config.seed;
  json weights = json::array();
  for (const auto& w : model.weights) weights.push_back(matrix_to_json(w));
  j["weights"] = std::move(weights);
  j["biases"] = model.biases;
  j["x_mean"] = model.x_mean;
  j["x_scale"] = model.x_scale;
  j["y_mean"] = model.y_mean;
  j["y_scale"] = model.y_scale;
  j["train_rmse"] = model.train_rmse;
  return j.dump(1) + "\n";
}

MlpModel mlp_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("version").get<int>() != kModelFormatVersion)
    raise(errc::malformed_row, "mlp json: unsupported version");
  MlpModel m;
  m.n_inputs = j.at("n_inputs").get<int>();
  const json& h = j.at("hyperparameters");
  m.config.hidden = h.at("hidden").get<std::vector<int>>();
  m.config.activation = activation_from_string(h.at("activation").get<std::string>());
  m.config.epochs = h.at("epochs").get<int>();
  m.config.learning_rate = h.at("learning_rate").get<double>();
  m.config.batch_size = h.at("batch_size").get<int>();
  m.config.seed = j.at("seed").get<std::uint64_t>();
  for (const json& w : j.at("weights")) m.weights.push_back(matrix_from_json(w));
  m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  m.x_mean = j.at("x_mean").get<std::vector<double>>();
  m.x_scale = j.at("x_scale").get<std::vector<double>>();
  m.y_mean = j.at("y_mean").get<double>();
  m.y_scale = j.at("y_scale").get<double>();
  m.train_rmse = j.at("train_rmse").get<double>();
  return m;
}

std::string bundle_filename(const std::string& task, int month) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "_m%02d", month);
  return task + buf + ".json";
}

void ModelSet::put(ModelBundle bundle) {
  const auto key = std::make_pair(bundle.task, bundle.month);
  bundles_[key] = std::move(bundle);
}

const ModelBundle& ModelSet::get(const std::string& task, int month) const {
  const auto it = bundles_.find(std::make_pair(task, month));
  if (it == bundles_.end())
    raise(errc::month_model_mismatch,
          "no model for task " + task + " month " + std::to_string(month));
  return it->second;
}

bool ModelSet::has(const std::string& task, int month) const {
  return bundles_.count(std::make_pair(task, month)) > 0;
}

ModelSet ModelSet::load_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) raise(errc::io_error, "not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().filename().string().rfind("peak_", 0) == 0)
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  ModelSet set;
  for (const auto& p : paths) set.put(load_bundle(p));
  return set;
}

}  // namespace peakcast
