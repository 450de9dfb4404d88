#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cinnamon/activity.hpp"
#include "cinnamon/har/features.hpp"

namespace cinnamon::har {

enum class ModelKind { LR, DT, RF, GB, KNN, SVC, GNB };

inline constexpr std::array<ModelKind, 7> kAllModelKinds = {
    ModelKind::LR, ModelKind::DT, ModelKind::RF, ModelKind::GB,
    ModelKind::KNN, ModelKind::SVC, ModelKind::GNB};

std::string_view to_string(ModelKind kind);
/// Accepts "GB" or "gb". Throws ValidationError otherwise.
ModelKind parse_model_kind(std::string_view name);

/// Scores form a probability vector for every kind except SVC, whose
/// scores are one-vs-rest margins.
bool is_probabilistic(ModelKind kind);

using Hyperparameters = std::map<std::string, double>;

Hyperparameters default_hyperparameters(ModelKind kind);

/// Z-score statistics from the training split.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;

  static Standardizer fit(const Dataset& data);
  std::vector<double> apply(std::span<const double> values) const;
};

struct Prediction {
  ActivityLabel label = ActivityLabel::Rest;
  std::array<double, kActivityCount> scores{};
};

/// Binary decision tree; leaves hold class fractions or a regression value.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> value;
};
using Tree = std::vector<TreeNode>;

struct LogisticParams {
  std::vector<std::vector<double>> weights;  // [class][feature..., bias]
};
struct TreeParams {
  Tree tree;
};
struct ForestParams {
  std::vector<Tree> trees;
};
struct BoostParams {
  std::array<double, kActivityCount> init{};
  double shrinkage = 0.1;
  std::vector<std::array<Tree, kActivityCount>> rounds;
  std::vector<double> loss_history;  // mean training log-loss after each round
};
struct KnnParams {
  int k = 5;
  std::vector<std::vector<double>> points;
  std::vector<ActivityLabel> labels;
};
struct LinearSvcParams {
  std::vector<std::vector<double>> weights;  // [class][feature..., bias]
};
struct GaussianNbParams {
  std::array<double, kActivityCount> log_prior{};
  std::vector<std::vector<double>> mean;      // [class][feature]
  std::vector<std::vector<double>> variance;  // [class][feature]
  std::array<bool, kActivityCount> present{};
};

using FittedParams = std::variant<LogisticParams, TreeParams, ForestParams, BoostParams, KnnParams,
                                  LinearSvcParams, GaussianNbParams>;

/// Immutable fitted classifier.
class Model {
 public:
  Model(ModelKind kind, Hyperparameters hyperparameters, Standardizer standardizer, FittedParams params);

  ModelKind kind() const { return kind_; }
  const Hyperparameters& hyperparameters() const { return hyperparameters_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const FittedParams& params() const { return params_; }
  std::size_t dimension() const { return standardizer_.mean.size(); }

  /// Throws ValidationError on a dimension mismatch.
  Prediction predict(std::span<const double> features) const;
  Prediction predict(const FeatureVector& fv) const { return predict(fv.values); }

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& doc);

 private:
  ModelKind kind_;
  Hyperparameters hyperparameters_;
  Standardizer standardizer_;
  FittedParams params_;
};

/// Unknown hyperparameter names are rejected; missing ones take defaults.
/// Throws ValidationError for an empty or single-class dataset, unlabeled
/// vectors, or inconsistent dimensionality.
Model train(const Dataset& data, ModelKind kind, const Hyperparameters& overrides = {},
            std::uint64_t seed = 0);

}  // namespace cinnamon::har
