#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinnamon/har/model.hpp"

namespace cinnamon::har {

using ConfusionMatrix = std::array<std::array<std::size_t, kActivityCount>, kActivityCount>;

struct MetricsRow {
  std::string model;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion{};  // [truth][predicted], pooled over folds
};

struct MetricsReport {
  std::string scheme = "leave-one-session-out";
  std::size_t folds = 0;
  std::vector<MetricsRow> rows;  // sorted by macro F1, best first

  const MetricsRow* find(std::string_view model) const;
  nlohmann::json to_json() const;
  std::string to_table() const;
};

using Predictor = std::function<ActivityLabel(const FeatureVector&)>;
using Trainer = std::function<Predictor(const Dataset& train, std::uint64_t seed)>;

struct NamedTrainer {
  std::string name;
  Trainer trainer;
};

NamedTrainer model_trainer(ModelKind kind, const Hyperparameters& overrides = {});

/// Fold i holds out the i-th session of every class (sessions in order of
/// first appearance); metrics are pooled over folds. Throws
/// ValidationError when some class has fewer than two sessions.
MetricsReport evaluate(const Dataset& data, const std::vector<NamedTrainer>& trainers, std::uint64_t seed);
MetricsReport evaluate(const Dataset& data, const std::vector<ModelKind>& kinds, std::uint64_t seed);

/// Accuracy and macro metrics over the classes that appear in truth or
/// prediction. Throws std::logic_error when the matrix is empty.
MetricsRow metrics_from_confusion(std::string model, const ConfusionMatrix& confusion);

}  // namespace cinnamon::har
