#include "cinnamon/har/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cinnamon/errors.hpp"

namespace cinnamon::har {

using nlohmann::json;

NamedTrainer model_trainer(ModelKind kind, const Hyperparameters& overrides) {
  return {std::string(to_string(kind)), [kind, overrides](const Dataset& train_set, std::uint64_t seed) -> Predictor {
            auto model = std::make_shared<const Model>(train(train_set, kind, overrides, seed));
            return [model](const FeatureVector& fv) { return model->predict(fv).label; };
          }};
}

MetricsRow metrics_from_confusion(std::string model, const ConfusionMatrix& confusion) {
  MetricsRow row;
  row.model = std::move(model);
  row.confusion = confusion;
  std::size_t total = 0;
  std::size_t trace = 0;
  std::array<std::size_t, kActivityCount> truth{}, predicted{};
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    for (std::size_t j = 0; j < kActivityCount; ++j) {
      total += confusion[i][j];
      truth[i] += confusion[i][j];
      predicted[j] += confusion[i][j];
    }
    trace += confusion[i][i];
  }
  if (total == 0) throw std::logic_error("confusion matrix is empty");
  row.accuracy = static_cast<double>(trace) / static_cast<double>(total);

  std::size_t classes = 0;
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    if (truth[k] == 0 && predicted[k] == 0) continue;
    ++classes;
    const double tp = static_cast<double>(confusion[k][k]);
    const double precision = predicted[k] ? tp / static_cast<double>(predicted[k]) : 0.0;
    const double recall = truth[k] ? tp / static_cast<double>(truth[k]) : 0.0;
    row.macro_precision += precision;
    row.macro_recall += recall;
    row.macro_f1 += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  row.macro_precision /= static_cast<double>(classes);
  row.macro_recall /= static_cast<double>(classes);
  row.macro_f1 /= static_cast<double>(classes);
  return row;
}

MetricsReport evaluate(const Dataset& data, const std::vector<NamedTrainer>& trainers, std::uint64_t seed) {
  // Sessions of each class in order of first appearance.
  std::array<std::vector<std::string>, kActivityCount> sessions;
  std::map<std::string, std::pair<ActivityLabel, std::size_t>> session_slot;
  for (const auto& fv : data) {
    if (!fv.label) throw ValidationError("evaluation needs labeled feature vectors");
    auto it = session_slot.find(fv.session_id);
    if (it == session_slot.end()) {
      auto& list = sessions[index_of(*fv.label)];
      session_slot.emplace(fv.session_id, std::make_pair(*fv.label, list.size()));
      list.push_back(fv.session_id);
    } else if (it->second.first != *fv.label) {
      throw ValidationError("session '" + fv.session_id + "' mixes activity labels");
    }
  }
  std::size_t folds = 0;
  for (auto label : kAllActivities) {
    const auto count = sessions[index_of(label)].size();
    if (count == 0) continue;
    if (count < 2) {
      throw ValidationError("insufficient sessions: " + std::string(to_string(label)) + " has " +
                            std::to_string(count) + ", leave-one-session-out needs at least 2");
    }
    folds = std::max(folds, count);
  }
  if (folds == 0) throw ValidationError("insufficient sessions: dataset is empty");

  MetricsReport report;
  report.folds = folds;
  for (const auto& named : trainers) {
    ConfusionMatrix confusion{};
    std::array<std::size_t, kActivityCount> expected_counts{};
    for (std::size_t fold = 0; fold < folds; ++fold) {
      Dataset train_set, test_set;
      for (const auto& fv : data) {
        (session_slot.at(fv.session_id).second == fold ? test_set : train_set).push_back(fv);
      }
      if (test_set.empty()) continue;
      const Predictor predict = named.trainer(train_set, seed + fold);
      for (const auto& fv : test_set) {
        ++confusion[index_of(*fv.label)][index_of(predict(fv))];
        ++expected_counts[index_of(*fv.label)];
      }
    }
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      std::size_t row_sum = 0;
      for (auto v : confusion[k]) row_sum += v;
      if (row_sum != expected_counts[k]) throw std::logic_error("confusion row sum differs from test count");
    }
    report.rows.push_back(metrics_from_confusion(named.name, confusion));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const MetricsRow& a, const MetricsRow& b) { return a.macro_f1 > b.macro_f1; });
  return report;
}

MetricsReport evaluate(const Dataset& data, const std::vector<ModelKind>& kinds, std::uint64_t seed) {
  std::vector<NamedTrainer> trainers;
  for (auto kind : kinds) trainers.push_back(model_trainer(kind));
  return evaluate(data, trainers, seed);
}

const MetricsRow* MetricsReport::find(std::string_view model) const {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const MetricsRow& r) { return r.model == model; });
  return it == rows.end() ? nullptr : &*it;
}

json MetricsReport::to_json() const {
  json models = json::array();
  for (const auto& r : rows) {
    models.push_back({{"model", r.model},
                      {"accuracy", r.accuracy},
                      {"macro_precision", r.macro_precision},
                      {"macro_recall", r.macro_recall},
                      {"macro_f1", r.macro_f1},
                      {"confusion", r.confusion}});
  }
  json labels = json::array();
  for (auto l : kAllActivities) labels.push_back(to_string(l));
  return {{"scheme", scheme}, {"folds", folds}, {"labels", labels}, {"models", models}};
}

std::string MetricsReport::to_table() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-6s %9s %9s %9s %9s\n", "model", "accuracy", "precision", "recall", "f1");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6s %9.4f %9.4f %9.4f %9.4f\n", r.model.c_str(), r.accuracy,
                  r.macro_precision, r.macro_recall, r.macro_f1);
    out << line;
  }
  out << "scheme: " << scheme << ", folds: " << folds << '\n';
  return out.str();
}

}  // namespace cinnamon::har
