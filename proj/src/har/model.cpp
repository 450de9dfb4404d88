#include "cinnamon/har/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "cinnamon/errors.hpp"
#include "cinnamon/har/logistic.hpp"
#include "cinnamon/random.hpp"
#include "trees.hpp"

namespace cinnamon::har {

using nlohmann::json;
using detail::Matrix;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR: return "LR";
    case ModelKind::DT: return "DT";
    case ModelKind::RF: return "RF";
    case ModelKind::GB: return "GB";
    case ModelKind::KNN: return "KNN";
    case ModelKind::SVC: return "SVC";
    case ModelKind::GNB: return "GNB";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto kind : kAllModelKinds) {
    if (to_string(kind) == upper) return kind;
  }
  throw ValidationError("unknown model kind '" + std::string(name) + "'");
}

bool is_probabilistic(ModelKind kind) { return kind != ModelKind::SVC; }

Hyperparameters default_hyperparameters(ModelKind kind) {
  switch (kind) {
    case ModelKind::LR: return {{"learning_rate", 0.1}, {"epochs", 500}, {"l2", 0.0}};
    case ModelKind::DT: return {{"max_depth", 8}, {"min_samples_leaf", 2}};
    case ModelKind::RF:
      // max_features 0 means round(sqrt(d)).
      return {{"n_trees", 100}, {"max_depth", 12}, {"min_samples_leaf", 1}, {"max_features", 0}};
    case ModelKind::GB: return {{"n_rounds", 100}, {"max_depth", 3}, {"learning_rate", 0.1}, {"min_samples_leaf", 1}};
    case ModelKind::KNN: return {{"k", 5}};
    case ModelKind::SVC: return {{"lambda", 1e-3}, {"epochs", 500}, {"learning_rate", 0.1}};
    case ModelKind::GNB: return {{"var_smoothing", 1e-9}};
  }
  return {};
}

// --- standardization -------------------------------------------------------

Standardizer Standardizer::fit(const Dataset& data) {
  const std::size_t d = data.front().values.size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.std.assign(d, 0.0);
  for (const auto& fv : data) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += fv.values[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(data.size());
  for (const auto& fv : data) {
    for (std::size_t j = 0; j < d; ++j) s.std[j] += (fv.values[j] - s.mean[j]) * (fv.values[j] - s.mean[j]);
  }
  for (auto& v : s.std) {
    v = std::sqrt(v / static_cast<double>(data.size()));
    if (v < 1e-12) v = 1.0;  // constant feature
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> values) const {
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = (values[j] - mean[j]) / std[j];
  return out;
}

// --- prediction ------------------------------------------------------------

namespace {

Prediction from_scores(std::array<double, kActivityCount> scores) {
  Prediction p;
  p.scores = scores;
  std::size_t best = 0;
  for (std::size_t k = 1; k < kActivityCount; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  p.label = kAllActivities[best];
  return p;
}

std::array<double, kActivityCount> to_array(const std::vector<double>& v) {
  std::array<double, kActivityCount> a{};
  std::copy_n(v.begin(), kActivityCount, a.begin());
  return a;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::array<double, kActivityCount> boost_margins(const BoostParams& p, std::span<const double> x) {
  auto f = p.init;
  for (const auto& round : p.rounds) {
    for (std::size_t k = 0; k < kActivityCount; ++k) f[k] += p.shrinkage * detail::tree_leaf(round[k], x)[0];
  }
  return f;
}

struct Predict {
  std::span<const double> x;

  std::array<double, kActivityCount> operator()(const LogisticParams& p) const {
    return to_array(softmax_scores(p.weights, x));
  }
  std::array<double, kActivityCount> operator()(const TreeParams& p) const {
    return to_array(detail::tree_leaf(p.tree, x));
  }
  std::array<double, kActivityCount> operator()(const ForestParams& p) const {
    std::array<double, kActivityCount> votes{};
    for (const auto& tree : p.trees) {
      const auto& leaf = detail::tree_leaf(tree, x);
      std::size_t best = 0;
      for (std::size_t k = 1; k < kActivityCount; ++k) {
        if (leaf[k] > leaf[best]) best = k;
      }
      votes[best] += 1.0;
    }
    for (auto& v : votes) v /= static_cast<double>(p.trees.size());
    return votes;
  }
  std::array<double, kActivityCount> operator()(const BoostParams& p) const {
    auto f = boost_margins(p, x);
    double total = 0.0;
    for (auto& v : f) {
      v = sigmoid(v);
      total += v;
    }
    for (auto& v : f) v /= total;
    return f;
  }
  std::array<double, kActivityCount> operator()(const KnnParams& p) const {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(p.points.size());
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) d += (p.points[i][j] - x[j]) * (p.points[i][j] - x[j]);
      dist.emplace_back(d, i);
    }
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(p.k), dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::array<double, kActivityCount> votes{};
    for (std::size_t i = 0; i < k; ++i) votes[index_of(p.labels[dist[i].second])] += 1.0;
    for (auto& v : votes) v /= static_cast<double>(k);
    return votes;
  }
  std::array<double, kActivityCount> operator()(const LinearSvcParams& p) const {
    std::array<double, kActivityCount> margins{};
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      double z = p.weights[k].back();
      for (std::size_t j = 0; j < x.size(); ++j) z += p.weights[k][j] * x[j];
      margins[k] = z;
    }
    return margins;
  }
  std::array<double, kActivityCount> operator()(const GaussianNbParams& p) const {
    std::array<double, kActivityCount> log_post{};
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      if (!p.present[k]) {
        log_post[k] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double lp = p.log_prior[k];
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double var = p.variance[k][j];
        const double diff = x[j] - p.mean[k][j];
        lp -= 0.5 * std::log(2.0 * std::numbers::pi * var) + diff * diff / (2.0 * var);
      }
      log_post[k] = lp;
      top = std::max(top, lp);
    }
    double total = 0.0;
    for (auto& v : log_post) {
      v = std::isinf(v) ? 0.0 : std::exp(v - top);
      total += v;
    }
    for (auto& v : log_post) v /= total;
    return log_post;
  }
};

}  // namespace

Model::Model(ModelKind kind, Hyperparameters hyperparameters, Standardizer standardizer, FittedParams params)
    : kind_(kind),
      hyperparameters_(std::move(hyperparameters)),
      standardizer_(std::move(standardizer)),
      params_(std::move(params)) {}

Prediction Model::predict(std::span<const double> features) const {
  if (features.size() != dimension()) {
    throw ValidationError("feature dimension " + std::to_string(features.size()) + " does not match model dimension " +
                          std::to_string(dimension()));
  }
  const auto x = standardizer_.apply(features);
  return from_scores(std::visit(Predict{x}, params_));
}

// --- training --------------------------------------------------------------

namespace {

std::size_t hp_count(const Hyperparameters& h, const std::string& name, double minimum) {
  const double v = h.at(name);
  if (!(v >= minimum) || v != std::floor(v)) {
    throw ValidationError("hyperparameter '" + name + "' must be an integer >= " + std::to_string(static_cast<int>(minimum)));
  }
  return static_cast<std::size_t>(v);
}

double hp_positive(const Hyperparameters& h, const std::string& name, bool allow_zero = false) {
  const double v = h.at(name);
  if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
    throw ValidationError("hyperparameter '" + name + "' must be " + (allow_zero ? ">= 0" : "> 0"));
  }
  return v;
}

struct TrainingSet {
  Matrix x;
  std::vector<ActivityLabel> labels;
  std::vector<int> y;
};

LogisticParams fit_logistic(const TrainingSet& t, const Hyperparameters& h) {
  const double lr = hp_positive(h, "learning_rate");
  const auto epochs = hp_count(h, "epochs", 1);
  const double l2 = hp_positive(h, "l2", true);
  LogisticParams p;
  p.weights.assign(kActivityCount, std::vector<double>(t.x.front().size() + 1, 0.0));
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto grad = softmax_gradient(p.weights, t.x, t.labels, l2);
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      for (std::size_t j = 0; j < p.weights[k].size(); ++j) p.weights[k][j] -= lr * grad[k][j];
    }
  }
  return p;
}

detail::TreeOptions tree_options(const Hyperparameters& h) {
  detail::TreeOptions o;
  o.max_depth = static_cast<int>(hp_count(h, "max_depth", 1));
  o.min_samples_leaf = hp_count(h, "min_samples_leaf", 1);
  return o;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

ForestParams fit_forest(const TrainingSet& t, const Hyperparameters& h, std::uint64_t seed) {
  auto options = tree_options(h);
  const auto n_trees = hp_count(h, "n_trees", 1);
  const auto requested = hp_count(h, "max_features", 0);
  const std::size_t d = t.x.front().size();
  options.max_features = requested == 0
                             ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d)))))
                             : std::min(requested, d);
  auto rng = make_rng(seed, 0x52463);
  std::uniform_int_distribution<std::size_t> pick(0, t.x.size() - 1);
  ForestParams p;
  for (std::size_t b = 0; b < n_trees; ++b) {
    std::vector<std::size_t> rows(t.x.size());
    for (auto& r : rows) r = pick(rng);
    p.trees.push_back(detail::fit_classification_tree(t.x, t.y, std::move(rows), options, &rng));
  }
  return p;
}

BoostParams fit_boosting(const TrainingSet& t, const Hyperparameters& h) {
  detail::TreeOptions options = tree_options(h);
  const auto n_rounds = hp_count(h, "n_rounds", 1);
  BoostParams p;
  p.shrinkage = hp_positive(h, "learning_rate");
  const std::size_t n = t.x.size();

  std::array<std::vector<double>, kActivityCount> targets;
  std::array<std::vector<double>, kActivityCount> margin;
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    targets[k].resize(n);
    double positives = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      targets[k][i] = t.y[i] == static_cast<int>(k) ? 1.0 : 0.0;
      positives += targets[k][i];
    }
    const double prior = std::clamp(positives / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    p.init[k] = std::log(prior / (1.0 - prior));
    margin[k].assign(n, p.init[k]);
  }

  const auto mean_loss = [&] {
    double loss = 0.0;
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        // log(1 + e^{-z}) for positives, log(1 + e^{z}) for negatives, computed stably.
        const double z = targets[k][i] > 0.5 ? margin[k][i] : -margin[k][i];
        loss += z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
      }
    }
    return loss / static_cast<double>(n);
  };

  std::vector<double> gradient(n), hessian(n);
  for (std::size_t round = 0; round < n_rounds; ++round) {
    std::array<Tree, kActivityCount> trees;
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double prob = sigmoid(margin[k][i]);
        gradient[i] = targets[k][i] - prob;
        hessian[i] = prob * (1.0 - prob);
      }
      trees[k] = detail::fit_regression_tree(t.x, gradient, hessian, options);
      for (std::size_t i = 0; i < n; ++i) margin[k][i] += p.shrinkage * detail::tree_leaf(trees[k], t.x[i])[0];
    }
    p.rounds.push_back(std::move(trees));
    p.loss_history.push_back(mean_loss());
  }
  return p;
}

KnnParams fit_knn(const TrainingSet& t, const Hyperparameters& h) {
  KnnParams p;
  p.k = static_cast<int>(hp_count(h, "k", 1));
  p.points = t.x;
  p.labels = t.labels;
  return p;
}

LinearSvcParams fit_svc(const TrainingSet& t, const Hyperparameters& h) {
  const double lambda = hp_positive(h, "lambda", true);
  const auto epochs = hp_count(h, "epochs", 1);
  const double lr = hp_positive(h, "learning_rate");
  const std::size_t n = t.x.size();
  const std::size_t d = t.x.front().size();
  LinearSvcParams p;
  p.weights.assign(kActivityCount, std::vector<double>(d + 1, 0.0));
  std::vector<double> grad(d + 1);
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    auto& w = p.weights[k];
    for (std::size_t e = 1; e <= epochs; ++e) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double target = t.y[i] == static_cast<int>(k) ? 1.0 : -1.0;
        double z = w[d];
        for (std::size_t j = 0; j < d; ++j) z += w[j] * t.x[i][j];
        if (target * z < 1.0) {
          for (std::size_t j = 0; j < d; ++j) grad[j] -= target * t.x[i][j];
          grad[d] -= target;
        }
      }
      const double step = lr / std::sqrt(static_cast<double>(e));
      for (std::size_t j = 0; j < d; ++j) w[j] -= step * (grad[j] / static_cast<double>(n) + lambda * w[j]);
      w[d] -= step * grad[d] / static_cast<double>(n);
    }
  }
  return p;
}

GaussianNbParams fit_gnb(const TrainingSet& t, const Hyperparameters& h) {
  const double smoothing = hp_positive(h, "var_smoothing", true);
  const std::size_t n = t.x.size();
  const std::size_t d = t.x.front().size();

  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : t.x) mean += row[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : t.x) var += (row[j] - mean) * (row[j] - mean);
    max_var = std::max(max_var, var / static_cast<double>(n));
  }
  const double epsilon = std::max(smoothing * max_var, 1e-300);

  GaussianNbParams p;
  p.mean.assign(kActivityCount, std::vector<double>(d, 0.0));
  p.variance.assign(kActivityCount, std::vector<double>(d, 0.0));
  std::array<std::size_t, kActivityCount> counts{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(t.y[i]);
    ++counts[k];
    for (std::size_t j = 0; j < d; ++j) p.mean[k][j] += t.x[i][j];
  }
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    p.present[k] = counts[k] > 0;
    p.log_prior[k] = counts[k] > 0 ? std::log(static_cast<double>(counts[k]) / static_cast<double>(n)) : 0.0;
    if (counts[k] > 0) {
      for (auto& m : p.mean[k]) m /= static_cast<double>(counts[k]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(t.y[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = t.x[i][j] - p.mean[k][j];
      p.variance[k][j] += diff * diff;
    }
  }
  for (std::size_t k = 0; k < kActivityCount; ++k) {
    for (auto& v : p.variance[k]) v = (counts[k] > 0 ? v / static_cast<double>(counts[k]) : 0.0) + epsilon;
  }
  return p;
}

}  // namespace

Model train(const Dataset& data, ModelKind kind, const Hyperparameters& overrides, std::uint64_t seed) {
  if (data.empty()) throw ValidationError("training dataset is empty");
  const std::size_t d = data.front().values.size();
  if (d == 0) throw ValidationError("training vectors have no features");
  std::set<ActivityLabel> classes;
  for (const auto& fv : data) {
    if (fv.values.size() != d) throw ValidationError("training vectors have inconsistent dimensionality");
    if (!fv.label) throw ValidationError("training vector without a label");
    for (double v : fv.values) {
      if (!std::isfinite(v)) throw ValidationError("training vector has a non-finite feature");
    }
    classes.insert(*fv.label);
  }
  if (classes.size() < 2) throw ValidationError("training needs at least two classes");

  Hyperparameters h = default_hyperparameters(kind);
  for (const auto& [name, value] : overrides) {
    if (!h.contains(name)) {
      throw ValidationError("unknown hyperparameter '" + name + "' for " + std::string(to_string(kind)));
    }
    h[name] = value;
  }

  Standardizer standardizer = Standardizer::fit(data);
  TrainingSet t;
  t.x.reserve(data.size());
  for (const auto& fv : data) {
    t.x.push_back(standardizer.apply(fv.values));
    t.labels.push_back(*fv.label);
    t.y.push_back(static_cast<int>(index_of(*fv.label)));
  }

  FittedParams params;
  switch (kind) {
    case ModelKind::LR: params = fit_logistic(t, h); break;
    case ModelKind::DT:
      params = TreeParams{detail::fit_classification_tree(t.x, t.y, all_rows(t.x.size()), tree_options(h), nullptr)};
      break;
    case ModelKind::RF: params = fit_forest(t, h, seed); break;
    case ModelKind::GB: params = fit_boosting(t, h); break;
    case ModelKind::KNN: params = fit_knn(t, h); break;
    case ModelKind::SVC: params = fit_svc(t, h); break;
    case ModelKind::GNB: params = fit_gnb(t, h); break;
  }
  return Model(kind, std::move(h), std::move(standardizer), std::move(params));
}

// --- serialization ---------------------------------------------------------

namespace {

json tree_json(const Tree& tree) {
  json nodes = json::array();
  for (const auto& n : tree) {
    if (n.feature < 0) {
      nodes.push_back({{"value", n.value}});
    } else {
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
    }
  }
  return nodes;
}

Tree tree_from_json(const json& j) {
  Tree tree;
  for (const auto& n : j) {
    TreeNode node;
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    } else {
      node.value = n.at("value").get<std::vector<double>>();
    }
    tree.push_back(std::move(node));
  }
  for (const auto& node : tree) {
    if (node.feature >= 0 && (node.left <= 0 || node.right <= 0 || static_cast<std::size_t>(node.left) >= tree.size() ||
                              static_cast<std::size_t>(node.right) >= tree.size())) {
      throw ParseError("model tree has an out-of-range child index");
    }
  }
  if (tree.empty()) throw ParseError("model tree is empty");
  return tree;
}

std::vector<std::string> label_names(const std::vector<ActivityLabel>& labels) {
  std::vector<std::string> out;
  for (auto l : labels) out.emplace_back(to_string(l));
  return out;
}

struct ParamsToJson {
  json operator()(const LogisticParams& p) const { return {{"weights", p.weights}}; }
  json operator()(const TreeParams& p) const { return {{"tree", tree_json(p.tree)}}; }
  json operator()(const ForestParams& p) const {
    json trees = json::array();
    for (const auto& t : p.trees) trees.push_back(tree_json(t));
    return {{"trees", trees}};
  }
  json operator()(const BoostParams& p) const {
    json rounds = json::array();
    for (const auto& round : p.rounds) {
      json per_class = json::array();
      for (const auto& t : round) per_class.push_back(tree_json(t));
      rounds.push_back(per_class);
    }
    return {{"init", p.init}, {"shrinkage", p.shrinkage}, {"rounds", rounds}, {"loss_history", p.loss_history}};
  }
  json operator()(const KnnParams& p) const {
    return {{"k", p.k}, {"points", p.points}, {"labels", label_names(p.labels)}};
  }
  json operator()(const LinearSvcParams& p) const { return {{"weights", p.weights}}; }
  json operator()(const GaussianNbParams& p) const {
    return {{"log_prior", p.log_prior}, {"mean", p.mean}, {"variance", p.variance}, {"present", p.present}};
  }
};

FittedParams params_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::LR: return LogisticParams{j.at("weights").get<std::vector<std::vector<double>>>()};
    case ModelKind::DT: return TreeParams{tree_from_json(j.at("tree"))};
    case ModelKind::RF: {
      ForestParams p;
      for (const auto& t : j.at("trees")) p.trees.push_back(tree_from_json(t));
      return p;
    }
    case ModelKind::GB: {
      BoostParams p;
      p.init = j.at("init").get<std::array<double, kActivityCount>>();
      p.shrinkage = j.at("shrinkage").get<double>();
      for (const auto& round : j.at("rounds")) {
        if (round.size() != kActivityCount) throw ParseError("boosting round must hold one tree per class");
        std::array<Tree, kActivityCount> trees;
        for (std::size_t k = 0; k < kActivityCount; ++k) trees[k] = tree_from_json(round.at(k));
        p.rounds.push_back(std::move(trees));
      }
      p.loss_history = j.value("loss_history", std::vector<double>{});
      return p;
    }
    case ModelKind::KNN: {
      KnnParams p;
      p.k = j.at("k").get<int>();
      p.points = j.at("points").get<std::vector<std::vector<double>>>();
      for (const auto& name : j.at("labels")) p.labels.push_back(parse_activity(name.get<std::string>()));
      if (p.points.size() != p.labels.size() || p.k < 1) throw ParseError("inconsistent KNN parameters");
      return p;
    }
    case ModelKind::SVC: return LinearSvcParams{j.at("weights").get<std::vector<std::vector<double>>>()};
    case ModelKind::GNB: {
      GaussianNbParams p;
      p.log_prior = j.at("log_prior").get<std::array<double, kActivityCount>>();
      p.mean = j.at("mean").get<std::vector<std::vector<double>>>();
      p.variance = j.at("variance").get<std::vector<std::vector<double>>>();
      p.present = j.at("present").get<std::array<bool, kActivityCount>>();
      return p;
    }
  }
  throw ParseError("unknown model kind");
}

}  // namespace

json Model::to_json() const {
  return {{"kind", to_string(kind_)},
          {"hyperparameters", hyperparameters_},
          {"feature_names", standardizer_.mean.size() == kFeatureCount ? json(feature_names()) : json::array()},
          {"labels", label_names({kAllActivities.begin(), kAllActivities.end()})},
          {"normalization", {{"mean", standardizer_.mean}, {"std", standardizer_.std}}},
          {"params", std::visit(ParamsToJson{}, params_)}};
}

Model Model::from_json(const json& doc) {
  try {
    const ModelKind kind = parse_model_kind(doc.at("kind").get<std::string>());
    Standardizer s;
    s.mean = doc.at("normalization").at("mean").get<std::vector<double>>();
    s.std = doc.at("normalization").at("std").get<std::vector<double>>();
    if (s.mean.size() != s.std.size() || s.mean.empty()) throw ParseError("model normalization stats are inconsistent");
    return Model(kind, doc.at("hyperparameters").get<Hyperparameters>(), std::move(s),
                 params_from_json(kind, doc.at("params")));
  } catch (const json::exception& e) {
    throw ParseError(std::string("model document: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
}

}  // namespace cinnamon::har
