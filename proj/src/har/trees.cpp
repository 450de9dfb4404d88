#include "trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cinnamon::har::detail {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
  double gap = 0.0;
};

// Equal-score candidates keep the widest gap between neighbouring values.
bool improves(double score, double gap, const Split& best, bool lower_is_better) {
  const double tolerance = 1e-9 * std::max(1.0, std::abs(best.score));
  const double delta = lower_is_better ? best.score - score : score - best.score;
  if (delta > tolerance) return true;
  return best.feature >= 0 && delta >= -tolerance && gap > best.gap;
}

double split_threshold(double below, double above) {
  const double mid = below + 0.5 * (above - below);
  return mid < above ? mid : below;
}

std::vector<std::size_t> candidate_features(std::size_t dim, std::size_t max_features, std::mt19937_64* rng) {
  std::vector<std::size_t> features(dim);
  std::iota(features.begin(), features.end(), 0);
  if (max_features == 0 || max_features >= dim || rng == nullptr) return features;
  // Partial Fisher-Yates, then restore ascending order so ties resolve by index.
  for (std::size_t i = 0; i < max_features; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, dim - 1);
    std::swap(features[i], features[pick(*rng)]);
  }
  features.resize(max_features);
  std::sort(features.begin(), features.end());
  return features;
}

class ClassificationBuilder {
 public:
  ClassificationBuilder(const Matrix& x, std::span<const int> y, const TreeOptions& options,
                        std::mt19937_64* rng)
      : x_(x), y_(y), options_(options), rng_(rng) {}

  Tree build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  using Counts = std::array<std::size_t, kActivityCount>;

  static double gini_mass(const Counts& c, std::size_t n) {
    // n * gini
    if (n == 0) return 0.0;
    double sum_sq = 0.0;
    for (auto v : c) sum_sq += static_cast<double>(v) * static_cast<double>(v);
    return static_cast<double>(n) - sum_sq / static_cast<double>(n);
  }

  int grow(std::vector<std::size_t> rows, int depth) {
    Counts counts{};
    for (auto r : rows) ++counts[static_cast<std::size_t>(y_[r])];
    const int index = static_cast<int>(tree_.size());
    tree_.push_back({});
    {
      auto& leaf = tree_.back().value;
      leaf.resize(kActivityCount);
      for (std::size_t k = 0; k < kActivityCount; ++k) {
        leaf[k] = static_cast<double>(counts[k]) / static_cast<double>(rows.size());
      }
    }
    const double parent = gini_mass(counts, rows.size());
    if (depth >= options_.max_depth || parent <= 1e-12 || rows.size() < 2 * options_.min_samples_leaf) {
      return index;
    }

    Split best;
    best.score = parent - 1e-12;
    std::vector<std::size_t> sorted = rows;
    for (auto f : candidate_features(x_.front().size(), options_.max_features, rng_)) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return x_[a][f] < x_[b][f] || (x_[a][f] == x_[b][f] && a < b);
      });
      Counts left{};
      Counts right = counts;
      const std::size_t n = sorted.size();
      for (std::size_t pos = 1; pos < n; ++pos) {
        const auto moved = static_cast<std::size_t>(y_[sorted[pos - 1]]);
        ++left[moved];
        --right[moved];
        const double below = x_[sorted[pos - 1]][f];
        const double above = x_[sorted[pos]][f];
        if (below == above) continue;
        if (pos < options_.min_samples_leaf || n - pos < options_.min_samples_leaf) continue;
        const double score = gini_mass(left, pos) + gini_mass(right, n - pos);
        if (improves(score, above - below, best, true)) {
          best = {static_cast<int>(f), split_threshold(below, above), score, above - below};
        }
      }
    }
    if (best.feature < 0) return index;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (x_[r][static_cast<std::size_t>(best.feature)] <= best.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = grow(std::move(left_rows), depth + 1);
    const int right = grow(std::move(right_rows), depth + 1);
    tree_[index].feature = best.feature;
    tree_[index].threshold = best.threshold;
    tree_[index].left = left;
    tree_[index].right = right;
    return index;
  }

  const Matrix& x_;
  std::span<const int> y_;
  TreeOptions options_;
  std::mt19937_64* rng_;
  Tree tree_;
};

class RegressionBuilder {
 public:
  RegressionBuilder(const Matrix& x, std::span<const double> g, std::span<const double> h,
                    const TreeOptions& options)
      : x_(x), g_(g), h_(h), options_(options) {}

  Tree build() {
    std::vector<std::size_t> rows(x_.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    double g_sum = 0.0, h_sum = 0.0;
    for (auto r : rows) {
      g_sum += g_[r];
      h_sum += h_[r];
    }
    const int index = static_cast<int>(tree_.size());
    tree_.push_back({});
    tree_.back().value = {h_sum > 1e-12 ? g_sum / h_sum : 0.0};
    const auto n = rows.size();
    if (depth >= options_.max_depth || n < 2 * options_.min_samples_leaf) return index;

    // Maximize S_l^2 / n_l + S_r^2 / n_r, i.e. minimize the squared error of g.
    const double parent = g_sum * g_sum / static_cast<double>(n);
    Split best;
    best.score = parent + 1e-12;
    std::vector<std::size_t> sorted = rows;
    for (std::size_t f = 0; f < x_.front().size(); ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return x_[a][f] < x_[b][f] || (x_[a][f] == x_[b][f] && a < b);
      });
      double left_sum = 0.0;
      for (std::size_t pos = 1; pos < n; ++pos) {
        left_sum += g_[sorted[pos - 1]];
        const double below = x_[sorted[pos - 1]][f];
        const double above = x_[sorted[pos]][f];
        if (below == above) continue;
        if (pos < options_.min_samples_leaf || n - pos < options_.min_samples_leaf) continue;
        const double right_sum = g_sum - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(pos) +
                             right_sum * right_sum / static_cast<double>(n - pos);
        if (improves(score, above - below, best, false)) {
          best = {static_cast<int>(f), split_threshold(below, above), score, above - below};
        }
      }
    }
    if (best.feature < 0) return index;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (x_[r][static_cast<std::size_t>(best.feature)] <= best.threshold ? left_rows : right_rows).push_back(r);
    }
    const int left = grow(std::move(left_rows), depth + 1);
    const int right = grow(std::move(right_rows), depth + 1);
    tree_[index].feature = best.feature;
    tree_[index].threshold = best.threshold;
    tree_[index].left = left;
    tree_[index].right = right;
    return index;
  }

  const Matrix& x_;
  std::span<const double> g_;
  std::span<const double> h_;
  TreeOptions options_;
  Tree tree_;
};

}  // namespace

Tree fit_classification_tree(const Matrix& x, std::span<const int> y, std::vector<std::size_t> rows,
                             const TreeOptions& options, std::mt19937_64* rng) {
  return ClassificationBuilder(x, y, options, rng).build(std::move(rows));
}

Tree fit_regression_tree(const Matrix& x, std::span<const double> gradient, std::span<const double> hessian,
                         const TreeOptions& options) {
  return RegressionBuilder(x, gradient, hessian, options).build();
}

const std::vector<double>& tree_leaf(const Tree& tree, std::span<const double> x) {
  std::size_t node = 0;
  while (tree[node].feature >= 0) {
    const auto& n = tree[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return tree[node].value;
}

}  // namespace cinnamon::har::detail
