#pragma once

#include <random>
#include <span>
#include <vector>

#include "cinnamon/har/model.hpp"

namespace cinnamon::har::detail {

using Matrix = std::vector<std::vector<double>>;

struct TreeOptions {
  int max_depth = 8;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0: every feature at every split
};

/// CART with Gini impurity; leaves store class fractions over all four labels.
Tree fit_classification_tree(const Matrix& x, std::span<const int> y, std::vector<std::size_t> rows,
                             const TreeOptions& options, std::mt19937_64* rng);

/// Least-squares split on `gradient`; leaves store the Newton value
/// sum(gradient) / sum(hessian) of their rows.
Tree fit_regression_tree(const Matrix& x, std::span<const double> gradient, std::span<const double> hessian,
                         const TreeOptions& options);

const std::vector<double>& tree_leaf(const Tree& tree, std::span<const double> x);

}  // namespace cinnamon::har::detail
