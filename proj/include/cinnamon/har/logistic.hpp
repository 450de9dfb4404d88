#pragma once

#include <span>
#include <vector>

#include "cinnamon/activity.hpp"

namespace cinnamon::har {

using WeightMatrix = std::vector<std::vector<double>>;  // [class][feature..., bias]

/// Mean softmax cross-entropy plus (l2 / 2) * |W without bias|^2.
double softmax_loss(const WeightMatrix& weights, const std::vector<std::vector<double>>& x,
                    std::span<const ActivityLabel> y, double l2);

/// Analytic gradient of softmax_loss with the shape of `weights`.
WeightMatrix softmax_gradient(const WeightMatrix& weights, const std::vector<std::vector<double>>& x,
                              std::span<const ActivityLabel> y, double l2);

/// Class probabilities for one standardized feature vector.
std::vector<double> softmax_scores(const WeightMatrix& weights, std::span<const double> x);

}  // namespace cinnamon::har
