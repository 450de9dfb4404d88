#include "cinnamon/har/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace cinnamon::har {

std::vector<double> softmax_scores(const WeightMatrix& weights, std::span<const double> x) {
  std::vector<double> logits(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const auto& w = weights[k];
    double z = w.back();
    for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
    logits[k] = z;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    total += z;
  }
  for (double& z : logits) z /= total;
  return logits;
}

double softmax_loss(const WeightMatrix& weights, const std::vector<std::vector<double>>& x,
                    std::span<const ActivityLabel> y, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = softmax_scores(weights, x[i]);
    loss -= std::log(std::max(p[index_of(y[i])], 1e-300));
  }
  loss /= static_cast<double>(x.size());
  double penalty = 0.0;
  for (const auto& w : weights) {
    for (std::size_t j = 0; j + 1 < w.size(); ++j) penalty += w[j] * w[j];
  }
  return loss + 0.5 * l2 * penalty;
}

WeightMatrix softmax_gradient(const WeightMatrix& weights, const std::vector<std::vector<double>>& x,
                              std::span<const ActivityLabel> y, double l2) {
  WeightMatrix grad(weights.size(), std::vector<double>(weights.front().size(), 0.0));
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = softmax_scores(weights, x[i]);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const double err = (p[k] - (k == index_of(y[i]) ? 1.0 : 0.0)) * inv_n;
      auto& g = grad[k];
      for (std::size_t j = 0; j < x[i].size(); ++j) g[j] += err * x[i][j];
      g.back() += err;
    }
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t j = 0; j + 1 < weights[k].size(); ++j) grad[k][j] += l2 * weights[k][j];
  }
  return grad;
}

}  // namespace cinnamon::har
