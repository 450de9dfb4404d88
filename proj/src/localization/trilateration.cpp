#include "cinnamon/localization/trilateration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cinnamon::localization {

namespace {

constexpr double kStepTolerance = 1e-9;
constexpr int kMaxIterations = 50;
constexpr int kMaxHalvings = 40;

double triangle_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * std::abs(cross(b - a, c - a)); }

bool all_collinear(std::span<const RangeMeasurement> ranges) {
  const std::size_t n = ranges.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (triangle_area(ranges[i].anchor, ranges[j].anchor, ranges[k].anchor) >= kCollinearAreaTolerance) {
          return false;
        }
      }
    }
  }
  return true;
}

// Solves the 2x2 system [a b; b c] x = [u v]; false when singular.
bool solve_symmetric_2x2(double a, double b, double c, double u, double v, Vec2& x) {
  const double det = a * c - b * b;
  const double scale = std::max({std::abs(a * c), b * b, 1e-300});
  if (std::abs(det) <= 1e-14 * scale) return false;
  x = {(c * u - b * v) / det, (a * v - b * u) / det};
  return true;
}

Vec2 linearized_start(std::span<const RangeMeasurement> ranges) {
  // 2 (a_i - a_0) . p = d_0^2 - d_i^2 + |a_i|^2 - |a_0|^2
  const Vec2 a0 = ranges[0].anchor;
  const double d0 = ranges[0].distance_m;
  double ata_xx = 0.0, ata_xy = 0.0, ata_yy = 0.0, atb_x = 0.0, atb_y = 0.0;
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    const Vec2 ai = ranges[i].anchor;
    const double di = ranges[i].distance_m;
    const Vec2 row = 2.0 * (ai - a0);
    const double rhs = d0 * d0 - di * di + dot(ai, ai) - dot(a0, a0);
    ata_xx += row.x * row.x;
    ata_xy += row.x * row.y;
    ata_yy += row.y * row.y;
    atb_x += row.x * rhs;
    atb_y += row.y * rhs;
  }
  Vec2 p;
  if (solve_symmetric_2x2(ata_xx, ata_xy, ata_yy, atb_x, atb_y, p)) return p;
  Vec2 centroid;
  for (const auto& r : ranges) centroid = centroid + r.anchor;
  return (1.0 / static_cast<double>(ranges.size())) * centroid;
}

// Intersections of each pair of circles; for disjoint or nested pairs, the
// point on the centre line between the two rims.
std::vector<Vec2> pairwise_starts(std::span<const RangeMeasurement> ranges) {
  std::vector<Vec2> starts;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    for (std::size_t j = i + 1; j < ranges.size(); ++j) {
      const Vec2 a = ranges[i].anchor, b = ranges[j].anchor;
      const double ra = ranges[i].distance_m, rb = ranges[j].distance_m;
      const double d = distance(a, b);
      if (d == 0.0) continue;
      const Vec2 u = (1.0 / d) * (b - a);
      const double along = (d * d + ra * ra - rb * rb) / (2.0 * d);
      const double h2 = ra * ra - along * along;
      if (h2 <= 0.0) {
        starts.push_back(a + std::clamp(along, -ra, ra) * u);
        continue;
      }
      const double h = std::sqrt(h2);
      const Vec2 n{-u.y, u.x};
      starts.push_back(a + along * u + h * n);
      starts.push_back(a + along * u - h * n);
    }
  }
  return starts;
}

struct Descent {
  Vec2 position;
  double cost = 0.0;
  int iterations = 0;
};

Descent gauss_newton(Vec2 p, std::span<const RangeMeasurement> ranges) {
  double cost = range_cost(p, ranges);
  int iteration = 0;
  for (; iteration < kMaxIterations; ++iteration) {
    // Normal equations of the linearized residuals r_i(p) = |p - a_i| - d_i.
    double jtj_xx = 0.0, jtj_xy = 0.0, jtj_yy = 0.0, jtr_x = 0.0, jtr_y = 0.0;
    for (const auto& r : ranges) {
      const Vec2 diff = p - r.anchor;
      const double len = norm(diff);
      if (len == 0.0) continue;
      const Vec2 grad = (1.0 / len) * diff;
      const double residual = len - r.distance_m;
      jtj_xx += grad.x * grad.x;
      jtj_xy += grad.x * grad.y;
      jtj_yy += grad.y * grad.y;
      jtr_x += grad.x * residual;
      jtr_y += grad.y * residual;
    }
    Vec2 step;
    if (!solve_symmetric_2x2(jtj_xx, jtj_xy, jtj_yy, -jtr_x, -jtr_y, step)) break;

    double next_cost = range_cost(p + step, ranges);
    int halvings = 0;
    while (next_cost > cost && halvings < kMaxHalvings) {
      step = 0.5 * step;
      next_cost = range_cost(p + step, ranges);
      ++halvings;
    }
    if (next_cost > cost) break;
    p = p + step;
    cost = next_cost;
    if (norm(step) < kStepTolerance) {
      ++iteration;
      break;
    }
  }
  return {p, cost, iteration};
}

}  // namespace

double range_cost(Vec2 p, std::span<const RangeMeasurement> ranges) {
  double cost = 0.0;
  for (const auto& r : ranges) {
    const double residual = distance(p, r.anchor) - r.distance_m;
    cost += residual * residual;
  }
  return cost;
}

TrilaterationResult trilaterate(std::span<const RangeMeasurement> ranges) {
  if (ranges.size() < 3) {
    throw InsufficientAnchorsError("trilateration needs at least 3 anchors, got " +
                                   std::to_string(ranges.size()));
  }
  if (all_collinear(ranges)) throw CollinearAnchorsError("trilateration anchors are collinear");

  auto best = gauss_newton(linearized_start(ranges), ranges);
  for (const auto& start : pairwise_starts(ranges)) {
    const auto candidate = gauss_newton(start, ranges);
    if (candidate.cost < best.cost) best = candidate;
  }
  return {best.position, std::sqrt(best.cost / static_cast<double>(ranges.size())), best.iterations};
}

}  // namespace cinnamon::localization
