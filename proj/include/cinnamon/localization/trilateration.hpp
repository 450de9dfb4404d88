#pragma once

#include <span>
#include <string>

#include "cinnamon/errors.hpp"
#include "cinnamon/geometry.hpp"

namespace cinnamon::localization {

class CollinearAnchorsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientAnchorsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Anchor triangles below this area count as collinear.
inline constexpr double kCollinearAreaTolerance = 1e-6;

struct RangeMeasurement {
  Vec2 anchor;
  double distance_m = 0.0;
};

struct TrilaterationResult {
  Vec2 position;
  double residual_rms_m = 0.0;
  int iterations = 0;
};

/// Sum over measurements of (|p - anchor| - distance)^2.
double range_cost(Vec2 p, std::span<const RangeMeasurement> ranges);

/// Gauss-Newton with step halving, started from the linearized least-squares
/// solution (first circle subtracted from the rest) and from every pairwise
/// circle intersection; the lowest-cost end point wins. Works whether or not
/// the circles share a common intersection.
TrilaterationResult trilaterate(std::span<const RangeMeasurement> ranges);

}  // namespace cinnamon::localization
