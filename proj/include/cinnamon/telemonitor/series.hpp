#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cinnamon/telemonitor/types.hpp"

namespace cinnamon::telemonitor {

/// (t, value) pairs sorted by t.
using SeriesPoints = std::vector<std::pair<double, double>>;

/// Buckets [from_t + k*w, from_t + (k+1)*w) over readings with from_t <= t < to_t.
/// Empty buckets are omitted. Throws ValidationError unless from_t < to_t and w > 0.
std::vector<SeriesBucket> bucketize(std::span<const std::pair<double, double>> points, double from_t, double to_t,
                                    double bucket_width_s);

}  // namespace cinnamon::telemonitor
