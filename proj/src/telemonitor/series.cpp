#include "cinnamon/telemonitor/series.hpp"

#include <algorithm>
#include <cmath>

#include "cinnamon/errors.hpp"

namespace cinnamon::telemonitor {

std::vector<SeriesBucket> bucketize(std::span<const std::pair<double, double>> points, double from_t, double to_t,
                                    double bucket_width_s) {
  if (!std::isfinite(from_t) || !std::isfinite(to_t) || !(from_t < to_t)) {
    throw ValidationError("series range needs from < to");
  }
  if (!std::isfinite(bucket_width_s) || !(bucket_width_s > 0.0)) {
    throw ValidationError("bucket width must be > 0");
  }
  const auto begin = std::lower_bound(points.begin(), points.end(), from_t,
                                      [](const auto& p, double t) { return p.first < t; });
  std::vector<SeriesBucket> out;
  double sum = 0.0;
  long long current = -1;
  const auto close = [&] {
    if (out.empty() || out.back().count == 0) return;
    out.back().mean = sum / static_cast<double>(out.back().count);
  };
  for (auto it = begin; it != points.end() && it->first < to_t; ++it) {
    const auto k = static_cast<long long>(std::floor((it->first - from_t) / bucket_width_s));
    if (k != current) {
      close();
      current = k;
      sum = 0.0;
      out.push_back({from_t + static_cast<double>(k) * bucket_width_s, bucket_width_s, 0, 0.0, it->second,
                     it->second});
    }
    auto& b = out.back();
    ++b.count;
    sum += it->second;
    b.min = std::min(b.min, it->second);
    b.max = std::max(b.max, it->second);
  }
  close();
  return out;
}

}  // namespace cinnamon::telemonitor
