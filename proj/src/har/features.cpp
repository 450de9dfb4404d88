#include "cinnamon/har/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cinnamon/errors.hpp"

namespace cinnamon::har {

namespace {

constexpr double kRateHz = 10.0;
constexpr double kCadenceTolerance = 1e-6;

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> v) {
  Summary s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(v.size()));
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

double zero_crossing_rate(std::span<const double> v, double duration_s) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  int previous = 0;
  std::size_t crossings = 0;
  for (double x : v) {
    const double centered = x - mean;
    const int sign = centered > 1e-9 ? 1 : (centered < -1e-9 ? -1 : 0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++crossings;
    previous = sign;
  }
  return static_cast<double>(crossings) / duration_s;
}

ActivityLabel majority_label(std::span<const ImuSample> samples) {
  std::array<std::size_t, kActivityCount> counts{};
  for (const auto& s : samples) ++counts[index_of(s.label)];
  return kAllActivities[static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin())];
}

}  // namespace

std::vector<RawWindow> make_windows(std::span<const ImuSample> samples, double window_s,
                                    double overlap_fraction) {
  if (!(window_s > 0.0) || !std::isfinite(window_s)) throw ValidationError("window_s must be > 0");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ValidationError("overlap_fraction must be in [0, 1)");
  }
  const auto length = static_cast<std::size_t>(std::max<long long>(1, std::llround(window_s * kRateHz)));
  const auto hop = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(length) * (1.0 - overlap_fraction))));

  std::vector<RawWindow> windows;
  std::size_t run_start = 0;
  while (run_start < samples.size()) {
    std::size_t run_end = run_start + 1;
    while (run_end < samples.size() && samples[run_end].session_id == samples[run_start].session_id &&
           std::abs(samples[run_end].t - samples[run_end - 1].t - 1.0 / kRateHz) < kCadenceTolerance) {
      ++run_end;
    }
    for (std::size_t begin = run_start; begin + length <= run_end; begin += hop) {
      const auto slice = samples.subspan(begin, length);
      windows.push_back({slice.front().session_id, majority_label(slice), slice.front().t,
                         std::vector<ImuSample>(slice.begin(), slice.end())});
    }
    run_start = run_end;
  }
  return windows;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const char* sensor : {"accel", "gyro"}) {
      for (const char* axis : {"x", "y", "z"}) {
        for (const char* stat : {"mean", "std", "min", "max"}) {
          n.push_back(std::string(sensor) + "_" + axis + "_" + stat);
        }
      }
    }
    n.insert(n.end(), {"accel_mag_mean", "accel_mag_std", "gyro_mag_mean", "gyro_mag_std",
                       "accel_z_zero_crossing_rate", "dominant_period_s", "heart_rate_mean",
                       "pitch_range", "pitch_mean"});
    return n;
  }();
  return names;
}

double dominant_period_s(std::span<const double> signal, double rate_hz) {
  const std::size_t n = signal.size();
  if (n < 4) return 0.0;
  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n);
  const std::size_t max_lag = n / 2;
  std::vector<double> acf(max_lag + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    for (std::size_t i = 0; i + lag < n; ++i) acf[lag] += (signal[i] - mean) * (signal[i + lag] - mean);
  }
  if (acf[0] <= 1e-12) return 0.0;

  std::size_t first_negative = 1;
  while (first_negative <= max_lag && acf[first_negative] >= 0.0) ++first_negative;
  if (first_negative > max_lag) return 0.0;

  // First local maximum that reaches half of the strongest correlation in
  // range; later peaks at multiples of the period can alias higher.
  double strongest = 0.0;
  for (std::size_t lag = first_negative; lag <= max_lag; ++lag) strongest = std::max(strongest, acf[lag]);
  if (strongest <= 0.0) return 0.0;
  std::size_t best = 0;
  for (std::size_t lag = first_negative; lag <= max_lag; ++lag) {
    const bool rising = acf[lag] >= acf[lag - 1];
    const bool falling = lag == max_lag || acf[lag] >= acf[lag + 1];
    if (rising && falling && acf[lag] >= 0.5 * strongest) {
      best = lag;
      break;
    }
  }
  if (best == 0) return 0.0;

  double refined = static_cast<double>(best);
  if (best > 0 && best < max_lag) {
    const double left = acf[best - 1];
    const double right = acf[best + 1];
    const double curvature = left - 2.0 * acf[best] + right;
    if (curvature < 0.0) refined += 0.5 * (left - right) / curvature;
  }
  return refined / rate_hz;
}

FeatureVector extract_features(const RawWindow& window) {
  const auto& samples = window.samples;
  if (samples.empty()) throw ValidationError("cannot extract features from an empty window");
  const std::size_t n = samples.size();

  FeatureVector fv;
  fv.values.reserve(kFeatureCount);
  fv.window_start_t = window.start_t;
  fv.session_id = window.session_id;
  fv.label = window.label;

  std::vector<double> column(n);
  const auto push_summary = [&](std::span<const double> v) {
    const Summary s = summarize(v);
    fv.values.insert(fv.values.end(), {s.mean, s.std, s.min, s.max});
  };
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < n; ++i) column[i] = samples[i].accel[axis];
    push_summary(column);
  }
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < n; ++i) column[i] = samples[i].gyro[axis];
    push_summary(column);
  }

  std::vector<double> accel_mag(n), gyro_mag(n), vertical(n), pitch(n);
  double hr_sum = 0.0;
  std::size_t hr_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = samples[i].accel;
    const auto& g = samples[i].gyro;
    accel_mag[i] = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    gyro_mag[i] = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    vertical[i] = a[2];
    pitch[i] = samples[i].orientation[1];
    if (samples[i].heart_rate_bpm) {
      hr_sum += *samples[i].heart_rate_bpm;
      ++hr_count;
    }
  }
  const Summary am = summarize(accel_mag);
  const Summary gm = summarize(gyro_mag);
  const Summary ps = summarize(pitch);
  const double duration_s = static_cast<double>(n) / kRateHz;
  fv.values.insert(fv.values.end(),
                   {am.mean, am.std, gm.mean, gm.std, zero_crossing_rate(vertical, duration_s),
                    dominant_period_s(vertical, kRateHz), hr_count ? hr_sum / static_cast<double>(hr_count) : 0.0,
                    ps.max - ps.min, ps.mean});
  return fv;
}

Dataset build_dataset(std::span<const ImuSample> samples, double window_s, double overlap_fraction) {
  Dataset data;
  for (const auto& w : make_windows(samples, window_s, overlap_fraction)) data.push_back(extract_features(w));
  return data;
}

Dataset apply_feature_mask(const Dataset& dataset, const std::vector<bool>& mask) {
  Dataset out;
  out.reserve(dataset.size());
  for (const auto& fv : dataset) {
    if (fv.values.size() != mask.size()) throw ValidationError("feature mask length mismatch");
    FeatureVector masked = fv;
    masked.values.clear();
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) masked.values.push_back(fv.values[i]);
    }
    out.push_back(std::move(masked));
  }
  return out;
}

}  // namespace cinnamon::har
