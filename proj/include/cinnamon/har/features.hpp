#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cinnamon/activity.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon::har {

inline constexpr double kDefaultWindowS = 3.0;
inline constexpr double kDefaultOverlap = 0.5;
inline constexpr std::size_t kFeatureCount = 33;

/// Contiguous slice of one session's samples.
struct RawWindow {
  std::string session_id;
  ActivityLabel label = ActivityLabel::Rest;  // majority label
  double start_t = 0.0;
  std::vector<ImuSample> samples;
};

/// Sliding windows that never cross a session boundary (a change of
/// session_id or a break in the 10 Hz cadence). Sessions shorter than one
/// window contribute nothing.
std::vector<RawWindow> make_windows(std::span<const ImuSample> samples,
                                    double window_s = kDefaultWindowS,
                                    double overlap_fraction = kDefaultOverlap);

struct FeatureVector {
  std::vector<double> values;
  double window_start_t = 0.0;
  std::string session_id;
  std::optional<ActivityLabel> label;
};

using Dataset = std::vector<FeatureVector>;

/// Stable, ordered feature names (33 entries).
const std::vector<std::string>& feature_names();

/// Dominant period of a 10 Hz signal from its first autocorrelation peak
/// past the first zero crossing, parabolically interpolated. 0 when the
/// signal has no oscillation.
double dominant_period_s(std::span<const double> signal, double rate_hz = 10.0);

FeatureVector extract_features(const RawWindow& window);

/// make_windows + extract_features over a whole recording.
Dataset build_dataset(std::span<const ImuSample> samples, double window_s = kDefaultWindowS,
                      double overlap_fraction = kDefaultOverlap);

/// Keeps only the features whose mask entry is true.
Dataset apply_feature_mask(const Dataset& dataset, const std::vector<bool>& mask);

}  // namespace cinnamon::har
