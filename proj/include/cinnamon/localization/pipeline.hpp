#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinnamon/channel.hpp"
#include "cinnamon/geometry.hpp"
#include "cinnamon/localization/kalman.hpp"
#include "cinnamon/localization/trilateration.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon::localization {

inline constexpr double kDefaultWindowS = 2.0;
inline constexpr double kMatchToleranceS = 0.5;

struct DistanceEstimate {
  double t = 0.0;
  std::string anchor_id;
  double distance_m = 0.0;
};

struct PositionEstimate {
  double t = 0.0;
  std::string wearable_id;
  std::optional<Vec2> xy;
  double residual_rms_m = 0.0;
  std::optional<std::string> room_id;
  int anchors_used = 0;
};

/// Inverse of the log-distance model: d0 * 10^((p0 - rssi) / (10 n)).
double rssi_to_distance(double rssi_dbm, const ChannelModel& channel);

/// Planar distance from a slant range to a ceiling anchor, floored at 1e-6 m.
double horizontal_distance(double slant_m, double mount_height_m);

/// Trilaterates against the layout's anchor positions and assigns a room.
/// Throws InsufficientAnchorsError, CollinearAnchorsError, or
/// ValidationError for an anchor missing from the layout.
PositionEstimate trilaterate(std::span<const DistanceEstimate> distances, const RoomLayout& layout);

/// Fixed windows of window_s from each wearable's first sample. Per window:
/// the three anchors with the largest mean RSSI, each series optionally
/// Kalman-filtered, last value inverted to distance, trilaterated, room
/// assigned. Windows with fewer than three anchors yield xy = none.
std::vector<PositionEstimate> localize_stream(std::span<const RssiSample> samples,
                                              const RoomLayout& layout,
                                              const ChannelModel& channel,
                                              const std::optional<KalmanParams>& kalman,
                                              double window_s = kDefaultWindowS);

struct LocalizationReport {
  std::size_t n_estimates = 0;  // matched estimates
  std::size_t n_positioned = 0; // matched estimates with xy
  double mean_position_error_m = 0.0;
  double median_position_error_m = 0.0;
  double room_accuracy = 0.0;
  std::vector<std::string> rooms;  // confusion labels; "none" last when used
  std::vector<std::vector<std::size_t>> confusion;  // [truth][estimate]

  nlohmann::json to_json() const;
};

/// Matches each estimate to the nearest track sample within 0.5 s.
/// Throws ValidationError when nothing matches.
LocalizationReport evaluate_localization(std::span<const PositionEstimate> estimates,
                                         const GroundTruthTrack& truth);

nlohmann::json to_json(const PositionEstimate& estimate);

}  // namespace cinnamon::localization
