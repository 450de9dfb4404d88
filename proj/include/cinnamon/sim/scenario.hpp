#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinnamon/activity.hpp"
#include "cinnamon/channel.hpp"
#include "cinnamon/geometry.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon::sim {

/// A stop on the wearable's route. `xy` defaults to the room centroid when
/// only `room` is given; the wearable walks a straight line from the
/// previous waypoint at `speed_mps`, then stays for `dwell_s`.
struct Waypoint {
  std::optional<std::string> room;
  std::optional<Vec2> xy;
  double dwell_s = 0.0;
  double speed_mps = 1.0;
};

struct TrajectoryScript {
  std::string wearable_id = "wearable-1";
  double sample_rate_hz = 10.0;
  double rssi_rate_hz = 10.0;
  double jitter_m = 0.0;  // Gaussian sway while dwelling
  std::vector<Waypoint> waypoints;
};

struct ActivitySession {
  ActivityLabel label = ActivityLabel::Rest;
  double duration_s = 60.0;
  std::string session_id;
};

/// Tunables of the synthetic wearable. noise_scale = 0 gives noise-free
/// signals; session_variability = 0 removes per-session frequency,
/// amplitude and heart-rate spread.
struct ImuModelParams {
  double noise_scale = 1.0;
  double session_variability = 1.0;
};

struct ActivityScript {
  std::vector<ActivitySession> sessions;
  double break_s = 300.0;  // gap between consecutive sessions
  ImuModelParams model;
};

struct EnvSegment {
  double start_t = 0.0;
  double baseline = 0.0;
  double drift_per_s = 0.0;
};

struct EnvSensorScript {
  std::string sensor_id;
  Parameter parameter = Parameter::temperature_c;
  double rate_hz = 1.0;
  double noise_sigma = 0.0;
  std::vector<EnvSegment> segments;  // ordered by start_t
};

struct EnvScript {
  double duration_s = 0.0;
  std::vector<EnvSensorScript> sensors;
};

struct Scenario {
  RoomLayout layout;
  ChannelModel channel;
  TrajectoryScript trajectory;
  ActivityScript activities;
  EnvScript environment;
  std::uint64_t seed = 0;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Waypoints must name known rooms and lie inside them.
void validate_trajectory(const RoomLayout& layout, const TrajectoryScript& script);

/// Throws ParseError on malformed JSON or schema mismatch, ValidationError
/// on invariant violations.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// The three-room apartment shipped as data/scenarios/default.json.
const std::string& default_scenario_text();
Scenario default_scenario();

/// 4 activities x `sessions_per_label` sessions of `session_s` seconds,
/// grouped by activity as in a recording campaign.
ActivityScript recording_protocol(int sessions_per_label = 5, double session_s = 60.0);

}  // namespace cinnamon::sim
