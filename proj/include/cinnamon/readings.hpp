#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cinnamon/activity.hpp"
#include "cinnamon/geometry.hpp"

namespace cinnamon {

/// Monitored quantities. The first eight come from the bulb sensor suite;
/// heart rate comes from the wearable.
enum class Parameter {
  temperature_c,
  humidity_pct,
  co2_ppm,
  voc_ppb,
  ambient_light_lux,
  dust_ug_m3,
  smoke_ppm,
  motion_bool,
  heart_rate_bpm,
};

inline constexpr std::array<Parameter, 9> kAllParameters = {
    Parameter::temperature_c, Parameter::humidity_pct,      Parameter::co2_ppm,
    Parameter::voc_ppb,       Parameter::ambient_light_lux, Parameter::dust_ug_m3,
    Parameter::smoke_ppm,     Parameter::motion_bool,       Parameter::heart_rate_bpm};

std::string_view to_string(Parameter p);
/// Throws ValidationError("unknown parameter ...").
Parameter parse_parameter(std::string_view name);
bool is_environment_parameter(Parameter p);

struct RssiSample {
  double t = 0.0;
  std::string anchor_id;
  std::string wearable_id;
  double rssi_dbm = 0.0;
};

struct ImuSample {
  double t = 0.0;
  std::array<double, 3> accel{};        // m/s^2
  std::array<double, 3> gyro{};         // rad/s
  std::array<double, 3> orientation{};  // roll, pitch, yaw in radians
  std::optional<double> heart_rate_bpm;
  std::string session_id;
  ActivityLabel label = ActivityLabel::Rest;
};

/// One environmental or heart-rate reading; motion_bool is encoded 0/1.
struct EnvReading {
  double t = 0.0;
  std::string sensor_id;
  Parameter parameter = Parameter::temperature_c;
  double value = 0.0;
};

struct TrackSample {
  double t = 0.0;
  Vec2 position;
  std::string room_id;
};

struct GroundTruthTrack {
  std::string wearable_id;
  std::vector<TrackSample> samples;
};

}  // namespace cinnamon
