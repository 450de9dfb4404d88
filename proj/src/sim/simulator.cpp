#include "cinnamon/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cinnamon/errors.hpp"
#include "cinnamon/random.hpp"

namespace cinnamon::sim {

namespace {

// Stream ids keep the emitters' random sequences independent.
constexpr std::uint64_t kTrackStream = 1;
constexpr std::uint64_t kRssiStream = 2;
constexpr std::uint64_t kImuStream = 3;
constexpr std::uint64_t kEnvStream = 4;

struct Leg {
  double start_t;
  double duration;
  Vec2 from;
  Vec2 to;
  bool dwell;
};

Vec2 waypoint_position(const RoomLayout& layout, const Waypoint& w) {
  if (w.xy) return *w.xy;
  return polygon_centroid(layout.find_room(*w.room)->polygon);
}

struct GaitModel {
  double freq_hz;
  double accel_amp;    // vertical, m/s^2
  double gyro_amp;     // rad/s
  double pitch_amp;    // rad
  double pitch_offset; // rad, posture lean
  double accel_noise;  // m/s^2
  double gyro_noise;   // rad/s
  double hr_low;
  double hr_high;
};

GaitModel gait_for(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Rest: return {0.0, 0.0, 0.0, 0.0, 0.0, 0.05, 0.01, 60.0, 75.0};
    case ActivityLabel::SlowWalk: return {1.4, 1.5, 0.8, 0.05, 0.0, 0.3, 0.1, 80.0, 100.0};
    case ActivityLabel::FastWalk: return {2.2, 3.0, 1.6, 0.05, 0.0, 0.3, 0.1, 110.0, 140.0};
    case ActivityLabel::Stairs: return {1.6, 2.5, 1.2, 0.2, 0.15, 0.3, 0.1, 120.0, 150.0};
  }
  throw ValidationError("unknown activity label");
}

}  // namespace

GroundTruthTrack simulate_track(const RoomLayout& layout, const TrajectoryScript& script,
                                std::uint64_t seed) {
  validate_trajectory(layout, script);

  std::vector<Leg> legs;
  double clock = 0.0;
  Vec2 previous = waypoint_position(layout, script.waypoints.front());
  for (std::size_t i = 0; i < script.waypoints.size(); ++i) {
    const auto& w = script.waypoints[i];
    const Vec2 target = waypoint_position(layout, w);
    if (i > 0) {
      const double travel = distance(previous, target) / w.speed_mps;
      if (travel > 0.0) {
        legs.push_back({clock, travel, previous, target, false});
        clock += travel;
      }
    }
    if (w.dwell_s > 0.0) {
      legs.push_back({clock, w.dwell_s, target, target, true});
      clock += w.dwell_s;
    }
    previous = target;
  }
  if (legs.empty()) legs.push_back({0.0, 0.0, previous, previous, true});

  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(clock * script.sample_rate_hz + 1e-9)));
  auto rng = make_rng(seed, kTrackStream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  GroundTruthTrack track;
  track.wearable_id = script.wearable_id;
  track.samples.reserve(count);
  std::size_t leg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / script.sample_rate_hz;
    while (leg + 1 < legs.size() && t >= legs[leg + 1].start_t) ++leg;
    const Leg& current = legs[leg];
    Vec2 p = current.to;
    if (!current.dwell) {
      const double f = std::clamp((t - current.start_t) / current.duration, 0.0, 1.0);
      p = current.from + f * (current.to - current.from);
    }
    const double jx = gauss(rng);
    const double jy = gauss(rng);
    auto room = assign_room(p, layout);
    if (!room) throw ValidationError("trajectory leaves the building at t=" + std::to_string(t));
    if (current.dwell && script.jitter_m > 0.0) {
      const Vec2 swayed{p.x + script.jitter_m * jx, p.y + script.jitter_m * jy};
      if (assign_room(swayed, layout) == room) p = swayed;
    }
    track.samples.push_back({t, p, *room});
  }
  return track;
}

std::vector<RssiSample> emit_rssi(const GroundTruthTrack& track, const RoomLayout& layout,
                                  const ChannelModel& channel, double rate_hz,
                                  std::uint64_t seed) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ValidationError("rate_hz must be > 0");
  channel.validate();
  std::vector<RssiSample> out;
  if (track.samples.empty()) return out;

  auto rng = make_rng(seed, kRssiStream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const auto& samples = track.samples;
  const double t0 = samples.front().t;
  const double t_end = samples.back().t;
  std::size_t j = 0;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) / rate_hz;
    if (t > t_end + 1e-12) break;
    while (j + 1 < samples.size() && samples[j + 1].t <= t) ++j;
    Vec2 pos = samples[j].position;
    if (j + 1 < samples.size() && samples[j].t < t) {
      const double f = (t - samples[j].t) / (samples[j + 1].t - samples[j].t);
      pos = samples[j].position + f * (samples[j + 1].position - samples[j].position);
    }
    for (const auto& anchor : layout.anchors) {
      const double slant = std::hypot(distance(pos, anchor.position), anchor.mount_height);
      double rssi = channel.mean_rssi(slant) + channel.shadow_sigma_db * gauss(rng);
      const double u = uniform(rng);
      const double drop = uniform(rng) * channel.outlier_max_drop_db;
      if (u < channel.outlier_probability) rssi -= drop;
      out.push_back({t, anchor.id, track.wearable_id, rssi});
    }
  }
  return out;
}

std::vector<ImuSample> emit_imu(const ActivityScript& script, std::uint64_t seed) {
  auto rng = make_rng(seed, kImuStream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> symmetric(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double noise = script.model.noise_scale;
  const double spread = script.model.session_variability;

  std::vector<ImuSample> out;
  double session_start = 0.0;
  for (const auto& session : script.sessions) {
    if (!(session.duration_s > 0.0)) {
      throw ValidationError("session '" + session.session_id + "' duration must be > 0");
    }
    const GaitModel gait = gait_for(session.label);
    const double freq = gait.freq_hz * (1.0 + 0.05 * spread * symmetric(rng));
    const double amp = 1.0 + 0.10 * spread * symmetric(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const double hr_draw = unit(rng);
    const double hr = gait.hr_low + (gait.hr_high - gait.hr_low) * (spread > 0.0 ? hr_draw : 0.5);
    const double roll0 = 0.05 * spread * symmetric(rng);
    const double pitch0 = gait.pitch_offset + 0.05 * spread * symmetric(rng);
    const double yaw0 = std::numbers::pi * spread * symmetric(rng);

    const double accel_amp = gait.accel_amp * amp;
    const double gyro_amp = gait.gyro_amp * amp;
    const double omega = 2.0 * std::numbers::pi * freq;
    const auto count = static_cast<std::size_t>(std::llround(session.duration_s * kImuRateHz));
    for (std::size_t k = 0; k < count; ++k) {
      const double tau = static_cast<double>(k) / kImuRateHz;
      const double s = std::sin(omega * tau + phase);
      const double c = std::cos(omega * tau + phase);
      ImuSample sample;
      sample.t = session_start + tau;
      sample.accel = {0.4 * accel_amp * c + noise * gait.accel_noise * gauss(rng),
                      noise * gait.accel_noise * gauss(rng),
                      kGravity + accel_amp * s + noise * gait.accel_noise * gauss(rng)};
      sample.gyro = {gyro_amp * s + noise * gait.gyro_noise * gauss(rng),
                     0.5 * gyro_amp * c + noise * gait.gyro_noise * gauss(rng),
                     noise * gait.gyro_noise * gauss(rng)};
      sample.orientation = {roll0 + 0.25 * gait.pitch_amp * c + noise * 0.01 * gauss(rng),
                            pitch0 + gait.pitch_amp * s + noise * 0.01 * gauss(rng),
                            yaw0 + noise * 0.01 * gauss(rng)};
      sample.heart_rate_bpm = hr;
      sample.session_id = session.session_id;
      sample.label = session.label;
      out.push_back(std::move(sample));
    }
    session_start += session.duration_s + script.break_s;
  }
  return out;
}

std::vector<EnvReading> emit_environment(const EnvScript& script, std::uint64_t seed) {
  auto rng = make_rng(seed, kEnvStream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  struct Tagged {
    EnvReading reading;
    std::size_t sensor_index;
  };
  std::vector<Tagged> tagged;
  for (std::size_t s = 0; s < script.sensors.size(); ++s) {
    const auto& sensor = script.sensors[s];
    if (!is_environment_parameter(sensor.parameter)) {
      throw ValidationError("unknown parameter '" + std::string(to_string(sensor.parameter)) +
                            "' for environment sensor '" + sensor.sensor_id + "'");
    }
    if (!(sensor.rate_hz > 0.0)) throw ValidationError("sensor '" + sensor.sensor_id + "' rate_hz must be > 0");
    if (sensor.segments.empty()) throw ValidationError("sensor '" + sensor.sensor_id + "' has no segments");
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) / sensor.rate_hz;
      if (t >= script.duration_s) break;
      std::size_t seg = 0;
      while (seg + 1 < sensor.segments.size() && sensor.segments[seg + 1].start_t <= t) ++seg;
      const auto& segment = sensor.segments[seg];
      double value = segment.baseline + segment.drift_per_s * (t - segment.start_t) +
                     sensor.noise_sigma * gauss(rng);
      if (sensor.parameter == Parameter::motion_bool) value = value >= 0.5 ? 1.0 : 0.0;
      tagged.push_back({{t, sensor.sensor_id, sensor.parameter, value}, s});
    }
  }
  std::stable_sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
    if (a.reading.t != b.reading.t) return a.reading.t < b.reading.t;
    return a.sensor_index < b.sensor_index;
  });
  std::vector<EnvReading> out;
  out.reserve(tagged.size());
  for (auto& t : tagged) out.push_back(std::move(t.reading));
  return out;
}

}  // namespace cinnamon::sim
