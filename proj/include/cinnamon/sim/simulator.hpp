#pragma once

#include <cstdint>
#include <vector>

#include "cinnamon/sim/scenario.hpp"

namespace cinnamon::sim {

inline constexpr double kGravity = 9.81;
inline constexpr double kImuRateHz = 10.0;

GroundTruthTrack simulate_track(const RoomLayout& layout, const TrajectoryScript& script,
                                std::uint64_t seed);
inline GroundTruthTrack simulate_track(const Scenario& scenario, std::uint64_t seed) {
  return simulate_track(scenario.layout, scenario.trajectory, seed);
}

/// One sample per anchor per tick; ticks at rate_hz from the first track
/// sample, positions linearly interpolated along the track. Distances are
/// 3-D with the wearable on the floor plane and anchors at mount_height.
std::vector<RssiSample> emit_rssi(const GroundTruthTrack& track, const RoomLayout& layout,
                                  const ChannelModel& channel, double rate_hz,
                                  std::uint64_t seed);

std::vector<ImuSample> emit_imu(const ActivityScript& script, std::uint64_t seed);

std::vector<EnvReading> emit_environment(const EnvScript& script, std::uint64_t seed);

}  // namespace cinnamon::sim
