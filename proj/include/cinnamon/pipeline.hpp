#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "cinnamon/localization/pipeline.hpp"
#include "cinnamon/sim/scenario.hpp"

namespace cinnamon::pipeline {

struct SimulationOutput {
  sim::Scenario scenario;
  std::uint64_t seed = 0;
  GroundTruthTrack track;
  std::vector<RssiSample> rssi;
  std::vector<ImuSample> imu;
  std::vector<EnvReading> env;
};

SimulationOutput simulate(const sim::Scenario& scenario, std::uint64_t seed);

/// Writes track.csv, rssi.csv, imu.csv, env.csv and scenario.json (with the
/// seed actually used) into `dir`, creating it if needed.
void write_simulation(const SimulationOutput& output, const std::filesystem::path& dir);

struct LocalizationRun {
  std::vector<localization::PositionEstimate> estimates;
  std::optional<localization::LocalizationReport> report;  // set when a track was given
};

LocalizationRun localize(const std::vector<RssiSample>& rssi, const RoomLayout& layout, const ChannelModel& channel,
                         bool kalman, double window_s, const GroundTruthTrack* truth);

}  // namespace cinnamon::pipeline
