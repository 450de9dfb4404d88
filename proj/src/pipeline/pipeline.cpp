#include "cinnamon/pipeline.hpp"

#include <fstream>

#include "cinnamon/sim/datasets.hpp"
#include "cinnamon/sim/simulator.hpp"

namespace cinnamon::pipeline {

SimulationOutput simulate(const sim::Scenario& scenario, std::uint64_t seed) {
  SimulationOutput out;
  out.scenario = scenario;
  out.scenario.seed = seed;
  out.seed = seed;
  out.track = sim::simulate_track(scenario.layout, scenario.trajectory, seed);
  out.rssi = sim::emit_rssi(out.track, scenario.layout, scenario.channel, scenario.trajectory.rssi_rate_hz, seed);
  out.imu = sim::emit_imu(scenario.activities, seed);
  out.env = sim::emit_environment(scenario.environment, seed);
  return out;
}

void write_simulation(const SimulationOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("track.csv");
    sim::write_track_csv(out, output.track);
  }
  {
    auto out = open("rssi.csv");
    sim::write_rssi_csv(out, output.rssi);
  }
  {
    auto out = open("imu.csv");
    sim::write_imu_csv(out, output.imu);
  }
  {
    auto out = open("env.csv");
    sim::write_env_csv(out, output.env);
  }
  auto out = open("scenario.json");
  out << sim::scenario_to_json(output.scenario).dump(2) << '\n';
}

LocalizationRun localize(const std::vector<RssiSample>& rssi, const RoomLayout& layout, const ChannelModel& channel,
                         bool kalman, double window_s, const GroundTruthTrack* truth) {
  LocalizationRun run;
  std::optional<localization::KalmanParams> params;
  if (kalman) params = localization::KalmanParams::for_channel(channel);
  run.estimates = localization::localize_stream(rssi, layout, channel, params, window_s);
  if (truth != nullptr) run.report = localization::evaluate_localization(run.estimates, *truth);
  return run;
}

}  // namespace cinnamon::pipeline
