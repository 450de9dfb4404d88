#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cinnamon/errors.hpp"
#include "cinnamon/localization/pipeline.hpp"
#include "cinnamon/sim/datasets.hpp"
#include "cinnamon/sim/scenario.hpp"
#include "cinnamon/sim/simulator.hpp"
#include "test_support.hpp"

using namespace cinnamon;
using namespace cinnamon::sim;
using cinnamon::testing::data_path;
using cinnamon::testing::TempDir;

namespace {

TrajectoryScript stationary(Vec2 at, double seconds) {
  TrajectoryScript script;
  script.waypoints = {{std::nullopt, at, seconds, 1.0}};
  return script;
}

ChannelModel noiseless(double n = 2.8) {
  ChannelModel channel;
  channel.path_loss_exponent = n;
  channel.shadow_sigma_db = 0.0;
  channel.outlier_probability = 0.0;
  return channel;
}

std::string csv_of(const std::vector<RssiSample>& v) {
  std::ostringstream out;
  write_rssi_csv(out, v);
  return out.str();
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stddev_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / v.size());
}

/// Frequency with the largest DFT magnitude between 0.5 and 4.5 Hz at 10 Hz sampling.
double dominant_frequency(const std::vector<double>& x) {
  const double m = mean_of(x);
  double best_f = 0.0, best_power = -1.0;
  for (double f = 0.5; f <= 4.5; f += 0.01) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double phase = 2.0 * M_PI * f * static_cast<double>(i) / 10.0;
      re += (x[i] - m) * std::cos(phase);
      im += (x[i] - m) * std::sin(phase);
    }
    if (re * re + im * im > best_power) {
      best_power = re * re + im * im;
      best_f = f;
    }
  }
  return best_f;
}

std::vector<ImuSample> session_of(ActivityLabel label, double seconds, std::uint64_t seed, double noise = 1.0) {
  ActivityScript script;
  script.sessions = {{label, seconds, "s"}};
  script.model.noise_scale = noise;
  return emit_imu(script, seed);
}

}  // namespace

TEST_CASE("load_scenario examples") {
  const auto minimal = load_scenario(data_path("scenarios/minimal.json"));
  CHECK(minimal.layout.rooms.size() == 1);
  CHECK(minimal.layout.anchors.size() == 3);
  CHECK(minimal.activities.sessions.front().label == ActivityLabel::Rest);

  const auto def = load_scenario(data_path("scenarios/default.json"));
  CHECK(def.layout.rooms.size() == 3);
  CHECK(def.layout.anchors.size() == 3);
  CHECK(scenario_to_json(def) == scenario_to_json(default_scenario()));

  auto doc = nlohmann::json::parse(testing::slurp(data_path("scenarios/minimal.json")));
  doc["layout"]["anchors"][1]["position"] = {10, 10};
  CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("'a2'"), ValidationError);
}

TEST_CASE("load_scenario rejects malformed documents") {
  TempDir dir("scenario");
  const auto path = dir.path() / "bad.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_scenario(path), ParseError);
  CHECK_THROWS_AS(load_scenario(dir.path() / "missing.json"), ParseError);

  auto doc = nlohmann::json::parse(testing::slurp(data_path("scenarios/minimal.json")));
  doc.erase("channel");
  CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("channel"), ParseError);
  doc = nlohmann::json::parse(testing::slurp(data_path("scenarios/minimal.json")));
  doc["extra"] = 1;
  CHECK_THROWS_AS(parse_scenario(doc), ParseError);
  doc.erase("extra");
  doc["trajectory"]["waypoints"][0]["room"] = "attic";
  CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("attic"), ValidationError);
}

TEST_CASE("scenario JSON round-trip") {
  const auto def = default_scenario();
  const auto back = parse_scenario(scenario_to_json(def));
  CHECK(scenario_to_json(back) == scenario_to_json(def));
}

TEST_CASE("stationary track stays put") {
  const auto layout = testing::single_room();
  const auto track = simulate_track(layout, stationary({1, 1}, 10), 5);
  CHECK(track.samples.size() == 100);
  CHECK(track.samples.front().t == 0.0);
  CHECK(track.samples.back().t == doctest::Approx(9.9));
  for (const auto& s : track.samples) {
    CHECK(s.position == Vec2{1, 1});
    CHECK(s.room_id == "room");
  }
}

TEST_CASE("tracks are deterministic and respect rooms") {
  const auto scenario = default_scenario();
  const auto a = simulate_track(scenario, 11);
  const auto b = simulate_track(scenario, 11);
  std::ostringstream sa, sb;
  write_track_csv(sa, a);
  write_track_csv(sb, b);
  CHECK(sa.str() == sb.str());

  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& s = a.samples[i];
    const auto* room = scenario.layout.find_room(s.room_id);
    REQUIRE(room != nullptr);
    CHECK(point_in_polygon(s.position, room->polygon));
    if (i > 0) CHECK(s.t > a.samples[i - 1].t);
  }
}

TEST_CASE("walking from room A to room B visits both in order") {
  RoomLayout layout;
  layout.rooms = {{"A", {{0, 0}, {4, 0}, {4, 4}, {0, 4}}}, {"B", {{4, 0}, {8, 0}, {8, 4}, {4, 4}}}};
  layout.anchors = {{"x", {2, 2}, 2.5}, {"y", {6, 2}, 2.5}, {"z", {6, 3}, 2.5}};
  TrajectoryScript script;
  script.waypoints = {{std::string("A"), std::nullopt, 2.0, 1.0}, {std::string("B"), std::nullopt, 2.0, 1.0}};
  const auto track = simulate_track(layout, script, 1);

  std::vector<std::string> visited;
  for (const auto& s : track.samples) {
    std::string oracle = point_in_polygon(s.position, layout.rooms[0].polygon) ? "A" : "B";
    CHECK(point_in_polygon(s.position, layout.find_room(oracle)->polygon));
    if (visited.empty() || visited.back() != oracle) visited.push_back(oracle);
  }
  CHECK(visited == std::vector<std::string>{"A", "B"});
}

TEST_CASE("emit_rssi at the reference distance and in closed form") {
  RoomLayout layout = testing::single_room();
  auto channel = noiseless(2.0);
  channel.d0_m = 2.5;
  const auto below = simulate_track(layout, stationary(layout.anchors[0].position, 1), 0);
  const auto samples = emit_rssi(below, layout, channel, 10.0, 0);
  CHECK(samples.size() == below.samples.size() * 3);
  for (const auto& s : samples) {
    if (s.anchor_id == "a1") CHECK(s.rssi_dbm == doctest::Approx(channel.p0_dbm).epsilon(1e-12));
  }

  RoomLayout big;
  big.rooms = {{"hall", {{0, 0}, {20, 0}, {20, 20}, {0, 20}}}};
  big.anchors = {{"a", {0.5, 0.5}, 0.0001}, {"b", {19, 1}, 2.5}, {"c", {10, 19}, 2.5}};
  big.anchors[0].mount_height = 6.0;
  const auto far = simulate_track(big, stationary({8.5, 0.5}, 1), 0);
  for (const auto& s : emit_rssi(far, big, noiseless(2.0), 10.0, 0)) {
    if (s.anchor_id == "a") CHECK(s.rssi_dbm == doctest::Approx(-65.0).epsilon(1e-12));
  }
}

TEST_CASE("emit_rssi shadowing statistics") {
  auto layout = testing::single_room();
  ChannelModel channel;
  channel.outlier_probability = 0.0;
  const auto track = simulate_track(layout, stationary({1, 1}, 1000), 0);
  const auto samples = emit_rssi(track, layout, channel, 10.0, 99);
  std::vector<double> values;
  for (const auto& s : samples) {
    if (s.anchor_id == "a2") values.push_back(s.rssi_dbm);
  }
  REQUIRE(values.size() == 10000);
  const double slant = std::hypot(distance({1, 1}, layout.anchors[1].position), 2.5);
  const double expected = channel.p0_dbm - 10.0 * channel.path_loss_exponent * std::log10(slant / channel.d0_m);
  CHECK(std::abs(mean_of(values) - expected) < 0.1);
  CHECK(std::abs(stddev_of(values) - 2.0) < 0.2);
}

TEST_CASE("noiseless RSSI inverts exactly to the slant range") {
  RoomLayout layout;
  layout.rooms = {{"hall", {{0, 0}, {20, 0}, {20, 2}, {0, 2}}}};
  layout.anchors = {{"a", {0.0, 1.0}, 1e-9}, {"b", {19, 1}, 2.5}, {"c", {10, 1.5}, 2.5}};
  const auto channel = noiseless();
  for (double d = 1.0; d <= 15.0; d += 0.5) {
    const auto track = simulate_track(layout, stationary({d, 1.0}, 0.1), 0);
    const auto samples = emit_rssi(track, layout, channel, 10.0, 0);
    REQUIRE(samples.front().anchor_id == "a");
    CHECK(std::abs(localization::rssi_to_distance(samples.front().rssi_dbm, channel) - d) < 1e-9);
  }
}

TEST_CASE("emit_imu protocol counts and cadence") {
  const auto samples = emit_imu(recording_protocol(), 42);
  CHECK(samples.size() == 12000);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].session_id == samples[i - 1].session_id) {
      CHECK(samples[i].t - samples[i - 1].t == doctest::Approx(0.1).epsilon(1e-9));
      CHECK(samples[i].label == samples[i - 1].label);
    }
  }
  ActivityScript bad;
  bad.sessions = {{ActivityLabel::Rest, 0.0, "x"}};
  CHECK_THROWS_AS(emit_imu(bad, 1), ValidationError);
}

TEST_CASE("noise-free Rest is gravity only") {
  for (const auto& s : session_of(ActivityLabel::Rest, 10, 3, 0.0)) {
    CHECK(std::hypot(s.accel[0], s.accel[1], s.accel[2]) == doctest::Approx(kGravity).epsilon(1e-12));
    CHECK(s.gyro == std::array<double, 3>{0, 0, 0});
  }
}

TEST_CASE("FastWalk oscillates faster than SlowWalk") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto vertical = [&](ActivityLabel label) {
      std::vector<double> z;
      for (const auto& s : session_of(label, 30, seed)) z.push_back(s.accel[2]);
      return z;
    };
    CHECK(dominant_frequency(vertical(ActivityLabel::FastWalk)) > dominant_frequency(vertical(ActivityLabel::SlowWalk)));
  }
}

TEST_CASE("accel magnitude spread separates the gait classes on every seed") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto samples = emit_imu(recording_protocol(), seed);
    std::array<std::vector<double>, kActivityCount> per_label;
    for (std::size_t start = 0; start + 30 <= samples.size(); start += 15) {
      if (samples[start].session_id != samples[start + 29].session_id) continue;
      std::vector<double> mag;
      for (std::size_t i = start; i < start + 30; ++i) {
        const auto& a = samples[i].accel;
        mag.push_back(std::hypot(a[0], a[1], a[2]));
      }
      per_label[index_of(samples[start].label)].push_back(stddev_of(mag));
    }
    const double rest = mean_of(per_label[index_of(ActivityLabel::Rest)]);
    const double slow = mean_of(per_label[index_of(ActivityLabel::SlowWalk)]);
    const double fast = mean_of(per_label[index_of(ActivityLabel::FastWalk)]);
    CHECK(rest < slow);
    CHECK(slow < fast);
  }
}

TEST_CASE("heart rate is session-constant and within its band") {
  const auto samples = emit_imu(recording_protocol(), 8);
  const std::array<std::pair<double, double>, kActivityCount> bands = {
      std::pair{110.0, 140.0}, std::pair{80.0, 100.0}, std::pair{60.0, 75.0}, std::pair{120.0, 150.0}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    REQUIRE(samples[i].heart_rate_bpm);
    const auto [lo, hi] = bands[index_of(samples[i].label)];
    CHECK(*samples[i].heart_rate_bpm >= lo);
    CHECK(*samples[i].heart_rate_bpm <= hi);
    if (i > 0 && samples[i].session_id == samples[i - 1].session_id) {
      CHECK(samples[i].heart_rate_bpm == samples[i - 1].heart_rate_bpm);
    }
  }
}

TEST_CASE("environment streams") {
  EnvScript constant;
  constant.duration_s = 100;
  constant.sensors = {{"co2", Parameter::co2_ppm, 1.0, 0.0, {{0, 600, 0}}}};
  const auto flat = emit_environment(constant, 1);
  CHECK(flat.size() == 100);
  for (const auto& r : flat) CHECK(r.value == 600.0);

  EnvScript step = constant;
  step.sensors[0].segments = {{0, 600, 0}, {60, 1500, 0}};
  double max_before = -1e9, min_after = 1e9;
  for (const auto& r : emit_environment(step, 1)) {
    if (r.t < 60) max_before = std::max(max_before, r.value);
    else min_after = std::min(min_after, r.value);
  }
  CHECK(max_before < min_after);

  const auto def = default_scenario();
  const auto a = emit_environment(def.environment, 5);
  const auto b = emit_environment(def.environment, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].value == b[i].value);
  }

  EnvScript hr = constant;
  hr.sensors[0].parameter = Parameter::heart_rate_bpm;
  CHECK_THROWS_AS(emit_environment(hr, 1), ValidationError);
}

TEST_CASE("emitters are pure functions of their seed") {
  const auto scenario = default_scenario();
  const auto track = simulate_track(scenario, 42);
  CHECK(csv_of(emit_rssi(track, scenario.layout, scenario.channel, 10, 42)) ==
        csv_of(emit_rssi(track, scenario.layout, scenario.channel, 10, 42)));
  CHECK(csv_of(emit_rssi(track, scenario.layout, scenario.channel, 10, 42)) !=
        csv_of(emit_rssi(track, scenario.layout, scenario.channel, 10, 43)));
}

TEST_CASE("CSV datasets round-trip") {
  const auto scenario = default_scenario();
  const auto track = simulate_track(scenario, 4);
  const auto rssi = emit_rssi(track, scenario.layout, scenario.channel, 10, 4);
  const auto imu = emit_imu(recording_protocol(2, 5), 4);
  const auto env = emit_environment(scenario.environment, 4);

  std::stringstream r, i, e, t;
  write_rssi_csv(r, rssi);
  write_imu_csv(i, imu);
  write_env_csv(e, env);
  write_track_csv(t, track);

  const auto rssi2 = read_rssi_csv(r);
  REQUIRE(rssi2.size() == rssi.size());
  CHECK(rssi2[17].rssi_dbm == rssi[17].rssi_dbm);
  CHECK(rssi2[17].anchor_id == rssi[17].anchor_id);

  const auto imu2 = read_imu_csv(i);
  REQUIRE(imu2.size() == imu.size());
  CHECK(imu2[33].accel == imu[33].accel);
  CHECK(imu2[33].orientation == imu[33].orientation);
  CHECK(imu2[33].heart_rate_bpm == imu[33].heart_rate_bpm);
  CHECK(imu2[33].label == imu[33].label);

  const auto env2 = read_env_csv(e);
  REQUIRE(env2.size() == env.size());
  CHECK(env2.back().parameter == env.back().parameter);
  CHECK(env2.back().value == env.back().value);

  const auto track2 = read_track_csv(t);
  REQUIRE(track2.samples.size() == track.samples.size());
  CHECK(track2.samples[50].position == track.samples[50].position);

  std::istringstream wrong("t,x\n1,2\n");
  CHECK_THROWS_AS(read_rssi_csv(wrong), ParseError);
}
