#include "cinnamon/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "cinnamon/errors.hpp"
#include "cinnamon/layout_json.hpp"

namespace cinnamon::sim {

using nlohmann::json;

namespace {

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(what + " must be > 0");
}

void require_non_negative(double v, const std::string& what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(what + " must be >= 0");
}

ChannelModel parse_channel(const json& j) {
  ChannelModel c;
  c.p0_dbm = j.value("p0_dbm", c.p0_dbm);
  c.d0_m = j.value("d0_m", c.d0_m);
  c.path_loss_exponent = j.value("path_loss_exponent", c.path_loss_exponent);
  c.shadow_sigma_db = j.value("shadow_sigma_db", c.shadow_sigma_db);
  c.outlier_probability = j.value("outlier_probability", c.outlier_probability);
  c.outlier_max_drop_db = j.value("outlier_max_drop_db", c.outlier_max_drop_db);
  return c;
}

json channel_json(const ChannelModel& c) {
  return {{"p0_dbm", c.p0_dbm},
          {"d0_m", c.d0_m},
          {"path_loss_exponent", c.path_loss_exponent},
          {"shadow_sigma_db", c.shadow_sigma_db},
          {"outlier_probability", c.outlier_probability},
          {"outlier_max_drop_db", c.outlier_max_drop_db}};
}

TrajectoryScript parse_trajectory(const json& j) {
  TrajectoryScript t;
  t.wearable_id = j.value("wearable_id", t.wearable_id);
  t.sample_rate_hz = j.value("sample_rate_hz", t.sample_rate_hz);
  t.rssi_rate_hz = j.value("rssi_rate_hz", t.rssi_rate_hz);
  t.jitter_m = j.value("jitter_m", t.jitter_m);
  for (const auto& w : j.at("waypoints")) {
    Waypoint wp;
    if (w.contains("room")) wp.room = w.at("room").get<std::string>();
    if (w.contains("xy")) wp.xy = w.at("xy").get<Vec2>();
    wp.dwell_s = w.value("dwell_s", 0.0);
    wp.speed_mps = w.value("speed_mps", 1.0);
    t.waypoints.push_back(std::move(wp));
  }
  return t;
}

json trajectory_json(const TrajectoryScript& t) {
  json waypoints = json::array();
  for (const auto& w : t.waypoints) {
    json jw = json::object();
    if (w.room) jw["room"] = *w.room;
    if (w.xy) jw["xy"] = *w.xy;
    jw["dwell_s"] = w.dwell_s;
    jw["speed_mps"] = w.speed_mps;
    waypoints.push_back(std::move(jw));
  }
  return {{"wearable_id", t.wearable_id},
          {"sample_rate_hz", t.sample_rate_hz},
          {"rssi_rate_hz", t.rssi_rate_hz},
          {"jitter_m", t.jitter_m},
          {"waypoints", std::move(waypoints)}};
}

ActivityScript parse_activities(const json& j) {
  ActivityScript a;
  if (j.contains("protocol")) {
    const auto& p = j.at("protocol");
    a = recording_protocol(p.value("sessions_per_label", 5), p.value("session_s", 60.0));
  }
  if (j.contains("sessions")) {
    a.sessions.clear();
    for (const auto& s : j.at("sessions")) {
      a.sessions.push_back({parse_activity(s.at("label").get<std::string>()),
                            s.at("duration_s").get<double>(), s.at("session_id").get<std::string>()});
    }
  }
  a.break_s = j.value("break_s", a.break_s);
  a.model.noise_scale = j.value("noise_scale", a.model.noise_scale);
  a.model.session_variability = j.value("session_variability", a.model.session_variability);
  return a;
}

json activities_json(const ActivityScript& a) {
  json sessions = json::array();
  for (const auto& s : a.sessions) {
    sessions.push_back(
        {{"label", to_string(s.label)}, {"duration_s", s.duration_s}, {"session_id", s.session_id}});
  }
  return {{"break_s", a.break_s},
          {"noise_scale", a.model.noise_scale},
          {"session_variability", a.model.session_variability},
          {"sessions", std::move(sessions)}};
}

EnvScript parse_environment(const json& j) {
  EnvScript e;
  e.duration_s = j.value("duration_s", 0.0);
  for (const auto& s : j.value("sensors", json::array())) {
    EnvSensorScript sensor;
    sensor.sensor_id = s.at("sensor_id").get<std::string>();
    sensor.parameter = parse_parameter(s.at("parameter").get<std::string>());
    sensor.rate_hz = s.value("rate_hz", 1.0);
    sensor.noise_sigma = s.value("noise_sigma", 0.0);
    for (const auto& seg : s.at("segments")) {
      sensor.segments.push_back({seg.value("start_t", 0.0), seg.at("baseline").get<double>(),
                                 seg.value("drift_per_s", 0.0)});
    }
    e.sensors.push_back(std::move(sensor));
  }
  return e;
}

json environment_json(const EnvScript& e) {
  json sensors = json::array();
  for (const auto& s : e.sensors) {
    json segments = json::array();
    for (const auto& seg : s.segments) {
      segments.push_back(
          {{"start_t", seg.start_t}, {"baseline", seg.baseline}, {"drift_per_s", seg.drift_per_s}});
    }
    sensors.push_back({{"sensor_id", s.sensor_id},
                       {"parameter", to_string(s.parameter)},
                       {"rate_hz", s.rate_hz},
                       {"noise_sigma", s.noise_sigma},
                       {"segments", std::move(segments)}});
  }
  return {{"duration_s", e.duration_s}, {"sensors", std::move(sensors)}};
}

}  // namespace

void Scenario::validate() const {
  layout.validate();
  channel.validate();
  validate_trajectory(layout, trajectory);

  std::set<std::string> session_ids;
  for (const auto& s : activities.sessions) {
    require_positive(s.duration_s, "session '" + s.session_id + "' duration_s");
    if (s.session_id.empty()) throw ValidationError("activity session with empty session_id");
    if (!session_ids.insert(s.session_id).second) {
      throw ValidationError("duplicate session_id '" + s.session_id + "'");
    }
  }
  require_non_negative(activities.break_s, "activities break_s");
  require_non_negative(activities.model.noise_scale, "activities noise_scale");
  require_non_negative(activities.model.session_variability, "activities session_variability");

  require_non_negative(environment.duration_s, "environment duration_s");
  std::set<std::string> sensor_ids;
  for (const auto& s : environment.sensors) {
    if (!sensor_ids.insert(s.sensor_id).second) {
      throw ValidationError("duplicate environment sensor_id '" + s.sensor_id + "'");
    }
    if (!is_environment_parameter(s.parameter)) {
      throw ValidationError("sensor '" + s.sensor_id + "' uses non-environment parameter '" +
                            std::string(to_string(s.parameter)) + "'");
    }
    require_positive(s.rate_hz, "sensor '" + s.sensor_id + "' rate_hz");
    require_non_negative(s.noise_sigma, "sensor '" + s.sensor_id + "' noise_sigma");
    if (s.segments.empty()) throw ValidationError("sensor '" + s.sensor_id + "' has no segments");
    for (std::size_t i = 1; i < s.segments.size(); ++i) {
      if (!(s.segments[i].start_t > s.segments[i - 1].start_t)) {
        throw ValidationError("sensor '" + s.sensor_id + "' segments must have increasing start_t");
      }
    }
  }
}

void validate_trajectory(const RoomLayout& layout, const TrajectoryScript& t) {
  require_positive(t.sample_rate_hz, "trajectory sample_rate_hz");
  require_positive(t.rssi_rate_hz, "trajectory rssi_rate_hz");
  require_non_negative(t.jitter_m, "trajectory jitter_m");
  if (t.wearable_id.empty()) throw ValidationError("trajectory wearable_id is empty");
  if (t.waypoints.empty()) throw ValidationError("trajectory has no waypoints");
  for (std::size_t i = 0; i < t.waypoints.size(); ++i) {
    const auto& w = t.waypoints[i];
    const std::string where = "waypoint " + std::to_string(i);
    require_non_negative(w.dwell_s, where + " dwell_s");
    require_positive(w.speed_mps, where + " speed_mps");
    if (!w.room && !w.xy) throw ValidationError(where + " needs a room or xy");
    if (w.room) {
      const Room* room = layout.find_room(*w.room);
      if (!room) throw ValidationError("trajectory references unknown room '" + *w.room + "'");
      const Vec2 p = w.xy ? *w.xy : polygon_centroid(room->polygon);
      if (!point_in_polygon(p, room->polygon)) {
        throw ValidationError(where + " does not lie inside room '" + *w.room + "'");
      }
    } else if (!assign_room(*w.xy, layout)) {
      throw ValidationError(where + " lies outside every room");
    }
  }
}

Scenario parse_scenario(const json& doc) {
  static const std::set<std::string> kKeys = {"layout",     "channel",     "trajectory",
                                              "activities", "environment", "seed"};
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  for (const auto& key : kKeys) {
    if (!doc.contains(key)) throw ParseError("scenario is missing key '" + key + "'");
  }
  for (const auto& [key, _] : doc.items()) {
    if (!kKeys.contains(key)) throw ParseError("scenario has unknown key '" + key + "'");
  }
  Scenario s;
  try {
    s.layout = doc.at("layout").get<RoomLayout>();
    s.channel = parse_channel(doc.at("channel"));
    s.trajectory = parse_trajectory(doc.at("trajectory"));
    s.activities = parse_activities(doc.at("activities"));
    s.environment = parse_environment(doc.at("environment"));
    s.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario schema: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("scenario '" + path.string() + "': " + e.what());
  }
  return parse_scenario(doc);
}

json scenario_to_json(const Scenario& s) {
  return {{"layout", s.layout},
          {"channel", channel_json(s.channel)},
          {"trajectory", trajectory_json(s.trajectory)},
          {"activities", activities_json(s.activities)},
          {"environment", environment_json(s.environment)},
          {"seed", s.seed}};
}

Scenario default_scenario() { return parse_scenario(json::parse(default_scenario_text())); }

ActivityScript recording_protocol(int sessions_per_label, double session_s) {
  ActivityScript script;
  for (auto label : kAllActivities) {
    for (int i = 1; i <= sessions_per_label; ++i) {
      script.sessions.push_back({label, session_s, std::string(to_string(label)) + "-" + std::to_string(i)});
    }
  }
  return script;
}

}  // namespace cinnamon::sim
