#include "cinnamon/telemonitor/types.hpp"

#include <cmath>
#include <set>

#include "cinnamon/errors.hpp"
#include "cinnamon/layout_json.hpp"

namespace cinnamon::telemonitor {

using nlohmann::json;

namespace {

template <class F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_string(Role r) {
  switch (r) {
    case Role::Admin: return "admin";
    case Role::Doctor: return "doctor";
    case Role::MedicalStudent: return "medical_student";
    case Role::Designer: return "designer";
    case Role::Patient: return "patient";
  }
  return "patient";
}

Role parse_role(const std::string& s) {
  for (auto r : kAllRoles) {
    if (to_string(r) == s) return r;
  }
  throw ValidationError("unknown role '" + s + "'");
}

std::string to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Critical: return "critical";
  }
  return "warning";
}

Severity parse_severity(const std::string& s) {
  for (auto v : {Severity::Info, Severity::Warning, Severity::Critical}) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError("unknown severity '" + s + "'");
}

std::string to_string(AlertState s) { return s == AlertState::Active ? "active" : "resolved"; }

AlertState parse_alert_state(const std::string& s) {
  if (s == "active") return AlertState::Active;
  if (s == "resolved") return AlertState::Resolved;
  throw ValidationError("unknown alert state '" + s + "'");
}

const Location* Project::find_location(const std::string& id) const {
  for (const auto& l : locations) {
    if (l.location_id == id) return &l;
  }
  return nullptr;
}

const Sensor* Project::find_sensor(const std::string& id) const {
  for (const auto& s : sensors) {
    if (s.sensor_id == id) return &s;
  }
  return nullptr;
}

void Project::validate() const {
  if (patient_user_id.empty()) throw ValidationError("project needs a patient_user_id");
  std::set<std::string> seen;
  for (const auto& l : locations) {
    if (l.location_id.empty()) throw ValidationError("location id must not be empty");
    if (!seen.insert(l.location_id).second) throw ValidationError("duplicate location '" + l.location_id + "'");
    try {
      l.layout.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("location '" + l.location_id + "': " + e.what());
    }
  }
  seen.clear();
  for (const auto& s : sensors) {
    if (s.sensor_id.empty()) throw ValidationError("sensor id must not be empty");
    if (!seen.insert(s.sensor_id).second) throw ValidationError("duplicate sensor '" + s.sensor_id + "'");
    if (s.kind.empty()) throw ValidationError("sensor '" + s.sensor_id + "' has no kind");
    const auto* location = find_location(s.location_id);
    if (location == nullptr) {
      throw ValidationError("sensor '" + s.sensor_id + "' references unknown location '" + s.location_id + "'");
    }
    if (location->layout.find_room(s.room_id) == nullptr) {
      throw ValidationError("sensor '" + s.sensor_id + "' references unknown room '" + s.room_id + "' in location '" +
                            s.location_id + "'");
    }
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y)) {
      throw ValidationError("sensor '" + s.sensor_id + "' position must be finite");
    }
  }
}

bool ThresholdRule::out_of_range(double value) const {
  return (min && value < *min) || (max && value > *max);
}

void ThresholdRule::validate() const {
  if (!min && !max) throw ValidationError("threshold rule needs min or max");
  if ((min && !std::isfinite(*min)) || (max && !std::isfinite(*max))) {
    throw ValidationError("threshold bounds must be finite");
  }
  if (min && max && !(*min < *max)) throw ValidationError("min must be below max");
}

json to_json(const User& u, bool with_credential) {
  json j = {{"user_id", u.user_id},
            {"name", u.name},
            {"email", u.email},
            {"role", to_string(u.role)},
            {"created_at", u.created_at}};
  if (with_credential) j["credential_hash"] = u.credential_hash;
  return j;
}

User user_from_json(const json& j) {
  return parsing("user", [&] {
    User u;
    u.user_id = j.at("user_id").get<std::string>();
    u.name = j.at("name").get<std::string>();
    u.email = j.at("email").get<std::string>();
    u.role = parse_role(j.at("role").get<std::string>());
    u.credential_hash = j.value("credential_hash", std::string());
    u.created_at = j.at("created_at").get<double>();
    return u;
  });
}

json to_json(const Project& p) {
  json locations = json::array();
  for (const auto& l : p.locations) {
    locations.push_back({{"location_id", l.location_id}, {"name", l.name}, {"layout", l.layout}});
  }
  json sensors = json::array();
  for (const auto& s : p.sensors) {
    sensors.push_back({{"sensor_id", s.sensor_id},
                       {"kind", s.kind},
                       {"location_id", s.location_id},
                       {"room_id", s.room_id},
                       {"position", s.position}});
  }
  return {{"project_id", p.project_id},
          {"patient_user_id", p.patient_user_id},
          {"locations", locations},
          {"sensors", sensors}};
}

Project project_from_json(const json& j) {
  return parsing("project", [&] {
    Project p;
    p.project_id = j.value("project_id", std::string());
    p.patient_user_id = j.at("patient_user_id").get<std::string>();
    for (const auto& l : j.value("locations", json::array())) {
      p.locations.push_back({l.at("location_id").get<std::string>(), l.value("name", std::string()),
                             l.at("layout").get<RoomLayout>()});
    }
    for (const auto& s : j.value("sensors", json::array())) {
      p.sensors.push_back({s.at("sensor_id").get<std::string>(), s.at("kind").get<std::string>(),
                           s.at("location_id").get<std::string>(), s.at("room_id").get<std::string>(),
                           s.at("position").get<Vec2>()});
    }
    return p;
  });
}

json to_json(const ThresholdRule& r) {
  return {{"rule_id", r.rule_id},
          {"patient_user_id", r.patient_user_id},
          {"parameter", to_string(r.parameter)},
          {"min", optional_json(r.min)},
          {"max", optional_json(r.max)},
          {"severity", to_string(r.severity)},
          {"enabled", r.enabled}};
}

ThresholdRule rule_from_json(const json& j, const std::string& patient) {
  return parsing("threshold rule", [&] {
    ThresholdRule r;
    r.rule_id = j.value("rule_id", std::string());
    r.patient_user_id = j.value("patient_user_id", patient);
    r.parameter = parse_parameter(j.at("parameter").get<std::string>());
    r.min = optional_number(j, "min");
    r.max = optional_number(j, "max");
    r.severity = parse_severity(j.value("severity", std::string("warning")));
    r.enabled = j.value("enabled", true);
    return r;
  });
}

json to_json(const Alert& a) {
  return {{"alert_id", a.alert_id},
          {"rule_id", a.rule_id},
          {"patient_user_id", a.patient_user_id},
          {"parameter", to_string(a.parameter)},
          {"severity", to_string(a.severity)},
          {"reading", {{"sensor_id", a.sensor_id}, {"t", a.t}, {"value", a.value}}},
          {"state", to_string(a.state)},
          {"created_at", a.created_at},
          {"resolved_at", optional_json(a.resolved_at)}};
}

Alert alert_from_json(const json& j) {
  return parsing("alert", [&] {
    Alert a;
    a.alert_id = j.at("alert_id").get<std::string>();
    a.rule_id = j.at("rule_id").get<std::string>();
    a.patient_user_id = j.at("patient_user_id").get<std::string>();
    a.parameter = parse_parameter(j.at("parameter").get<std::string>());
    a.severity = parse_severity(j.at("severity").get<std::string>());
    const auto& reading = j.at("reading");
    a.sensor_id = reading.at("sensor_id").get<std::string>();
    a.t = reading.at("t").get<double>();
    a.value = reading.at("value").get<double>();
    a.state = parse_alert_state(j.at("state").get<std::string>());
    a.created_at = j.at("created_at").get<double>();
    a.resolved_at = optional_number(j, "resolved_at");
    return a;
  });
}

json to_json(const AlertChange& c) {
  return {{"change", c.kind == AlertChangeKind::Created ? "created" : "resolved"}, {"alert", to_json(c.alert)}};
}

json to_json(const SeriesBucket& b) {
  return {{"bucket_start_t", b.bucket_start_t},
          {"bucket_width_s", b.bucket_width_s},
          {"count", b.count},
          {"mean", b.mean},
          {"min", b.min},
          {"max", b.max}};
}

json to_json(const EnvReading& r) {
  return {{"t", r.t}, {"sensor_id", r.sensor_id}, {"parameter", to_string(r.parameter)}, {"value", r.value}};
}

EnvReading env_reading_from_json(const json& j) {
  return parsing("reading", [&] {
    EnvReading r;
    r.t = j.at("t").get<double>();
    r.sensor_id = j.at("sensor_id").get<std::string>();
    r.parameter = parse_parameter(j.at("parameter").get<std::string>());
    r.value = j.at("value").get<double>();
    return r;
  });
}

}  // namespace cinnamon::telemonitor
