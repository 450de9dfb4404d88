#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinnamon/geometry.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon::telemonitor {

enum class Role { Admin, Doctor, MedicalStudent, Designer, Patient };
inline constexpr std::array<Role, 5> kAllRoles = {Role::Admin, Role::Doctor, Role::MedicalStudent, Role::Designer,
                                                  Role::Patient};
std::string to_string(Role r);
/// "admin", "doctor", "medical_student", "designer", "patient"; throws ValidationError otherwise.
Role parse_role(const std::string& s);

enum class Severity { Info, Warning, Critical };
std::string to_string(Severity s);
Severity parse_severity(const std::string& s);

struct User {
  std::string user_id;
  std::string name;
  std::string email;
  Role role = Role::Patient;
  std::string credential_hash;
  double created_at = 0.0;
};

/// Authenticated caller of an operation.
struct Principal {
  std::string user_id;
  Role role = Role::Patient;
};

struct Location {
  std::string location_id;
  std::string name;
  RoomLayout layout;
};

struct Sensor {
  std::string sensor_id;
  std::string kind;
  std::string location_id;
  std::string room_id;
  Vec2 position;
};

struct Project {
  std::string project_id;
  std::string patient_user_id;
  std::vector<Location> locations;
  std::vector<Sensor> sensors;

  const Location* find_location(const std::string& id) const;
  const Sensor* find_sensor(const std::string& id) const;
  /// Throws ValidationError naming the offending location or sensor.
  void validate() const;
};

struct ThresholdRule {
  std::string rule_id;  // assigned by the store when empty
  std::string patient_user_id;
  Parameter parameter = Parameter::temperature_c;
  std::optional<double> min;
  std::optional<double> max;
  Severity severity = Severity::Warning;
  bool enabled = true;

  bool out_of_range(double value) const;
  void validate() const;
};

enum class AlertState { Active, Resolved };
std::string to_string(AlertState s);
AlertState parse_alert_state(const std::string& s);

struct Alert {
  std::string alert_id;
  std::string rule_id;
  std::string patient_user_id;
  Parameter parameter = Parameter::temperature_c;
  Severity severity = Severity::Warning;
  std::string sensor_id;  // triggering reading
  double t = 0.0;
  double value = 0.0;
  AlertState state = AlertState::Active;
  double created_at = 0.0;
  std::optional<double> resolved_at;
};

enum class AlertChangeKind { Created, Resolved };

struct AlertChange {
  AlertChangeKind kind = AlertChangeKind::Created;
  Alert alert;  // snapshot after the change
};

struct SeriesBucket {
  double bucket_start_t = 0.0;
  double bucket_width_s = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

nlohmann::json to_json(const User& u, bool with_credential = false);
User user_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Project& p);
Project project_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ThresholdRule& r);
/// patient_user_id may be absent in the document; `patient` fills it.
ThresholdRule rule_from_json(const nlohmann::json& j, const std::string& patient = {});
nlohmann::json to_json(const Alert& a);
Alert alert_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AlertChange& c);
nlohmann::json to_json(const SeriesBucket& b);
nlohmann::json to_json(const EnvReading& r);
EnvReading env_reading_from_json(const nlohmann::json& j);

}  // namespace cinnamon::telemonitor
