#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cinnamon/readings.hpp"
#include "cinnamon/telemonitor/credentials.hpp"
#include "cinnamon/telemonitor/event_store.hpp"
#include "cinnamon/telemonitor/series.hpp"
#include "cinnamon/telemonitor/types.hpp"

namespace cinnamon::telemonitor {

/// Operations guarded by the role matrix. Reads are open to every authenticated role.
enum class Operation { RegisterAdmin, UpsertProject, SetThresholds, IngestReading, ListUsers };
inline constexpr std::array<Operation, 5> kGuardedOperations = {
    Operation::RegisterAdmin, Operation::UpsertProject, Operation::SetThresholds, Operation::IngestReading,
    Operation::ListUsers};
std::string to_string(Operation op);

bool is_permitted(Operation op, Role role);

struct TelemonitorConfig {
  double token_ttl_s = 3600.0;
  int resolve_after = 3;  // consecutive in-range readings that resolve an active alert
  int pbkdf2_iterations = kDefaultPbkdf2Iterations;
  std::function<double()> clock;  // unix seconds; system clock when empty
};

struct AlertFilter {
  std::optional<AlertState> state;
  std::optional<std::string> patient_user_id;
  std::optional<Severity> severity;
};

/// Where a registered sensor lives.
struct SensorPlacement {
  std::string project_id;
  std::string patient_user_id;
  Sensor sensor;
  Location location;
};

/// Users, projects, thresholds, readings and alerts on top of an event store.
/// State is rebuilt from the store on construction. Ingestion is serialized
/// per patient; reads see committed state only.
class Telemonitor {
 public:
  explicit Telemonitor(std::shared_ptr<EventStore> store, TelemonitorConfig config = {});
  ~Telemonitor();
  Telemonitor(const Telemonitor&) = delete;
  Telemonitor& operator=(const Telemonitor&) = delete;

  /// Self-registration is open for every role except admin; an admin account
  /// needs an admin actor, or an empty user table.
  User register_user(const std::string& name, const std::string& email, Role role, const std::string& credential,
                     const Principal* actor = nullptr);

  /// Returns an opaque token. Unknown email and wrong credential raise the same AuthError.
  std::string authenticate(const std::string& email, const std::string& credential);
  Principal resolve_token(const std::string& token) const;

  /// Empty project_id creates a new project; otherwise replaces it, unless
  /// `create_only`, which turns an existing id into ConflictError.
  Project upsert_project(Project project, const Principal& actor, bool create_only = false);
  Project get_project(const std::string& project_id) const;
  std::vector<Project> list_projects() const;

  /// Replaces the patient's whole rule list. Rules without an id get one;
  /// a supplied id must already belong to the patient. Active alerts of rules
  /// that are removed, disabled or change parameter are resolved now.
  std::vector<ThresholdRule> set_thresholds(const std::string& patient_user_id, std::vector<ThresholdRule> rules,
                                            const Principal& actor);
  std::vector<ThresholdRule> get_thresholds(const std::string& patient_user_id) const;

  /// Patients may only ingest for sensors of their own projects.
  std::vector<AlertChange> ingest_reading(const EnvReading& reading, const Principal& actor);

  std::vector<SeriesBucket> query_series(const std::string& patient_user_id, Parameter parameter, double from_t,
                                         double to_t, double bucket_width_s) const;

  /// Newest first: created_at desc, then alert_id desc.
  std::vector<Alert> list_alerts(const AlertFilter& filter = {}) const;

  /// created_at asc, credential hashes blanked.
  std::vector<User> list_users(const Principal& actor) const;

  /// Throws PermissionError when the role matrix denies `op`.
  void authorize(Operation op, const Principal& actor) const;

  std::optional<User> find_user(const std::string& user_id) const;
  std::optional<SensorPlacement> locate_sensor(const std::string& sensor_id) const;

  /// Every alert state change since the store was created, in commit order.
  std::vector<AlertChange> alert_log() const;

  void flush();
  double now() const;

 private:
  struct Track {
    std::optional<std::size_t> active;  // index into alerts_
    int in_range = 0;
  };
  struct PatientState {
    std::mutex mutex;
    std::vector<ThresholdRule> rules;
    std::map<Parameter, SeriesPoints> series;
    std::map<std::pair<std::string, std::string>, Track> tracks;  // (rule_id, sensor_id)
  };

  void replay();
  void apply(const Event& e, std::vector<AlertChange>& derived);
  void apply_user(const User& u);
  void apply_project(const Project& p);
  std::vector<AlertChange> apply_thresholds(PatientState& ps, const std::string& patient,
                                            std::vector<ThresholdRule> rules, double t);
  std::vector<AlertChange> apply_reading(PatientState& ps, const std::string& patient, const EnvReading& r);
  PatientState& patient_state(const std::string& patient_user_id) const;
  std::string next_id(const char* prefix, std::uint64_t& counter);
  static std::vector<Event> change_events(const std::vector<AlertChange>& changes);

  std::shared_ptr<EventStore> store_;
  TelemonitorConfig config_;

  mutable std::shared_mutex mutex_;  // users, projects, sensor index, patient map
  std::vector<User> users_;
  std::map<std::string, std::size_t> user_by_id_;
  std::map<std::string, std::size_t> user_by_email_;
  std::map<std::string, Project> projects_;
  std::map<std::string, std::string> project_by_sensor_;
  std::map<std::string, std::unique_ptr<PatientState>> patients_;

  mutable std::mutex commit_mutex_;  // id counters, alerts, alert log, store appends
  std::uint64_t user_counter_ = 0;
  std::uint64_t project_counter_ = 0;
  std::uint64_t rule_counter_ = 0;
  std::uint64_t alert_counter_ = 0;
  std::vector<Alert> alerts_;
  std::vector<AlertChange> alert_log_;

  struct Session {
    std::string user_id;
    double expires_at = 0.0;
  };
  mutable std::mutex token_mutex_;
  std::map<std::string, Session> sessions_;
};

}  // namespace cinnamon::telemonitor
