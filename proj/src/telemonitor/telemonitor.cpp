#include "cinnamon/telemonitor/telemonitor.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "cinnamon/errors.hpp"

namespace cinnamon::telemonitor {

using nlohmann::json;

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void bump_counter(std::uint64_t& counter, const std::string& id, const std::string& prefix) {
  if (id.size() <= prefix.size() + 1 || id.compare(0, prefix.size() + 1, prefix + "-") != 0) return;
  const auto digits = id.substr(prefix.size() + 1);
  if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) return;
  counter = std::max<std::uint64_t>(counter, std::stoull(digits));
}

}  // namespace

std::string to_string(Operation op) {
  switch (op) {
    case Operation::RegisterAdmin: return "register_admin";
    case Operation::UpsertProject: return "upsert_project";
    case Operation::SetThresholds: return "set_thresholds";
    case Operation::IngestReading: return "ingest_reading";
    case Operation::ListUsers: return "list_users";
  }
  return "unknown";
}

bool is_permitted(Operation op, Role role) {
  switch (op) {
    case Operation::RegisterAdmin:
    case Operation::ListUsers:
      return role == Role::Admin;
    case Operation::UpsertProject:
      return role == Role::Admin || role == Role::Designer;
    case Operation::SetThresholds:
      return role == Role::Admin || role == Role::Doctor || role == Role::MedicalStudent;
    case Operation::IngestReading:
      return role == Role::Admin || role == Role::Designer || role == Role::Patient;
  }
  return false;
}

Telemonitor::Telemonitor(std::shared_ptr<EventStore> store, TelemonitorConfig config)
    : store_(std::move(store)), config_(std::move(config)) {
  if (!store_) throw ValidationError("telemonitor needs an event store");
  if (!(config_.token_ttl_s > 0.0)) throw ValidationError("token TTL must be > 0");
  if (config_.resolve_after < 1) throw ValidationError("resolve_after must be >= 1");
  if (config_.pbkdf2_iterations < 1) throw ValidationError("PBKDF2 iterations must be >= 1");
  replay();
}

Telemonitor::~Telemonitor() {
  try {
    store_->flush();
  } catch (...) {
  }
}

double Telemonitor::now() const {
  if (config_.clock) return config_.clock();
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

void Telemonitor::flush() { store_->flush(); }

std::string Telemonitor::next_id(const char* prefix, std::uint64_t& counter) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%s-%06llu", prefix, static_cast<unsigned long long>(++counter));
  return buffer;
}

void Telemonitor::replay() {
  std::vector<AlertChange> derived;
  std::vector<json> stored;
  for (const auto& e : store_->load()) {
    if (event_family(e.type) == "alert") {
      stored.push_back(e.data);
    } else {
      apply(e, derived);
    }
  }
  // A crash between the reading and its alert events may drop a tail of the
  // stored alert log; anything else means the log was edited.
  if (stored.size() > derived.size()) throw ParseError("event log holds alerts its readings do not produce");
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (stored[i] != to_json(derived[i])) {
      throw ParseError("event log alert " + std::to_string(i + 1) + " disagrees with its readings");
    }
  }
}

void Telemonitor::apply(const Event& e, std::vector<AlertChange>& derived) {
  const auto append = [&](std::vector<AlertChange> changes) {
    derived.insert(derived.end(), changes.begin(), changes.end());
  };
  try {
    if (e.type == "user.registered") {
      apply_user(user_from_json(e.data));
    } else if (e.type == "project.upserted") {
      apply_project(project_from_json(e.data));
    } else if (e.type == "thresholds.set") {
      const auto patient = e.data.at("patient_user_id").get<std::string>();
      std::vector<ThresholdRule> rules;
      for (const auto& r : e.data.at("rules")) rules.push_back(rule_from_json(r, patient));
      append(apply_thresholds(patient_state(patient), patient, std::move(rules), e.data.at("t").get<double>()));
    } else if (e.type == "reading.ingested") {
      const auto patient = e.data.at("patient_user_id").get<std::string>();
      append(apply_reading(patient_state(patient), patient, env_reading_from_json(e.data.at("reading"))));
    } else {
      throw ParseError("unknown event type '" + e.type + "'");
    }
  } catch (const json::exception& ex) {
    throw ParseError("event " + std::to_string(e.seq) + ": " + ex.what());
  } catch (const NotFoundError& ex) {
    throw ParseError("event " + std::to_string(e.seq) + ": " + ex.what());
  }
}

void Telemonitor::apply_user(const User& u) {
  const auto index = users_.size();
  users_.push_back(u);
  user_by_id_[u.user_id] = index;
  user_by_email_[lowercase(u.email)] = index;
  if (u.role == Role::Patient) patients_.emplace(u.user_id, std::make_unique<PatientState>());
  bump_counter(user_counter_, u.user_id, "user");
}

void Telemonitor::apply_project(const Project& p) {
  auto it = projects_.find(p.project_id);
  if (it != projects_.end()) {
    for (const auto& s : it->second.sensors) project_by_sensor_.erase(s.sensor_id);
  }
  projects_[p.project_id] = p;
  for (const auto& s : p.sensors) project_by_sensor_[s.sensor_id] = p.project_id;
  bump_counter(project_counter_, p.project_id, "project");
}

std::vector<AlertChange> Telemonitor::apply_thresholds(PatientState& ps, const std::string& patient,
                                                       std::vector<ThresholdRule> rules, double t) {
  std::vector<AlertChange> changes;
  for (auto it = ps.tracks.begin(); it != ps.tracks.end();) {
    const auto& rule_id = it->first.first;
    const auto rule = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.rule_id == rule_id; });
    const auto old = std::find_if(ps.rules.begin(), ps.rules.end(), [&](const auto& r) { return r.rule_id == rule_id; });
    const bool keep = rule != rules.end() && rule->enabled && old != ps.rules.end() &&
                      old->parameter == rule->parameter;
    if (keep) {
      ++it;
      continue;
    }
    if (it->second.active) {
      auto& alert = alerts_[*it->second.active];
      alert.state = AlertState::Resolved;
      alert.resolved_at = t;
      changes.push_back({AlertChangeKind::Resolved, alert});
    }
    it = ps.tracks.erase(it);
  }
  for (auto& r : rules) {
    r.patient_user_id = patient;
    bump_counter(rule_counter_, r.rule_id, "rule");
  }
  ps.rules = std::move(rules);
  alert_log_.insert(alert_log_.end(), changes.begin(), changes.end());
  return changes;
}

std::vector<AlertChange> Telemonitor::apply_reading(PatientState& ps, const std::string& patient,
                                                    const EnvReading& r) {
  auto& points = ps.series[r.parameter];
  const auto at = std::upper_bound(points.begin(), points.end(), r.t,
                                   [](double t, const auto& p) { return t < p.first; });
  points.insert(at, {r.t, r.value});

  std::vector<AlertChange> changes;
  for (const auto& rule : ps.rules) {
    if (!rule.enabled || rule.parameter != r.parameter) continue;
    auto& track = ps.tracks[{rule.rule_id, r.sensor_id}];
    if (rule.out_of_range(r.value)) {
      track.in_range = 0;
      if (track.active) continue;
      Alert alert;
      alert.alert_id = next_id("alert", alert_counter_);
      alert.rule_id = rule.rule_id;
      alert.patient_user_id = patient;
      alert.parameter = rule.parameter;
      alert.severity = rule.severity;
      alert.sensor_id = r.sensor_id;
      alert.t = r.t;
      alert.value = r.value;
      alert.created_at = r.t;
      track.active = alerts_.size();
      alerts_.push_back(alert);
      changes.push_back({AlertChangeKind::Created, alert});
    } else if (track.active) {
      if (++track.in_range < config_.resolve_after) continue;
      auto& alert = alerts_[*track.active];
      alert.state = AlertState::Resolved;
      alert.resolved_at = r.t;
      changes.push_back({AlertChangeKind::Resolved, alert});
      track = {};
    }
  }
  alert_log_.insert(alert_log_.end(), changes.begin(), changes.end());
  return changes;
}

std::vector<Event> Telemonitor::change_events(const std::vector<AlertChange>& changes) {
  std::vector<Event> events;
  for (const auto& c : changes) {
    events.push_back({0, c.kind == AlertChangeKind::Created ? "alert.created" : "alert.resolved", to_json(c)});
  }
  return events;
}

void Telemonitor::authorize(Operation op, const Principal& actor) const {
  if (!is_permitted(op, actor.role)) {
    throw PermissionError("role '" + to_string(actor.role) + "' may not " + to_string(op));
  }
}

Telemonitor::PatientState& Telemonitor::patient_state(const std::string& patient_user_id) const {
  auto it = patients_.find(patient_user_id);
  if (it == patients_.end()) throw NotFoundError("unknown patient '" + patient_user_id + "'");
  return *it->second;
}

User Telemonitor::register_user(const std::string& name, const std::string& email, Role role,
                                const std::string& credential, const Principal* actor) {
  if (name.empty()) throw ValidationError("name must not be empty");
  const auto at = email.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == email.size()) {
    throw ValidationError("email '" + email + "' is not valid");
  }
  if (credential.empty()) throw ValidationError("credential must not be empty");

  User u;
  u.name = name;
  u.email = email;
  u.role = role;
  u.credential_hash = hash_credential(credential, config_.pbkdf2_iterations);

  std::unique_lock lock(mutex_);
  if (role == Role::Admin && !users_.empty()) {
    if (actor == nullptr) throw AuthError("registering an admin needs an authenticated admin");
    authorize(Operation::RegisterAdmin, *actor);
  }
  if (user_by_email_.contains(lowercase(email))) throw ConflictError("email '" + email + "' is already registered");
  std::lock_guard commit(commit_mutex_);
  u.user_id = next_id("user", user_counter_);
  u.created_at = now();
  std::vector<Event> events{{0, "user.registered", to_json(u, true)}};
  store_->append(events);
  apply_user(u);
  return u;
}

std::string Telemonitor::authenticate(const std::string& email, const std::string& credential) {
  std::optional<User> user;
  {
    std::shared_lock lock(mutex_);
    auto it = user_by_email_.find(lowercase(email));
    if (it != user_by_email_.end()) user = users_[it->second];
  }
  if (!user) {
    // Same work as a real check so timing does not reveal registered emails.
    static const std::string decoy = hash_credential("decoy", config_.pbkdf2_iterations);
    verify_credential(credential, decoy);
    throw AuthError("invalid email or credential");
  }
  if (!verify_credential(credential, user->credential_hash)) throw AuthError("invalid email or credential");
  const auto token = random_token();
  const double t = now();
  std::lock_guard lock(token_mutex_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.expires_at <= t; });
  sessions_[token] = {user->user_id, t + config_.token_ttl_s};
  return token;
}

Principal Telemonitor::resolve_token(const std::string& token) const {
  std::string user_id;
  {
    std::lock_guard lock(token_mutex_);
    auto it = sessions_.find(token);
    if (it == sessions_.end() || now() >= it->second.expires_at) throw AuthError("token is invalid or expired");
    user_id = it->second.user_id;
  }
  std::shared_lock lock(mutex_);
  auto it = user_by_id_.find(user_id);
  if (it == user_by_id_.end()) throw AuthError("token is invalid or expired");
  return {user_id, users_[it->second].role};
}

Project Telemonitor::upsert_project(Project project, const Principal& actor, bool create_only) {
  authorize(Operation::UpsertProject, actor);
  project.validate();
  std::unique_lock lock(mutex_);
  auto patient = user_by_id_.find(project.patient_user_id);
  if (patient == user_by_id_.end() || users_[patient->second].role != Role::Patient) {
    throw ValidationError("patient_user_id '" + project.patient_user_id + "' is not a registered patient");
  }
  if (create_only && projects_.contains(project.project_id)) {
    throw ConflictError("project '" + project.project_id + "' already exists");
  }
  for (const auto& s : project.sensors) {
    auto owner = project_by_sensor_.find(s.sensor_id);
    if (owner != project_by_sensor_.end() && owner->second != project.project_id) {
      throw ConflictError("sensor '" + s.sensor_id + "' already belongs to project '" + owner->second + "'");
    }
  }
  std::lock_guard commit(commit_mutex_);
  if (project.project_id.empty()) {
    do {
      project.project_id = next_id("project", project_counter_);
    } while (projects_.contains(project.project_id));
  }
  std::vector<Event> events{{0, "project.upserted", to_json(project)}};
  store_->append(events);
  apply_project(project);
  return project;
}

Project Telemonitor::get_project(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFoundError("unknown project '" + project_id + "'");
  return it->second;
}

std::vector<Project> Telemonitor::list_projects() const {
  std::shared_lock lock(mutex_);
  std::vector<Project> out;
  for (const auto& [id, p] : projects_) out.push_back(p);
  return out;
}

std::vector<ThresholdRule> Telemonitor::set_thresholds(const std::string& patient_user_id,
                                                       std::vector<ThresholdRule> rules, const Principal& actor) {
  authorize(Operation::SetThresholds, actor);
  for (auto& r : rules) {
    if (!r.patient_user_id.empty() && r.patient_user_id != patient_user_id) {
      throw ValidationError("rule belongs to patient '" + r.patient_user_id + "'");
    }
    r.patient_user_id = patient_user_id;
    r.validate();
  }
  std::shared_lock lock(mutex_);
  auto& ps = patient_state(patient_user_id);
  std::lock_guard patient_lock(ps.mutex);
  std::vector<std::string> seen;
  for (const auto& r : rules) {
    if (r.rule_id.empty()) continue;
    if (std::find(seen.begin(), seen.end(), r.rule_id) != seen.end()) {
      throw ValidationError("duplicate rule '" + r.rule_id + "'");
    }
    seen.push_back(r.rule_id);
    if (std::none_of(ps.rules.begin(), ps.rules.end(), [&](const auto& old) { return old.rule_id == r.rule_id; })) {
      throw ValidationError("unknown rule '" + r.rule_id + "' for patient '" + patient_user_id + "'");
    }
  }
  std::lock_guard commit(commit_mutex_);
  for (auto& r : rules) {
    if (r.rule_id.empty()) r.rule_id = next_id("rule", rule_counter_);
  }
  json rules_json = json::array();
  for (const auto& r : rules) rules_json.push_back(to_json(r));
  const double t = now();
  std::vector<Event> events{{0, "thresholds.set", {{"patient_user_id", patient_user_id}, {"rules", rules_json}, {"t", t}}}};
  store_->append(events);
  auto changes = apply_thresholds(ps, patient_user_id, rules, t);
  auto alert_events = change_events(changes);
  if (!alert_events.empty()) store_->append(alert_events);
  return ps.rules;
}

std::vector<ThresholdRule> Telemonitor::get_thresholds(const std::string& patient_user_id) const {
  std::shared_lock lock(mutex_);
  auto& ps = patient_state(patient_user_id);
  std::lock_guard patient_lock(ps.mutex);
  return ps.rules;
}

std::vector<AlertChange> Telemonitor::ingest_reading(const EnvReading& reading, const Principal& actor) {
  authorize(Operation::IngestReading, actor);
  if (!std::isfinite(reading.t) || !std::isfinite(reading.value)) {
    throw ValidationError("reading t and value must be finite");
  }
  std::shared_lock lock(mutex_);
  auto owner = project_by_sensor_.find(reading.sensor_id);
  if (owner == project_by_sensor_.end()) throw NotFoundError("unknown sensor '" + reading.sensor_id + "'");
  const auto& patient = projects_.at(owner->second).patient_user_id;
  if (actor.role == Role::Patient && actor.user_id != patient) {
    throw PermissionError("patients may only ingest their own readings");
  }
  auto& ps = patient_state(patient);
  std::lock_guard patient_lock(ps.mutex);
  std::lock_guard commit(commit_mutex_);
  std::vector<Event> events{{0, "reading.ingested", {{"patient_user_id", patient}, {"reading", to_json(reading)}}}};
  store_->append(events);
  auto changes = apply_reading(ps, patient, reading);
  auto alert_events = change_events(changes);
  if (!alert_events.empty()) store_->append(alert_events);
  return changes;
}

std::vector<SeriesBucket> Telemonitor::query_series(const std::string& patient_user_id, Parameter parameter,
                                                    double from_t, double to_t, double bucket_width_s) const {
  std::shared_lock lock(mutex_);
  auto& ps = patient_state(patient_user_id);
  std::lock_guard patient_lock(ps.mutex);
  auto it = ps.series.find(parameter);
  if (it == ps.series.end()) return bucketize({}, from_t, to_t, bucket_width_s);
  return bucketize(it->second, from_t, to_t, bucket_width_s);
}

std::vector<Alert> Telemonitor::list_alerts(const AlertFilter& filter) const {
  std::vector<Alert> out;
  {
    std::lock_guard commit(commit_mutex_);
    for (const auto& a : alerts_) {
      if (filter.state && a.state != *filter.state) continue;
      if (filter.patient_user_id && a.patient_user_id != *filter.patient_user_id) continue;
      if (filter.severity && a.severity != *filter.severity) continue;
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end(), [](const Alert& a, const Alert& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.alert_id > b.alert_id;
  });
  return out;
}

std::vector<User> Telemonitor::list_users(const Principal& actor) const {
  authorize(Operation::ListUsers, actor);
  std::shared_lock lock(mutex_);
  std::vector<User> out = users_;
  for (auto& u : out) u.credential_hash.clear();
  std::stable_sort(out.begin(), out.end(), [](const User& a, const User& b) { return a.created_at < b.created_at; });
  return out;
}

std::optional<User> Telemonitor::find_user(const std::string& user_id) const {
  std::shared_lock lock(mutex_);
  auto it = user_by_id_.find(user_id);
  if (it == user_by_id_.end()) return std::nullopt;
  auto u = users_[it->second];
  u.credential_hash.clear();
  return u;
}

std::optional<SensorPlacement> Telemonitor::locate_sensor(const std::string& sensor_id) const {
  std::shared_lock lock(mutex_);
  auto owner = project_by_sensor_.find(sensor_id);
  if (owner == project_by_sensor_.end()) return std::nullopt;
  const auto& project = projects_.at(owner->second);
  const auto* sensor = project.find_sensor(sensor_id);
  return SensorPlacement{project.project_id, project.patient_user_id, *sensor, *project.find_location(sensor->location_id)};
}

std::vector<AlertChange> Telemonitor::alert_log() const {
  std::lock_guard commit(commit_mutex_);
  return alert_log_;
}

}  // namespace cinnamon::telemonitor
