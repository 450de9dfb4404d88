#include <algorithm>
#include <charconv>
#include <cmath>

#include "cinnamon/api/service.hpp"
#include "cinnamon/assessment/assessment.hpp"
#include "cinnamon/errors.hpp"

namespace cinnamon::api {

using nlohmann::json;
using telemonitor::Operation;
using telemonitor::Principal;

namespace {

json ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

const Principal& principal(const RouteContext& ctx) {
  if (!ctx.principal) throw AuthError("this endpoint needs a bearer token");
  return *ctx.principal;
}

std::optional<std::string> query(const RouteContext& ctx, const std::string& name) {
  auto it = ctx.request.query.find(name);
  if (it == ctx.request.query.end()) return std::nullopt;
  return it->second;
}

std::string required_query(const RouteContext& ctx, const std::string& name) {
  auto v = query(ctx, name);
  if (!v || v->empty()) throw ValidationError("query parameter '" + name + "' is required");
  return *v;
}

double number_query(const RouteContext& ctx, const std::string& name) {
  const auto text = required_query(ctx, name);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw ValidationError("query parameter '" + name + "' must be a number");
  }
  return value;
}

void require_patient(telemonitor::Telemonitor& tm, const std::string& id) {
  auto user = tm.find_user(id);
  if (!user || user->role != telemonitor::Role::Patient) throw NotFoundError("unknown patient '" + id + "'");
}

telemonitor::SensorPlacement placement_for(telemonitor::Telemonitor& tm, const std::string& sensor_id,
                                           const Principal& actor) {
  auto placement = tm.locate_sensor(sensor_id);
  if (!placement) throw NotFoundError("unknown sensor '" + sensor_id + "'");
  if (actor.role == telemonitor::Role::Patient && actor.user_id != placement->patient_user_id) {
    throw PermissionError("patients may only ingest their own readings");
  }
  return *placement;
}

json changes_json(const std::vector<telemonitor::AlertChange>& changes) {
  json out = json::array();
  for (const auto& c : changes) out.push_back(telemonitor::to_json(c));
  return out;
}

std::array<double, 3> triple(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

void ApiService::build_routes() {
  auto& tm = *telemonitor_;
  const std::vector<std::string> auth = {"auth_required", "auth_failed"};
  const auto codes = [&](std::vector<std::string> extra, bool with_auth = true) {
    std::vector<std::string> out;
    if (with_auth) out = auth;
    out.insert(out.end(), extra.begin(), extra.end());
    out.push_back("internal");
    return out;
  };

  routes_.push_back({"GET", "/health", "Liveness probe", AuthMode::None, {}, nullptr, ref("Health"), 200,
                     codes({}, false), [](RouteContext&) { return json{{"status", "ok"}}; }});

  routes_.push_back({"GET", "/spec", "Machine-readable description of every route", AuthMode::None, {}, nullptr,
                     ref("OpenApiDocument"), 200, codes({}, false),
                     [this](RouteContext&) { return openapi_document(); }});

  routes_.push_back({"POST", "/auth/register", "Register a user; admin accounts need an admin token",
                     AuthMode::Optional, {}, ref("Registration"), ref("User"), 201,
                     codes({"auth_failed", "validation_failed", "forbidden", "conflict"}, false),
                     [&tm](RouteContext& ctx) {
                       const auto& b = ctx.body;
                       const Principal* actor = ctx.principal ? &*ctx.principal : nullptr;
                       const auto user = tm.register_user(
                           b.at("name").get<std::string>(), b.at("email").get<std::string>(),
                           telemonitor::parse_role(b.at("role").get<std::string>()),
                           b.at("credential").get<std::string>(), actor);
                       return telemonitor::to_json(user);
                     }});

  routes_.push_back({"POST", "/auth/login", "Exchange email and credential for a bearer token", AuthMode::None, {},
                     ref("Login"), ref("Session"), 200, codes({"validation_failed", "auth_failed"}, false),
                     [this, &tm](RouteContext& ctx) {
                       const auto token = tm.authenticate(ctx.body.at("email").get<std::string>(),
                                                          ctx.body.at("credential").get<std::string>());
                       const auto who = tm.resolve_token(token);
                       return json{{"token", token},
                                   {"user_id", who.user_id},
                                   {"role", telemonitor::to_string(who.role)},
                                   {"expires_in", config_.token_ttl_s}};
                     }});

  routes_.push_back({"GET", "/users", "All users in registration order (admin only)", AuthMode::Required, {}, nullptr,
                     ref("UserList"), 200, codes({"forbidden"}), [&tm](RouteContext& ctx) {
                       json users = json::array();
                       for (const auto& u : tm.list_users(principal(ctx))) users.push_back(telemonitor::to_json(u));
                       return json{{"users", users}};
                     }});

  routes_.push_back({"GET", "/projects", "All patient projects", AuthMode::Required, {}, nullptr, ref("ProjectList"),
                     200, codes({}), [&tm](RouteContext&) {
                       json projects = json::array();
                       for (const auto& p : tm.list_projects()) projects.push_back(telemonitor::to_json(p));
                       return json{{"projects", projects}};
                     }});

  routes_.push_back({"POST", "/projects", "Create a project; the id is assigned when absent", AuthMode::Required, {},
                     ref("Project"), ref("Project"), 201, codes({"validation_failed", "forbidden", "conflict"}),
                     [&tm](RouteContext& ctx) {
                       return telemonitor::to_json(
                           tm.upsert_project(telemonitor::project_from_json(ctx.body), principal(ctx), true));
                     }});

  routes_.push_back({"PUT", "/projects", "Create or replace a project by project_id", AuthMode::Required, {},
                     ref("ProjectUpdate"), ref("Project"), 200,
                     codes({"validation_failed", "forbidden", "conflict"}), [&tm](RouteContext& ctx) {
                       return telemonitor::to_json(
                           tm.upsert_project(telemonitor::project_from_json(ctx.body), principal(ctx)));
                     }});

  routes_.push_back({"GET", "/projects/{id}", "One project", AuthMode::Required, {}, nullptr, ref("Project"), 200,
                     codes({"not_found"}), [&tm](RouteContext& ctx) {
                       return telemonitor::to_json(tm.get_project(ctx.params.at("id")));
                     }});

  routes_.push_back({"POST", "/ingest/env", "Ingest environmental or heart-rate readings", AuthMode::Required, {},
                     ref("EnvIngest"), ref("IngestResult"), 200,
                     codes({"validation_failed", "forbidden", "not_found"}), [&tm](RouteContext& ctx) {
                       const auto& actor = principal(ctx);
                       tm.authorize(Operation::IngestReading, actor);
                       std::vector<EnvReading> readings;
                       for (const auto& r : ctx.body.at("readings")) {
                         readings.push_back(telemonitor::env_reading_from_json(r));
                         placement_for(tm, readings.back().sensor_id, actor);
                       }
                       std::vector<telemonitor::AlertChange> changes;
                       for (const auto& r : readings) {
                         auto c = tm.ingest_reading(r, actor);
                         changes.insert(changes.end(), c.begin(), c.end());
                       }
                       return json{{"accepted", readings.size()}, {"changes", changes_json(changes)}};
                     }});

  routes_.push_back({"POST", "/ingest/rssi", "Ingest BLE RSSI samples and update live positions", AuthMode::Required,
                     {}, ref("RssiIngest"), ref("IngestResult"), 200,
                     codes({"validation_failed", "forbidden", "not_found"}), [this, &tm](RouteContext& ctx) {
                       const auto& actor = principal(ctx);
                       tm.authorize(Operation::IngestReading, actor);
                       std::map<std::string, std::vector<RssiSample>> by_wearable;
                       for (const auto& s : ctx.body.at("samples")) {
                         RssiSample sample{s.at("t").get<double>(), s.at("anchor_id").get<std::string>(),
                                           s.at("wearable_id").get<std::string>(), s.at("rssi_dbm").get<double>()};
                         by_wearable[sample.wearable_id].push_back(std::move(sample));
                       }
                       std::vector<std::pair<telemonitor::SensorPlacement, std::vector<RssiSample>>> batches;
                       for (auto& [wearable, samples] : by_wearable) {
                         auto placement = placement_for(tm, wearable, actor);
                         for (const auto& s : samples) {
                           const auto& anchors = placement.location.layout.anchors;
                           if (std::none_of(anchors.begin(), anchors.end(),
                                            [&](const auto& a) { return a.id == s.anchor_id; })) {
                             throw ValidationError("unknown anchor '" + s.anchor_id + "' in location '" +
                                                   placement.location.location_id + "'");
                           }
                         }
                         batches.emplace_back(std::move(placement), std::move(samples));
                       }
                       json positions = json::array();
                       std::size_t accepted = 0;
                       for (const auto& [placement, samples] : batches) {
                         accepted += samples.size();
                         if (auto p = live_->add_rssi(placement.patient_user_id, placement.location.layout, samples)) {
                           positions.push_back(localization::to_json(*p));
                         }
                       }
                       return json{{"accepted", accepted}, {"changes", json::array()}, {"positions", positions}};
                     }});

  routes_.push_back(
      {"POST", "/ingest/imu", "Ingest 10 Hz wearable samples; heart rate feeds thresholds, windows feed activity",
       AuthMode::Required, {}, ref("ImuIngest"), ref("IngestResult"), 200,
       codes({"validation_failed", "forbidden", "not_found"}), [this, &tm](RouteContext& ctx) {
         const auto& actor = principal(ctx);
         tm.authorize(Operation::IngestReading, actor);
         const auto wearable = ctx.body.at("wearable_id").get<std::string>();
         const auto placement = placement_for(tm, wearable, actor);
         std::vector<ImuSample> samples;
         for (const auto& s : ctx.body.at("samples")) {
           ImuSample sample;
           sample.t = s.at("t").get<double>();
           sample.accel = triple(s.at("accel"));
           sample.gyro = triple(s.at("gyro"));
           sample.orientation = triple(s.at("orientation"));
           if (s.contains("heart_rate_bpm") && !s.at("heart_rate_bpm").is_null()) {
             sample.heart_rate_bpm = s.at("heart_rate_bpm").get<double>();
           }
           samples.push_back(std::move(sample));
         }
         std::vector<telemonitor::AlertChange> changes;
         for (const auto& s : samples) {
           if (!s.heart_rate_bpm) continue;
           auto c = tm.ingest_reading({s.t, wearable, Parameter::heart_rate_bpm, *s.heart_rate_bpm}, actor);
           changes.insert(changes.end(), c.begin(), c.end());
         }
         const auto activity = live_->add_imu(placement.patient_user_id, wearable, samples);
         return json{{"accepted", samples.size()},
                     {"changes", changes_json(changes)},
                     {"activity", activity ? to_json(*activity) : json(nullptr)}};
       }});

  routes_.push_back({"GET", "/patients/{id}/series", "Bucketed statistics of one parameter over [from, to)",
                     AuthMode::Required,
                     {{"parameter", "string", true, "parameter name"},
                      {"from", "number", true, "range start, unix seconds"},
                      {"to", "number", true, "range end (exclusive), unix seconds"},
                      {"bucket_s", "number", true, "bucket width in seconds"}},
                     nullptr, ref("Series"), 200, codes({"validation_failed", "not_found"}),
                     [&tm](RouteContext& ctx) {
                       const auto& patient = ctx.params.at("id");
                       const auto parameter = parse_parameter(required_query(ctx, "parameter"));
                       const auto buckets = tm.query_series(patient, parameter, number_query(ctx, "from"),
                                                            number_query(ctx, "to"), number_query(ctx, "bucket_s"));
                       json out = json::array();
                       for (const auto& b : buckets) out.push_back(telemonitor::to_json(b));
                       return json{{"patient_user_id", patient}, {"parameter", to_string(parameter)}, {"buckets", out}};
                     }});

  routes_.push_back({"GET", "/patients/{id}/thresholds", "The patient's threshold rules", AuthMode::Required, {},
                     nullptr, ref("RuleSet"), 200, codes({"not_found"}), [&tm](RouteContext& ctx) {
                       json rules = json::array();
                       for (const auto& r : tm.get_thresholds(ctx.params.at("id"))) rules.push_back(telemonitor::to_json(r));
                       return json{{"rules", rules}};
                     }});

  routes_.push_back({"PUT", "/patients/{id}/thresholds", "Replace the patient's threshold rules", AuthMode::Required,
                     {}, ref("RuleSet"), ref("RuleSet"), 200, codes({"validation_failed", "forbidden", "not_found"}),
                     [&tm](RouteContext& ctx) {
                       const auto& patient = ctx.params.at("id");
                       std::vector<telemonitor::ThresholdRule> rules;
                       for (const auto& r : ctx.body.at("rules")) rules.push_back(telemonitor::rule_from_json(r, patient));
                       json out = json::array();
                       for (const auto& r : tm.set_thresholds(patient, std::move(rules), principal(ctx))) {
                         out.push_back(telemonitor::to_json(r));
                       }
                       return json{{"rules", out}};
                     }});

  routes_.push_back({"GET", "/alerts", "Alerts, newest first", AuthMode::Required,
                     {{"state", "string", false, "active or resolved"},
                      {"patient", "string", false, "patient user id"},
                      {"severity", "string", false, "info, warning or critical"}},
                     nullptr, ref("AlertList"), 200, codes({"validation_failed"}), [&tm](RouteContext& ctx) {
                       telemonitor::AlertFilter filter;
                       if (auto s = query(ctx, "state")) filter.state = telemonitor::parse_alert_state(*s);
                       if (auto p = query(ctx, "patient")) filter.patient_user_id = *p;
                       if (auto s = query(ctx, "severity")) filter.severity = telemonitor::parse_severity(*s);
                       json alerts = json::array();
                       for (const auto& a : tm.list_alerts(filter)) alerts.push_back(telemonitor::to_json(a));
                       return json{{"alerts", alerts}};
                     }});

  routes_.push_back({"GET", "/patients/{id}/position", "Latest indoor position estimate", AuthMode::Required, {},
                     nullptr, ref("PositionEstimate"), 200, codes({"not_found"}), [this, &tm](RouteContext& ctx) {
                       const auto& patient = ctx.params.at("id");
                       require_patient(tm, patient);
                       auto p = live_->position(patient);
                       if (!p) throw NotFoundError("no position for patient '" + patient + "' yet");
                       return localization::to_json(*p);
                     }});

  routes_.push_back({"GET", "/patients/{id}/activity", "Latest activity label and class scores", AuthMode::Required,
                     {}, nullptr, ref("ActivityEstimate"), 200, codes({"not_found"}), [this, &tm](RouteContext& ctx) {
                       const auto& patient = ctx.params.at("id");
                       require_patient(tm, patient);
                       auto a = live_->activity(patient);
                       if (!a) throw NotFoundError("no activity for patient '" + patient + "' yet");
                       return to_json(*a);
                     }});

  routes_.push_back({"POST", "/assessments/gfi", "Score a frailty questionnaire (15 items, 0 or 1)",
                     AuthMode::Required, {}, ref("GfiAnswers"), ref("GfiResult"), 200, codes({"validation_failed"}),
                     [](RouteContext& ctx) {
                       return assessment::to_json(assessment::score_gfi(assessment::gfi_from_json(ctx.body)));
                     }});

  routes_.push_back({"POST", "/assessments/pssuq", "Score a usability questionnaire (16 items, 1-7 or null)",
                     AuthMode::Required, {}, ref("PssuqAnswers"), ref("PssuqResult"), 200,
                     codes({"validation_failed"}), [](RouteContext& ctx) {
                       return assessment::to_json(assessment::score_pssuq(assessment::pssuq_from_json(ctx.body)));
                     }});
}

}  // namespace cinnamon::api
