#include <algorithm>

#include "cinnamon/api/service.hpp"
#include "cinnamon/readings.hpp"
#include "cinnamon/telemonitor/types.hpp"

namespace cinnamon::api {

using nlohmann::json;

namespace {

json ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

json array_of(const json& items, std::size_t min_items = 0) {
  json j = {{"type", "array"}, {"items", items}};
  if (min_items > 0) j["minItems"] = min_items;
  return j;
}

json string_enum(const std::vector<std::string>& values) { return {{"type", "string"}, {"enum", values}}; }

json object(const json& properties, const std::vector<std::string>& required, bool closed = false) {
  json j = {{"type", "object"}, {"properties", properties}};
  if (!required.empty()) j["required"] = required;
  if (closed) j["additionalProperties"] = false;
  return j;
}

const json kNumber = {{"type", "number"}};
const json kString = {{"type", "string"}};
const json kOptionalNumber = {{"type", json::array({"number", "null"})}};
const json kTriple = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 3}, {"maxItems", 3}};

std::string operation_id(const Route& r) {
  std::string id;
  for (char c : r.method) id.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (char c : r.path) {
    if (c == '/') {
      id.push_back('_');
    } else if (c != '{' && c != '}') {
      id.push_back(c);
    }
  }
  return id;
}

}  // namespace

const json& component_schemas() {
  static const json schemas = [] {
    std::vector<std::string> parameters;
    for (auto p : kAllParameters) parameters.emplace_back(to_string(p));
    std::vector<std::string> roles;
    for (auto r : telemonitor::kAllRoles) roles.push_back(telemonitor::to_string(r));
    const std::vector<std::string> severities = {"info", "warning", "critical"};
    std::vector<std::string> activities;
    for (auto a : kAllActivities) activities.emplace_back(to_string(a));
    json activity_scores = json::object();
    for (const auto& a : activities) activity_scores[a] = kNumber;

    json s;
    s["Error"] = object({{"code", string_enum({kErrorCodes.begin(), kErrorCodes.end()})}, {"message", kString}},
                        {"code", "message"}, true);
    s["Point"] = {{"type", "array"}, {"items", kNumber}, {"minItems", 2}, {"maxItems", 2}};
    s["Layout"] = object(
        {{"rooms", array_of(object({{"id", kString}, {"polygon", array_of(ref("Point"), 3)}}, {"id", "polygon"}), 1)},
         {"anchors", array_of(object({{"id", kString}, {"position", ref("Point")}, {"mount_height", kNumber}},
                                     {"id", "position"}))}},
        {"rooms"});
    s["Location"] = object({{"location_id", kString}, {"name", kString}, {"layout", ref("Layout")}},
                           {"location_id", "layout"});
    s["Sensor"] = object({{"sensor_id", kString},
                          {"kind", kString},
                          {"location_id", kString},
                          {"room_id", kString},
                          {"position", ref("Point")}},
                         {"sensor_id", "kind", "location_id", "room_id", "position"});
    s["Project"] = object({{"project_id", kString},
                           {"patient_user_id", kString},
                           {"locations", array_of(ref("Location"))},
                           {"sensors", array_of(ref("Sensor"))}},
                          {"patient_user_id"});
    s["ProjectUpdate"] = s["Project"];
    s["ProjectUpdate"]["required"] = {"project_id", "patient_user_id"};
    s["ProjectUpdate"]["properties"]["project_id"] = {{"type", "string"}, {"minLength", 1}};
    s["ProjectList"] = object({{"projects", array_of(ref("Project"))}}, {"projects"});
    s["Registration"] = object({{"name", {{"type", "string"}, {"minLength", 1}}},
                                {"email", {{"type", "string"}, {"minLength", 3}}},
                                {"role", string_enum(roles)},
                                {"credential", {{"type", "string"}, {"minLength", 1}}}},
                               {"name", "email", "role", "credential"}, true);
    s["Login"] = object({{"email", kString}, {"credential", kString}}, {"email", "credential"}, true);
    s["Session"] = object({{"token", kString}, {"user_id", kString}, {"role", string_enum(roles)}, {"expires_in", kNumber}},
                          {"token", "user_id", "role", "expires_in"});
    s["User"] = object({{"user_id", kString},
                        {"name", kString},
                        {"email", kString},
                        {"role", string_enum(roles)},
                        {"created_at", kNumber}},
                       {"user_id", "name", "email", "role", "created_at"}, true);
    s["UserList"] = object({{"users", array_of(ref("User"))}}, {"users"});
    s["ThresholdRule"] = object({{"rule_id", kString},
                                 {"patient_user_id", kString},
                                 {"parameter", string_enum(parameters)},
                                 {"min", kOptionalNumber},
                                 {"max", kOptionalNumber},
                                 {"severity", string_enum(severities)},
                                 {"enabled", {{"type", "boolean"}}}},
                                {"parameter"}, true);
    s["RuleSet"] = object({{"rules", array_of(ref("ThresholdRule"))}}, {"rules"});
    s["EnvReading"] = object(
        {{"t", kNumber}, {"sensor_id", kString}, {"parameter", string_enum(parameters)}, {"value", kNumber}},
        {"t", "sensor_id", "parameter", "value"}, true);
    s["EnvIngest"] = object({{"readings", array_of(ref("EnvReading"), 1)}}, {"readings"}, true);
    s["RssiSample"] = object({{"t", kNumber}, {"anchor_id", kString}, {"wearable_id", kString}, {"rssi_dbm", kNumber}},
                             {"t", "anchor_id", "wearable_id", "rssi_dbm"}, true);
    s["RssiIngest"] = object({{"samples", array_of(ref("RssiSample"), 1)}}, {"samples"}, true);
    s["ImuSample"] = object({{"t", kNumber},
                             {"accel", kTriple},
                             {"gyro", kTriple},
                             {"orientation", kTriple},
                             {"heart_rate_bpm", kOptionalNumber}},
                            {"t", "accel", "gyro", "orientation"}, true);
    s["ImuIngest"] = object({{"wearable_id", kString}, {"samples", array_of(ref("ImuSample"), 1)}},
                            {"wearable_id", "samples"}, true);
    s["Alert"] = object({{"alert_id", kString},
                         {"rule_id", kString},
                         {"patient_user_id", kString},
                         {"parameter", string_enum(parameters)},
                         {"severity", string_enum(severities)},
                         {"reading", object({{"sensor_id", kString}, {"t", kNumber}, {"value", kNumber}},
                                            {"sensor_id", "t", "value"})},
                         {"state", string_enum({"active", "resolved"})},
                         {"created_at", kNumber},
                         {"resolved_at", kOptionalNumber}},
                        {"alert_id", "rule_id", "patient_user_id", "state", "created_at"});
    s["AlertList"] = object({{"alerts", array_of(ref("Alert"))}}, {"alerts"});
    s["AlertChange"] = object({{"change", string_enum({"created", "resolved"})}, {"alert", ref("Alert")}},
                              {"change", "alert"});
    s["PositionEstimate"] = object({{"t", kNumber},
                                    {"wearable_id", kString},
                                    {"xy", {{"anyOf", json::array({ref("Point"), {{"type", "null"}}})}}},
                                    {"room_id", {{"type", json::array({"string", "null"})}}},
                                    {"residual_rms_m", kNumber},
                                    {"anchors_used", {{"type", "integer"}}}},
                                   {"t", "wearable_id", "xy", "room_id"});
    s["ActivityEstimate"] = object({{"t", kNumber},
                                    {"wearable_id", kString},
                                    {"label", string_enum(activities)},
                                    {"scores", object(activity_scores, activities)}},
                                   {"t", "label", "scores"});
    s["IngestResult"] = object({{"accepted", {{"type", "integer"}}},
                                {"changes", array_of(ref("AlertChange"))},
                                {"positions", array_of(ref("PositionEstimate"))},
                                {"activity", {{"anyOf", json::array({ref("ActivityEstimate"), {{"type", "null"}}})}}}},
                               {"accepted", "changes"});
    s["SeriesBucket"] = object({{"bucket_start_t", kNumber},
                                {"bucket_width_s", kNumber},
                                {"count", {{"type", "integer"}, {"minimum", 1}}},
                                {"mean", kNumber},
                                {"min", kNumber},
                                {"max", kNumber}},
                               {"bucket_start_t", "bucket_width_s", "count", "mean", "min", "max"});
    s["Series"] = object({{"patient_user_id", kString},
                          {"parameter", string_enum(parameters)},
                          {"buckets", array_of(ref("SeriesBucket"))}},
                         {"buckets"});
    const json gfi_items = {{"type", "array"}, {"items", {{"type", "integer"}}}};
    const json pssuq_items = {{"type", "array"}, {"items", {{"type", json::array({"integer", "null"})}}}};
    s["GfiAnswers"] = {{"anyOf", json::array({gfi_items, object({{"items", gfi_items}, {"respondent_id", kString}, {"t", kNumber}},
                                                                {"items"})})}};
    s["GfiResult"] = object({{"total", {{"type", "integer"}}}, {"frail", {{"type", "boolean"}}}}, {"total", "frail"});
    s["PssuqAnswers"] = {{"anyOf", json::array({pssuq_items, object({{"items", pssuq_items},
                                                                     {"respondent_id", kString},
                                                                     {"t", kNumber}},
                                                                    {"items"})})}};
    const json score = object({{"mean", kOptionalNumber}, {"answered", {{"type", "integer"}}}}, {"mean", "answered"});
    s["PssuqResult"] = object({{"overall", score}, {"sysuse", score}, {"infoqual", score}, {"interqual", score}},
                              {"overall", "sysuse", "infoqual", "interqual"});
    s["Health"] = object({{"status", string_enum({"ok"})}}, {"status"});
    s["OpenApiDocument"] = {{"type", "object"}};
    return s;
  }();
  return schemas;
}

json ApiService::openapi_document() const {
  json paths = json::object();
  for (const auto& r : routes_) {
    json op;
    op["summary"] = r.summary;
    op["operationId"] = operation_id(r);
    json parameters = json::array();
    std::size_t open = r.path.find('{');
    while (open != std::string::npos) {
      const auto close = r.path.find('}', open);
      parameters.push_back({{"name", r.path.substr(open + 1, close - open - 1)},
                            {"in", "path"},
                            {"required", true},
                            {"schema", kString}});
      open = r.path.find('{', close);
    }
    for (const auto& q : r.query) {
      parameters.push_back({{"name", q.name},
                            {"in", "query"},
                            {"required", q.required},
                            {"description", q.description},
                            {"schema", {{"type", q.type}}}});
    }
    op["parameters"] = parameters;
    if (!r.request_schema.is_null()) {
      op["requestBody"] = {{"required", true}, {"content", {{"application/json", {{"schema", r.request_schema}}}}}};
    }
    if (r.auth == AuthMode::Required) {
      op["security"] = json::array({{{"bearerAuth", json::array()}}});
    } else if (r.auth == AuthMode::Optional) {
      op["security"] = json::array({json::object(), {{"bearerAuth", json::array()}}});
    } else {
      op["security"] = json::array();
    }
    json responses;
    responses[std::to_string(r.success_status)] = {
        {"description", "success"}, {"content", {{"application/json", {{"schema", r.response_schema}}}}}};
    std::map<int, std::vector<std::string>> by_status;
    for (const auto& code : r.error_codes) by_status[status_for(code)].push_back(code);
    for (const auto& [status, codes] : by_status) {
      responses[std::to_string(status)] = {{"description", "error"},
                                           {"content", {{"application/json", {{"schema", ref("Error")}}}}},
                                           {"x-error-codes", codes}};
    }
    op["responses"] = responses;
    op["x-error-codes"] = r.error_codes;
    std::string method = r.method;
    std::transform(method.begin(), method.end(), method.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    paths[std::string(kApiPrefix) + r.path][method] = op;
  }
  return {{"openapi", "3.0.3"},
          {"info", {{"title", "cinnamon telemonitoring API"}, {"version", "1.0.0"}}},
          {"paths", paths},
          {"components",
           {{"schemas", component_schemas()},
            {"securitySchemes", {{"bearerAuth", {{"type", "http"}, {"scheme", "bearer"}}}}}}}};
}

const json& openapi_meta_schema() {
  static const json meta = [] {
    const std::vector<std::string> codes(kErrorCodes.begin(), kErrorCodes.end());
    const json code_list = {{"type", "array"}, {"items", {{"type", "string"}, {"enum", codes}}}};
    const json media = {{"type", "object"},
                        {"required", {"application/json"}},
                        {"properties", {{"application/json", {{"type", "object"},
                                                              {"required", {"schema"}},
                                                              {"properties", {{"schema", {{"type", "object"}}}}}}}}},
                        {"additionalProperties", false}};
    json m;
    m["definitions"]["Parameter"] = {
        {"type", "object"},
        {"required", {"name", "in", "required", "schema"}},
        {"properties",
         {{"name", {{"type", "string"}, {"minLength", 1}}},
          {"in", {{"enum", {"path", "query"}}}},
          {"required", {{"type", "boolean"}}},
          {"description", {{"type", "string"}}},
          {"schema", {{"type", "object"}, {"required", {"type"}}}}}},
        {"additionalProperties", false}};
    m["definitions"]["Response"] = {{"type", "object"},
                                    {"required", {"description", "content"}},
                                    {"properties",
                                     {{"description", {{"type", "string"}}},
                                      {"content", media},
                                      {"x-error-codes", code_list}}},
                                    {"additionalProperties", false}};
    m["definitions"]["Operation"] = {
        {"type", "object"},
        {"required", {"summary", "operationId", "parameters", "responses", "security", "x-error-codes"}},
        {"properties",
         {{"summary", {{"type", "string"}, {"minLength", 1}}},
          {"operationId", {{"type", "string"}, {"minLength", 1}}},
          {"parameters", {{"type", "array"}, {"items", {{"$ref", "#/definitions/Parameter"}}}}},
          {"requestBody",
           {{"type", "object"},
            {"required", {"required", "content"}},
            {"properties", {{"required", {{"type", "boolean"}}}, {"content", media}}},
            {"additionalProperties", false}}},
          {"security", {{"type", "array"}, {"items", {{"type", "object"}}}}},
          {"responses", {{"type", "object"}, {"additionalProperties", {{"$ref", "#/definitions/Response"}}}}},
          {"x-error-codes", code_list}}},
        {"additionalProperties", false}};
    m["definitions"]["PathItem"] = {{"type", "object"},
                                    {"properties",
                                     {{"get", {{"$ref", "#/definitions/Operation"}}},
                                      {"post", {{"$ref", "#/definitions/Operation"}}},
                                      {"put", {{"$ref", "#/definitions/Operation"}}}}},
                                    {"additionalProperties", false}};
    m["type"] = "object";
    m["required"] = {"openapi", "info", "paths", "components"};
    m["properties"] = {
        {"openapi", {{"type", "string"}, {"enum", {"3.0.3"}}}},
        {"info",
         {{"type", "object"},
          {"required", {"title", "version"}},
          {"properties", {{"title", {{"type", "string"}, {"minLength", 1}}}, {"version", {{"type", "string"}}}}}}},
        {"paths", {{"type", "object"}, {"additionalProperties", {{"$ref", "#/definitions/PathItem"}}}}},
        {"components",
         {{"type", "object"},
          {"required", {"schemas"}},
          {"properties",
           {{"schemas", {{"type", "object"}, {"additionalProperties", {{"type", "object"}}}}},
            {"securitySchemes", {{"type", "object"}}}}}}}};
    m["additionalProperties"] = false;
    return m;
  }();
  return meta;
}

}  // namespace cinnamon::api
