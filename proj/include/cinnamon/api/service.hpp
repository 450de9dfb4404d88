#pragma once

#include <array>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinnamon/api/live.hpp"
#include "cinnamon/channel.hpp"
#include "cinnamon/telemonitor/telemonitor.hpp"

namespace cinnamon::api {

inline constexpr const char* kApiPrefix = "/api/v1";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;                    // 0 binds an ephemeral port
  std::filesystem::path data_dir;     // empty keeps state in memory
  double token_ttl_s = 3600.0;
  std::vector<std::string> cors_allow_origins;  // "*" allows any origin
  std::optional<std::filesystem::path> scenario;     // its channel model drives live localization
  std::optional<std::filesystem::path> static_dir;   // served at "/"
  std::optional<std::filesystem::path> activity_model;  // model JSON; default GB trained on first use
  int pbkdf2_iterations = telemonitor::kDefaultPbkdf2Iterations;

  void validate() const;
};

/// Keys: host, port, data_dir, token_ttl_s, cors_allow_origins, scenario,
/// static_dir, activity_model, pbkdf2_iterations. Relative paths resolve
/// against the config file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);
ServiceConfig service_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base = {});

/// Stable machine codes carried in every error body.
inline constexpr std::array<const char*, 8> kErrorCodes = {
    "validation_failed", "auth_required", "auth_failed", "forbidden",
    "not_found",         "conflict",      "method_not_allowed", "internal"};
int status_for(const std::string& code);

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // keys lower-case
  std::string body;

  std::optional<std::string> header(const std::string& name) const;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;
};

ApiResponse error_response(const std::string& code, const std::string& message);

struct QueryParam {
  std::string name;
  std::string type;  // "string" or "number"
  bool required = false;
  std::string description;
};

struct RouteContext {
  const ApiRequest& request;
  std::map<std::string, std::string> params;  // path parameters
  nlohmann::json body;
  std::optional<telemonitor::Principal> principal;
};

enum class AuthMode { None, Optional, Required };

struct Route {
  std::string method;
  std::string path;  // relative to kApiPrefix, "{name}" segments capture
  std::string summary;
  AuthMode auth = AuthMode::Required;
  std::vector<QueryParam> query;
  nlohmann::json request_schema;   // null when the route takes no body
  nlohmann::json response_schema;
  int success_status = 200;
  std::vector<std::string> error_codes;
  std::function<nlohmann::json(RouteContext&)> handler;
};

/// Transport-independent API: routing, auth, validation, idempotency and
/// error mapping. The HTTP server is a thin adapter over handle().
class ApiService {
 public:
  explicit ApiService(ServiceConfig config);
  ApiService(ServiceConfig config, std::shared_ptr<telemonitor::EventStore> store,
             telemonitor::TelemonitorConfig telemonitor_config = {});

  ApiResponse handle(const ApiRequest& request);

  const std::vector<Route>& routes() const { return routes_; }
  nlohmann::json openapi_document() const;

  telemonitor::Telemonitor& telemonitor() { return *telemonitor_; }
  LiveTracker& live() { return *live_; }
  const ServiceConfig& config() const { return config_; }

  /// Loads or trains the activity model now instead of on first IMU ingest.
  void warm_up();
  void flush();

 private:
  void build_routes();
  const har::Model& activity_model();
  ApiResponse dispatch(const ApiRequest& request);
  void apply_cors(const ApiRequest& request, ApiResponse& response) const;

  ServiceConfig config_;
  std::unique_ptr<telemonitor::Telemonitor> telemonitor_;
  std::unique_ptr<LiveTracker> live_;
  std::vector<Route> routes_;
  nlohmann::json schema_root_;  // {"components": {"schemas": ...}} for $ref resolution

  std::once_flag model_once_;
  std::optional<har::Model> model_;

  struct Remembered {
    std::string fingerprint;
    ApiResponse response;
  };
  std::mutex idempotency_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> in_flight_;
  std::map<std::string, Remembered> remembered_;
  std::deque<std::string> remembered_order_;
};

/// Shared request and response schemas, referenced as "#/components/schemas/<Name>".
const nlohmann::json& component_schemas();

/// Minimal OpenAPI meta-schema the generated document must satisfy.
const nlohmann::json& openapi_meta_schema();

}  // namespace cinnamon::api
