#include "cinnamon/api/service.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cinnamon/api/json_schema.hpp"
#include "cinnamon/errors.hpp"
#include "cinnamon/har/model.hpp"
#include "cinnamon/sim/scenario.hpp"

namespace cinnamon::api {

using nlohmann::json;

namespace {

constexpr std::size_t kRememberedLimit = 4096;

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream in(path);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::optional<std::map<std::string, std::string>> match(const std::string& pattern, const std::string& path) {
  const auto want = split_path(pattern);
  const auto have = split_path(path);
  if (want.size() != have.size()) return std::nullopt;
  std::map<std::string, std::string> params;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].size() > 2 && want[i].front() == '{' && want[i].back() == '}') {
      params[want[i].substr(1, want[i].size() - 2)] = have[i];
    } else if (want[i] != have[i]) {
      return std::nullopt;
    }
  }
  return params;
}

template <class F>
ApiResponse mapped(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return error_response("validation_failed", e.what());
  } catch (const ValidationError& e) {
    return error_response("validation_failed", e.what());
  } catch (const AuthError& e) {
    return error_response("auth_failed", e.what());
  } catch (const PermissionError& e) {
    return error_response("forbidden", e.what());
  } catch (const NotFoundError& e) {
    return error_response("not_found", e.what());
  } catch (const ConflictError& e) {
    return error_response("conflict", e.what());
  } catch (const json::exception& e) {
    return error_response("validation_failed", e.what());
  } catch (const std::exception& e) {
    return error_response("internal", e.what());
  }
}

std::shared_ptr<telemonitor::EventStore> store_for(const ServiceConfig& config) {
  if (config.data_dir.empty()) return std::make_shared<telemonitor::MemoryEventStore>();
  return std::make_shared<telemonitor::JsonlEventStore>(config.data_dir);
}

telemonitor::TelemonitorConfig telemonitor_config_for(const ServiceConfig& config) {
  telemonitor::TelemonitorConfig c;
  c.token_ttl_s = config.token_ttl_s;
  c.pbkdf2_iterations = config.pbkdf2_iterations;
  return c;
}

ChannelModel channel_for(const ServiceConfig& config) {
  if (!config.scenario) return {};
  return sim::load_scenario(*config.scenario).channel;
}

}  // namespace

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ValidationError("port must be in [0, 65535]");
  if (host.empty()) throw ValidationError("host must not be empty");
  if (!(token_ttl_s > 0.0)) throw ValidationError("token_ttl_s must be > 0");
  if (pbkdf2_iterations < 1) throw ValidationError("pbkdf2_iterations must be >= 1");
  if (static_dir && !std::filesystem::is_directory(*static_dir)) {
    throw ValidationError("static_dir '" + static_dir->string() + "' is not a directory");
  }
}

ServiceConfig service_config_from_json(const json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) throw ParseError("service config must be a JSON object");
  static const std::vector<std::string> kKeys = {"host",       "port",           "data_dir",
                                                 "token_ttl_s", "cors_allow_origins", "scenario",
                                                 "static_dir", "activity_model", "pbkdf2_iterations"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ParseError("service config has unknown key '" + key + "'");
    }
  }
  const auto path = [&](const char* key) -> std::optional<std::filesystem::path> {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    std::filesystem::path p = doc.at(key).get<std::string>();
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  try {
    ServiceConfig c;
    c.host = doc.value("host", c.host);
    c.port = doc.value("port", c.port);
    c.data_dir = path("data_dir").value_or(std::filesystem::path());
    c.token_ttl_s = doc.value("token_ttl_s", c.token_ttl_s);
    c.cors_allow_origins = doc.value("cors_allow_origins", std::vector<std::string>{});
    c.scenario = path("scenario");
    c.static_dir = path("static_dir");
    c.activity_model = path("activity_model");
    c.pbkdf2_iterations = doc.value("pbkdf2_iterations", c.pbkdf2_iterations);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("service config: ") + e.what());
  }
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  try {
    return service_config_from_json(json::parse(in), path.parent_path());
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + path.string() + "': " + e.what());
  }
}

int status_for(const std::string& code) {
  if (code == "validation_failed") return 400;
  if (code == "auth_required" || code == "auth_failed") return 401;
  if (code == "forbidden") return 403;
  if (code == "not_found") return 404;
  if (code == "method_not_allowed") return 405;
  if (code == "conflict") return 409;
  return 500;
}

ApiResponse error_response(const std::string& code, const std::string& message) {
  return {status_for(code), {{"code", code}, {"message", message}}, {}};
}

std::optional<std::string> ApiRequest::header(const std::string& name) const {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto it = headers.find(key);
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

ApiService::ApiService(ServiceConfig config)
    : ApiService(config, store_for(config), telemonitor_config_for(config)) {}

ApiService::ApiService(ServiceConfig config, std::shared_ptr<telemonitor::EventStore> store,
                       telemonitor::TelemonitorConfig telemonitor_config)
    : config_(std::move(config)) {
  config_.validate();
  telemonitor_ = std::make_unique<telemonitor::Telemonitor>(std::move(store), std::move(telemonitor_config));
  live_ = std::make_unique<LiveTracker>(channel_for(config_), [this]() -> const har::Model& {
    return activity_model();
  });
  schema_root_ = {{"components", {{"schemas", component_schemas()}}}};
  build_routes();
}

const har::Model& ApiService::activity_model() {
  std::call_once(model_once_, [this] {
    if (config_.activity_model) {
      std::ifstream in(*config_.activity_model);
      if (!in) throw ParseError("cannot open activity model '" + config_.activity_model->string() + "'");
      model_ = har::Model::from_json(json::parse(in));
    } else {
      model_ = default_activity_model();
    }
  });
  return *model_;
}

void ApiService::warm_up() { activity_model(); }

void ApiService::flush() { telemonitor_->flush(); }

ApiResponse ApiService::handle(const ApiRequest& request) {
  ApiResponse response;
  if (request.method == "OPTIONS") {
    response.status = 204;
    response.body = nullptr;
    response.headers["Access-Control-Allow-Methods"] = "GET, POST, PUT, OPTIONS";
    response.headers["Access-Control-Allow-Headers"] = "Authorization, Content-Type, X-Idempotency-Key";
    response.headers["Access-Control-Max-Age"] = "600";
  } else {
    response = mapped([&] { return dispatch(request); });
  }
  apply_cors(request, response);
  return response;
}

void ApiService::apply_cors(const ApiRequest& request, ApiResponse& response) const {
  const auto origin = request.header("origin");
  if (!origin) return;
  const auto& allowed = config_.cors_allow_origins;
  if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
    response.headers["Access-Control-Allow-Origin"] = "*";
  } else if (std::find(allowed.begin(), allowed.end(), *origin) != allowed.end()) {
    response.headers["Access-Control-Allow-Origin"] = *origin;
    response.headers["Vary"] = "Origin";
  }
}

ApiResponse ApiService::dispatch(const ApiRequest& request) {
  const std::string prefix = kApiPrefix;
  if (request.path.compare(0, prefix.size(), prefix) != 0) {
    return error_response("not_found", "no route for " + request.path);
  }
  const auto relative = request.path.substr(prefix.size());
  const Route* route = nullptr;
  std::map<std::string, std::string> params;
  bool path_known = false;
  for (const auto& r : routes_) {
    auto m = match(r.path, relative);
    if (!m) continue;
    path_known = true;
    if (r.method == request.method) {
      route = &r;
      params = std::move(*m);
      break;
    }
  }
  if (route == nullptr) {
    if (path_known) return error_response("method_not_allowed", request.method + " is not allowed on " + request.path);
    return error_response("not_found", "no route for " + request.path);
  }

  RouteContext ctx{request, std::move(params), nullptr, std::nullopt};
  const auto authorization = request.header("authorization");
  if (authorization && route->auth != AuthMode::None) {
    const std::string scheme = "Bearer ";
    if (authorization->compare(0, scheme.size(), scheme) != 0) {
      return error_response("auth_failed", "Authorization header must use the Bearer scheme");
    }
    try {
      ctx.principal = telemonitor_->resolve_token(authorization->substr(scheme.size()));
    } catch (const AuthError& e) {
      return error_response("auth_failed", e.what());
    }
  } else if (route->auth == AuthMode::Required) {
    return error_response("auth_required", "this endpoint needs a bearer token");
  }

  if (!route->request_schema.is_null()) {
    if (request.body.empty()) return error_response("validation_failed", "request body is required");
    try {
      ctx.body = json::parse(request.body);
    } catch (const json::parse_error& e) {
      return error_response("validation_failed", std::string("request body is not JSON: ") + e.what());
    }
    if (auto violation = validate_schema(ctx.body, route->request_schema, schema_root_)) {
      return error_response("validation_failed", "request body " + *violation);
    }
  }

  const auto run = [&] {
    ApiResponse response;
    response.status = route->success_status;
    response.body = route->handler(ctx);
    return response;
  };

  const auto key = request.header("x-idempotency-key");
  if (!key || (request.method != "POST" && request.method != "PUT")) return mapped(run);

  const std::string slot = (ctx.principal ? ctx.principal->user_id : std::string("-")) + "\n" + *key;
  const std::string fingerprint = request.method + " " + request.path + "\n" + request.body;
  std::shared_ptr<std::mutex> gate;
  {
    std::lock_guard lock(idempotency_mutex_);
    auto& entry = in_flight_[slot];
    if (!entry) entry = std::make_shared<std::mutex>();
    gate = entry;
  }
  std::lock_guard serialize(*gate);
  {
    std::lock_guard lock(idempotency_mutex_);
    auto it = remembered_.find(slot);
    if (it != remembered_.end()) {
      in_flight_.erase(slot);
      if (it->second.fingerprint != fingerprint) {
        return error_response("conflict", "idempotency key was already used for a different request");
      }
      auto replay = it->second.response;
      replay.headers["Idempotent-Replayed"] = "true";
      return replay;
    }
  }
  auto response = mapped(run);
  std::lock_guard lock(idempotency_mutex_);
  if (response.status < 500) {
    remembered_[slot] = {fingerprint, response};
    remembered_order_.push_back(slot);
    while (remembered_order_.size() > kRememberedLimit) {
      remembered_.erase(remembered_order_.front());
      remembered_order_.pop_front();
    }
  }
  in_flight_.erase(slot);
  return response;
}

}  // namespace cinnamon::api
