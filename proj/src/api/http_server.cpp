#include "cinnamon/api/http_server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace cinnamon::api {

namespace {

ApiRequest to_api(const httplib::Request& req) {
  ApiRequest out;
  out.method = req.method;
  out.path = req.path;
  out.body = req.body;
  for (const auto& [key, value] : req.params) out.query.emplace(key, value);
  for (const auto& [key, value] : req.headers) {
    std::string lower = key;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.headers.emplace(lower, value);
  }
  return out;
}

void write(const ApiResponse& api, httplib::Response& res) {
  res.status = api.status;
  for (const auto& [key, value] : api.headers) res.set_header(key, value);
  if (api.status != 204) res.set_content(api.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(ApiService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    write(service_.handle(to_api(req)), res);
  };
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Delete(".*", handler);
  server_->Patch(".*", handler);
  server_->Options(".*", handler);
  if (const auto& dir = service_.config().static_dir) server_->set_mount_point("/", dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start() {
  if (thread_.joinable()) return port_;
  const auto& config = service_.config();
  if (config.port == 0) {
    port_ = server_->bind_to_any_port(config.host);
    if (port_ < 0) throw std::runtime_error("cannot bind " + config.host);
  } else {
    if (!server_->bind_to_port(config.host, config.port)) {
      throw std::runtime_error("cannot bind " + config.host + ":" + std::to_string(config.port) +
                               " (port in use?)");
    }
    port_ = config.port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
  service_.flush();
}

}  // namespace cinnamon::api
