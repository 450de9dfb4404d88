#pragma once

#include <memory>
#include <thread>

#include "cinnamon/api/service.hpp"

namespace httplib {
class Server;
}

namespace cinnamon::api {

/// Serves an ApiService over HTTP on a background thread.
class HttpServer {
 public:
  explicit HttpServer(ApiService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port from the service config (port 0 picks a free port) and
  /// starts accepting. Returns the bound port; throws when the port is taken.
  int start();

  /// Stops accepting, waits for in-flight requests, flushes the event log.
  void stop();

  int port() const { return port_; }

 private:
  ApiService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace cinnamon::api
