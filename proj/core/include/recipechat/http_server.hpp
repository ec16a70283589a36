#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "recipechat/service.hpp"

namespace recipechat {

/// JSON API over a ChatService:
///
///   POST /sessions                 {"recipe_id": str} | {"recipe": {...}}, optional "config"
///   POST /sessions/{id}/messages   {"text": str, "debug": bool?}  (or ?debug=1)
///   GET  /sessions/{id}
///   GET  /recipes, GET /recipes/{id}
///
/// Errors are {"error": message} with 400/404/409/502. Static files under
/// `/` when a directory is given.
class HttpServer {
 public:
  explicit HttpServer(ChatService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1. Serve with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace recipechat
