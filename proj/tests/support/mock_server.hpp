#pragma once

#include <httplib.h>

#include <string>
#include <thread>

namespace recipechat::testing {

/// httplib server on an ephemeral localhost port, running on its own thread.
/// Register handlers on `server` before calling start().
class MockServer {
 public:
  MockServer() = default;
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  void start();
  void stop();
  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  httplib::Server server;

 private:
  int port_ = -1;
  std::thread thread_;
};

}  // namespace recipechat::testing
