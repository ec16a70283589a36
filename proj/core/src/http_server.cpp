#include "recipechat/http_server.hpp"

#include <httplib.h>

#include "recipechat/error.hpp"
#include "recipechat/json_io.hpp"

namespace recipechat {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes"; }

// Maps library exceptions onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    send_error(res, 404, e.what());
  } catch (const ConflictError& e) {
    send_error(res, 409, e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, e.what());
  } catch (const ParseError& e) {
    send_error(res, 400, e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, std::string("bad request: ") + e.what());
  } catch (const BackendError& e) {
    send_error(res, 502, e.what());
  } catch (const ScorerUnavailableError& e) {
    send_error(res, 502, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(ChatService& s) : service(s) {}
  ChatService& service;
  httplib::Server server;
};

HttpServer::HttpServer(ChatService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;

  srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = req.body.empty() ? json::object() : json::parse(req.body);
      const auto overrides = body.value("config", json::object());
      Session s;
      if (auto r = body.find("recipe"); r != body.end()) {
        s = svc.create_session(r->get<Recipe>(), overrides);
      } else {
        s = svc.create_session(body.at("recipe_id").get<std::string>(), overrides);
      }
      send_json(res, 201, svc.session_view(s.id));
    });
  });

  srv.Post(R"(/sessions/([^/]+)/messages)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = json::parse(req.body);
      bool debug = body.value("debug", false);
      if (req.has_param("debug")) debug = debug || truthy(req.get_param_value("debug"));
      const auto reply = svc.post_message(req.matches[1], body.at("text").get<std::string>(), debug);
      send_json(res, 200, reply);
    });
  });

  srv.Get(R"(/sessions/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.session_view(req.matches[1])); });
  });

  srv.Get("/recipes", [&svc](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      json list = json::array();
      for (const auto& [id, r] : svc.recipes()) {
        list.push_back({{"id", id}, {"title", r.title}, {"num_steps", r.num_steps()}});
      }
      send_json(res, 200, list);
    });
  });

  srv.Get(R"(/recipes/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      auto it = svc.recipes().find(id);
      if (it == svc.recipes().end()) throw NotFoundError("unknown recipe id '" + id + "'");
      send_json(res, 200, it->second);
    });
  });

  if (static_dir) srv.set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace recipechat
