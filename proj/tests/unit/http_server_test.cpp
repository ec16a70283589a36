#include <gtest/gtest.h>

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "fixtures.hpp"
#include "recipechat/http_server.hpp"

namespace recipechat {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class HttpApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static_dir_ = fs::temp_directory_path() / ("recipechat-static-" + std::to_string(::getpid()));
    fs::create_directories(static_dir_);
    std::ofstream(static_dir_ / "index.html") << "<html>chat</html>";

    RecipeMap recipes;
    recipes.emplace("hash-browns", testing::hash_browns());
    ServiceConfig cfg;
    cfg.backend = StubBackendConfig{"{first_knowledge_sentence}"};
    cfg.intent_backend = StubBackendConfig{"[intents] 14"};
    service_ = std::make_unique<ChatService>(std::move(recipes), cfg);
    server_ = std::make_unique<HttpServer>(*service_, static_dir_);
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_->stop();
    thread_.join();
    fs::remove_all(static_dir_);
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  std::string new_session(const json& config = json::object()) {
    auto res = post("/sessions", {{"recipe_id", "hash-browns"}, {"config", config}});
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body).at("id").get<std::string>();
  }

  fs::path static_dir_;
  std::unique_ptr<ChatService> service_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = -1;
};

TEST_F(HttpApiTest, Recipes) {
  auto res = client_->Get("/recipes");
  ASSERT_EQ(res->status, 200);
  const auto list = json::parse(res->body);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].at("id"), "hash-browns");
  EXPECT_EQ(list[0].at("num_steps"), 6);

  res = client_->Get("/recipes/hash-browns");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("steps").size(), 6u);
  EXPECT_EQ(client_->Get("/recipes/nope")->status, 404);
}

TEST_F(HttpApiTest, ChatFlow) {
  const auto id = new_session({{"use_intent", true}, {"knowledge_mode", "center"}});
  auto res = post("/sessions/" + id + "/messages", {{"text", "What first?"}});
  ASSERT_EQ(res->status, 200) << res->body;
  auto r = json::parse(res->body);
  EXPECT_EQ(r.at("reply"), "Peel the potatoes.");
  EXPECT_EQ(r.at("state"), 1);
  EXPECT_EQ(r.at("selected_steps"), json({1, 2}));
  EXPECT_EQ(r.at("intents")[0].at("description"), "ask for instructions");
  EXPECT_FALSE(r.contains("debug"));

  res = post("/sessions/" + id + "/messages?debug=1", {{"text", "Next?"}});
  r = json::parse(res->body);
  ASSERT_TRUE(r.contains("debug"));
  EXPECT_EQ(r.at("debug").at("scores").size(), 6u);
  EXPECT_EQ(r.at("selected_steps"), json({1, 2}));

  res = post("/sessions/" + id + "/messages", {{"text", "And?"}, {"debug", true}});
  EXPECT_TRUE(json::parse(res->body).contains("debug"));

  res = client_->Get("/sessions/" + id);
  ASSERT_EQ(res->status, 200);
  const auto view = json::parse(res->body);
  EXPECT_EQ(view.at("history").size(), 6u);
  EXPECT_EQ(view.at("state"), 1);
}

TEST_F(HttpApiTest, InlineRecipe) {
  auto res = post("/sessions", {{"recipe", {{"id", "toast"}, {"title", "Toast"}, {"steps", {"Toast bread.", "Eat."}}}}});
  ASSERT_EQ(res->status, 201) << res->body;
  EXPECT_EQ(json::parse(res->body).at("recipe").at("id"), "toast");
}

TEST_F(HttpApiTest, ErrorStatuses) {
  EXPECT_EQ(post("/sessions", {{"recipe_id", "nope"}})->status, 404);
  EXPECT_EQ(post("/sessions", {{"recipe_id", "hash-browns"}, {"config", {{"alpha1", 0.9}}}})->status, 400);
  EXPECT_EQ(client_->Post("/sessions", "{broken", "application/json")->status, 400);
  EXPECT_EQ(post("/sessions", json::object())->status, 400);
  EXPECT_EQ(post("/sessions/nope/messages", {{"text", "hi"}})->status, 404);
  EXPECT_EQ(client_->Get("/sessions/nope")->status, 404);
  const auto id = new_session();
  EXPECT_EQ(post("/sessions/" + id + "/messages", {{"txt", "hi"}})->status, 400);
  auto res = post("/sessions/" + id + "/messages", {{"text", ""}});
  EXPECT_EQ(res->status, 400);
  EXPECT_TRUE(json::parse(res->body).contains("error"));
}

TEST_F(HttpApiTest, StaticFiles) {
  auto res = client_->Get("/index.html");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>chat</html>");
}

TEST(HttpApi, BackendFailureIs502) {
  RecipeMap recipes;
  recipes.emplace("hash-browns", testing::hash_browns());
  ServiceConfig cfg;
  HttpBackendConfig http;
  http.base_url = "http://127.0.0.1:1";
  http.max_retries = 0;
  cfg.backend = http;
  ChatService service(std::move(recipes), cfg);
  HttpServer server(service);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/sessions", R"({"recipe_id":"hash-browns"})", "application/json");
  const auto id = json::parse(res->body).at("id").get<std::string>();
  res = client.Post("/sessions/" + id + "/messages", R"({"text":"hi"})", "application/json");
  EXPECT_EQ(res->status, 502);
  EXPECT_TRUE(service.get_session(id).history.empty());
  server.stop();
  t.join();
}

}  // namespace
}  // namespace recipechat
