#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recipechat/backend.hpp"
#include "recipechat/corpus.hpp"
#include "recipechat/generation.hpp"
#include "recipechat/intent.hpp"
#include "recipechat/tracker.hpp"

namespace recipechat {

/// Per-session pipeline settings. Overridable when a session is created.
struct SessionConfig {
  TrackerConfig tracker;
  KnowledgeMode mode = KnowledgeMode::kFull;
  bool use_intent = false;
  std::size_t char_budget = 0;

  void validate() const;
  /// Applies {"alpha1", "alpha2", "scorer", "knowledge_mode", "use_intent",
  /// "history_char_budget"} on top of this config and validates the result.
  SessionConfig with_overrides(const nlohmann::json& overrides) const;
};

/// Service-wide configuration, as read from the JSON config file.
struct ServiceConfig {
  SessionConfig session;
  BackendConfig backend = StubBackendConfig{"{first_knowledge_sentence}"};
  /// Backend for intent detection; defaults to `backend`.
  std::optional<BackendConfig> intent_backend;
};

void to_json(nlohmann::json& j, const SessionConfig& c);
void from_json(const nlohmann::json& j, SessionConfig& c);
ServiceConfig service_config_from_json(const nlohmann::json& j);
ServiceConfig load_service_config(const std::filesystem::path& path);

using Clock = std::chrono::system_clock;

struct Session {
  std::string id;
  Recipe recipe;
  std::vector<Turn> history;  // append-only
  TrackerState tracker_state;
  std::optional<std::set<int>> last_intents;
  SessionConfig config;
  Clock::time_point created_at;
  Clock::time_point updated_at;
};

struct IntentView {
  int id = 0;
  std::string name;
  std::string description;
  friend bool operator==(const IntentView&, const IntentView&) = default;
};

struct ChatResponse {
  struct Debug {
    std::string prompt;
    std::vector<double> scores;  // tracker score per step for the reply
    std::string intent_raw;
    friend bool operator==(const Debug&, const Debug&) = default;
  };

  std::string reply;
  std::vector<IntentView> intents;
  int state = 0;
  std::vector<int> selected_steps;
  std::optional<std::string> warning;
  std::optional<Debug> debug;

  friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

void to_json(nlohmann::json& j, const ChatResponse& r);

/// In-memory session store plus the intent -> generate -> track pipeline.
///
/// Safe for concurrent use. Messages to one session are serialized: a second
/// post while one is in flight fails with ConflictError. Backend calls run
/// without holding the store lock.
class ChatService {
 public:
  struct Backends {
    std::shared_ptr<const CompletionBackend> generation;
    std::shared_ptr<const CompletionBackend> intent;  // defaults to generation
    /// Scorer override (tests); otherwise built from each session's tracker config.
    std::shared_ptr<const Scorer> scorer;
  };

  ChatService(RecipeMap recipes, ServiceConfig config, IntentCatalog catalog = IntentCatalog::cooking());
  ChatService(RecipeMap recipes, ServiceConfig config, IntentCatalog catalog, Backends backends);
  ~ChatService();

  ChatService(const ChatService&) = delete;
  ChatService& operator=(const ChatService&) = delete;

  Session create_session(const std::string& recipe_id, const nlohmann::json& overrides = nlohmann::json::object());
  Session create_session(Recipe recipe, const nlohmann::json& overrides = nlohmann::json::object());

  /// Throws NotFoundError, ConflictError, BackendError (history unchanged).
  ChatResponse post_message(const std::string& session_id, const std::string& user_text, bool debug = false);

  Session get_session(const std::string& session_id) const;
  /// JSON view of a session: history, state and config, without backend details.
  nlohmann::json session_view(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;

  void snapshot_store(const std::filesystem::path& path) const;
  /// Replaces every session. On any error the store is left untouched.
  void restore_store(const std::filesystem::path& path);

  const RecipeMap& recipes() const noexcept { return recipes_; }
  const IntentCatalog& catalog() const noexcept { return catalog_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Slot;
  std::shared_ptr<Slot> find_slot(const std::string& id) const;
  std::shared_ptr<Slot> make_slot(Session session) const;
  Session add_session(Recipe recipe, const nlohmann::json& overrides);

  RecipeMap recipes_;
  ServiceConfig config_;
  IntentCatalog catalog_;
  Backends backends_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

inline constexpr int kSnapshotVersion = 1;

nlohmann::json session_to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

}  // namespace recipechat
