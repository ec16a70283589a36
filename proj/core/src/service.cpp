#include "recipechat/service.hpp"

#include <fstream>
#include <mutex>
#include <random>

#include "recipechat/error.hpp"
#include "recipechat/text.hpp"
#include "recipechat/json_io.hpp"

namespace recipechat {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

void SessionConfig::validate() const { tracker.validate(); }

void to_json(json& j, const SessionConfig& c) {
  json tracker = {{"scorer", to_string(c.tracker.scorer)}, {"alpha1", c.tracker.alpha1}, {"alpha2", c.tracker.alpha2}};
  if (c.tracker.embedding) {
    const auto& e = *c.tracker.embedding;
    tracker["embedding"] = {{"url", e.url},
                            {"auth_env", e.auth_env},
                            {"timeout_ms", e.timeout_ms},
                            {"batch_size", e.batch_size},
                            {"max_in_flight", e.max_in_flight}};
  }
  j = json{{"tracker", std::move(tracker)},
           {"knowledge_mode", to_string(c.mode)},
           {"use_intent", c.use_intent},
           {"history_char_budget", c.char_budget}};
}

void from_json(const json& j, SessionConfig& c) {
  c = SessionConfig{};
  if (auto t = j.find("tracker"); t != j.end()) {
    c.tracker.scorer = scorer_kind_from_string(t->value("scorer", std::string("wordmatch")));
    if (c.tracker.scorer == ScorerKind::kEmbedding) {
      c.tracker.alpha1 = 0.5;
      c.tracker.alpha2 = 0.6;
    }
    c.tracker.alpha1 = t->value("alpha1", c.tracker.alpha1);
    c.tracker.alpha2 = t->value("alpha2", c.tracker.alpha2);
    if (auto e = t->find("embedding"); e != t->end()) {
      EmbeddingEndpoint ep;
      ep.url = e->at("url").get<std::string>();
      ep.auth_env = e->value("auth_env", std::string{});
      ep.timeout_ms = e->value("timeout_ms", ep.timeout_ms);
      ep.batch_size = e->value("batch_size", ep.batch_size);
      ep.max_in_flight = e->value("max_in_flight", ep.max_in_flight);
      c.tracker.embedding = std::move(ep);
    }
  }
  c.mode = knowledge_mode_from_string(j.value("knowledge_mode", std::string("full")));
  c.use_intent = j.value("use_intent", false);
  c.char_budget = j.value("history_char_budget", std::size_t{0});
  c.validate();
}

SessionConfig SessionConfig::with_overrides(const json& o) const {
  SessionConfig c = *this;
  if (o.is_null()) return c;
  if (!o.is_object()) throw ValidationError("config overrides must be an object");
  try {
    if (o.contains("scorer")) c.tracker.scorer = scorer_kind_from_string(o.at("scorer").get<std::string>());
    if (o.contains("alpha1")) c.tracker.alpha1 = o.at("alpha1").get<double>();
    if (o.contains("alpha2")) c.tracker.alpha2 = o.at("alpha2").get<double>();
    if (o.contains("knowledge_mode")) c.mode = knowledge_mode_from_string(o.at("knowledge_mode").get<std::string>());
    if (o.contains("use_intent")) c.use_intent = o.at("use_intent").get<bool>();
    if (o.contains("history_char_budget")) c.char_budget = o.at("history_char_budget").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid config override: ") + e.what());
  }
  c.validate();
  return c;
}

ServiceConfig service_config_from_json(const json& j) {
  ServiceConfig c;
  try {
    c.session = j.get<SessionConfig>();
    if (auto b = j.find("backend"); b != j.end()) c.backend = b->get<BackendConfig>();
    if (auto b = j.find("intent_backend"); b != j.end()) c.intent_backend = b->get<BackendConfig>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid service config: ") + e.what());
  }
  validate(c.backend);
  if (c.intent_backend) validate(*c.intent_backend);
  return c;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return service_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void to_json(json& j, const ChatResponse& r) {
  json intents = json::array();
  for (const auto& i : r.intents) intents.push_back({{"id", i.id}, {"name", i.name}, {"description", i.description}});
  j = json{{"reply", r.reply}, {"intents", std::move(intents)}, {"state", r.state}, {"selected_steps", r.selected_steps}};
  if (r.warning) j["warning"] = *r.warning;
  if (r.debug) {
    j["debug"] = {{"prompt", r.debug->prompt}, {"scores", r.debug->scores}, {"intent_raw", r.debug->intent_raw}};
  }
}

// ---------------------------------------------------------------------------
// Session serialization

namespace {

std::int64_t to_millis(Clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

Clock::time_point from_millis(std::int64_t ms) { return Clock::time_point(std::chrono::milliseconds(ms)); }

std::string new_session_id() {
  static thread_local std::mt19937_64 rng(std::random_device{}());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id(16, '0');
  auto bits = rng();
  for (auto& c : id) {
    c = kHex[bits & 0xF];
    bits >>= 4;
  }
  return id;
}

}  // namespace

json session_to_json(const Session& s) {
  json j = {{"id", s.id},
            {"recipe", s.recipe},
            {"history", s.history},
            {"tracker_state", s.tracker_state.current_step},
            {"config", s.config},
            {"created_at", to_millis(s.created_at)},
            {"updated_at", to_millis(s.updated_at)}};
  j["last_intents"] = s.last_intents ? json(*s.last_intents) : json(nullptr);
  return j;
}

Session session_from_json(const json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  if (s.id.empty()) throw ValidationError("session with empty id");
  s.recipe = j.at("recipe").get<Recipe>();
  s.history = j.at("history").get<std::vector<Turn>>();
  s.tracker_state.current_step = j.at("tracker_state").get<int>();
  if (s.tracker_state.current_step < 0 || s.tracker_state.current_step > s.recipe.num_steps()) {
    throw ValidationError("session '" + s.id + "' has tracker state outside the recipe");
  }
  s.config = j.at("config").get<SessionConfig>();
  if (auto it = j.find("last_intents"); it != j.end() && !it->is_null()) s.last_intents = it->get<std::set<int>>();
  s.created_at = from_millis(j.at("created_at").get<std::int64_t>());
  s.updated_at = from_millis(j.at("updated_at").get<std::int64_t>());
  return s;
}

// ---------------------------------------------------------------------------
// ChatService

struct ChatService::Slot {
  std::mutex busy;          // held for the whole of post_message
  mutable std::mutex data;  // guards `session`
  Session session;
  std::shared_ptr<const Tracker> tracker;
};

ChatService::ChatService(RecipeMap recipes, ServiceConfig config, IntentCatalog catalog)
    : ChatService(std::move(recipes), std::move(config), std::move(catalog), Backends{}) {}

ChatService::ChatService(RecipeMap recipes, ServiceConfig config, IntentCatalog catalog, Backends backends)
    : recipes_(std::move(recipes)),
      config_(std::move(config)),
      catalog_(std::move(catalog)),
      backends_(std::move(backends)) {
  config_.session.validate();
  if (!backends_.generation) backends_.generation = make_backend(config_.backend);
  if (!backends_.intent) {
    backends_.intent = config_.intent_backend ? make_backend(*config_.intent_backend) : backends_.generation;
  }
}

ChatService::~ChatService() = default;

std::shared_ptr<ChatService::Slot> ChatService::make_slot(Session session) const {
  auto slot = std::make_shared<Slot>();
  auto scorer = backends_.scorer ? backends_.scorer : make_scorer(session.config.tracker);
  slot->tracker = std::make_shared<Tracker>(session.recipe, session.config.tracker, std::move(scorer));
  slot->session = std::move(session);
  return slot;
}

Session ChatService::add_session(Recipe recipe, const json& overrides) {
  validate(recipe);
  Session s;
  s.id = new_session_id();
  s.recipe = std::move(recipe);
  s.config = config_.session.with_overrides(overrides);
  s.created_at = s.updated_at = Clock::now();
  auto slot = make_slot(s);
  std::unique_lock lock(mutex_);
  while (sessions_.contains(slot->session.id)) slot->session.id = s.id = new_session_id();
  sessions_.emplace(s.id, std::move(slot));
  return s;
}

Session ChatService::create_session(const std::string& recipe_id, const json& overrides) {
  auto it = recipes_.find(recipe_id);
  if (it == recipes_.end()) throw NotFoundError("unknown recipe id '" + recipe_id + "'");
  return add_session(it->second, overrides);
}

Session ChatService::create_session(Recipe recipe, const json& overrides) {
  return add_session(std::move(recipe), overrides);
}

std::shared_ptr<ChatService::Slot> ChatService::find_slot(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

ChatResponse ChatService::post_message(const std::string& session_id, const std::string& user_text, bool debug) {
  auto slot = find_slot(session_id);
  std::unique_lock busy(slot->busy, std::try_to_lock);
  if (!busy.owns_lock()) throw ConflictError("session '" + session_id + "' already has a message in flight");
  if (trim(user_text).empty()) throw ValidationError("message text is empty");

  Session snapshot;
  {
    std::lock_guard lock(slot->data);
    snapshot = slot->session;
  }
  const auto& cfg = snapshot.config;

  ChatResponse response;
  std::set<int> intents;
  std::string intent_raw;
  if (cfg.use_intent) {
    try {
      auto pred = detect_intents(*backends_.intent, catalog_, snapshot.history, user_text, {cfg.char_budget, {}});
      intents = std::move(pred.intents);
      intent_raw = std::move(pred.raw);
    } catch (const ParseError& e) {
      response.warning = std::string("intent detection output unparseable; generated without intent: ") + e.what();
      intent_raw = e.raw();
    }
  }

  auto history = snapshot.history;
  history.push_back(Turn::user(user_text));
  const RespondConfig rc{cfg.mode, cfg.use_intent, cfg.char_budget};
  auto result = respond(snapshot.recipe, history, snapshot.tracker_state, intents, rc, *backends_.generation, catalog_);
  auto step = slot->tracker->advance(snapshot.tracker_state, result.reply);

  response.reply = result.reply;
  for (int id : intents) {
    const auto& e = catalog_.at(id);
    response.intents.push_back({e.id, e.name, e.description});
  }
  response.state = step.state.current_step;
  response.selected_steps = result.selection.step_indices();
  if (debug) {
    ChatResponse::Debug d;
    d.prompt = result.prompt.text;
    for (const auto& s : step.scores) d.scores.push_back(s.score);
    d.intent_raw = intent_raw;
    response.debug = std::move(d);
  }

  {
    std::lock_guard lock(slot->data);
    auto& s = slot->session;
    s.history.push_back(Turn::user(user_text));
    s.history.push_back(Turn::system(result.reply));
    s.tracker_state = step.state;
    s.last_intents = cfg.use_intent ? std::optional(intents) : std::nullopt;
    s.updated_at = Clock::now();
  }
  return response;
}

Session ChatService::get_session(const std::string& session_id) const {
  auto slot = find_slot(session_id);
  std::lock_guard lock(slot->data);
  return slot->session;
}

json ChatService::session_view(const std::string& session_id) const {
  const auto s = get_session(session_id);
  json tracker = {{"scorer", to_string(s.config.tracker.scorer)},
                  {"alpha1", s.config.tracker.alpha1},
                  {"alpha2", s.config.tracker.alpha2}};
  json intents = nullptr;
  if (s.last_intents) intents = *s.last_intents;
  return json{{"id", s.id},
              {"recipe", s.recipe},
              {"history", s.history},
              {"state", s.tracker_state.current_step},
              {"last_intents", std::move(intents)},
              {"config",
               {{"tracker", std::move(tracker)},
                {"knowledge_mode", to_string(s.config.mode)},
                {"use_intent", s.config.use_intent},
                {"history_char_budget", s.config.char_budget}}},
              {"created_at", to_millis(s.created_at)},
              {"updated_at", to_millis(s.updated_at)}};
}

std::vector<std::string> ChatService::session_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, slot] : sessions_) ids.push_back(id);
  return ids;
}

void ChatService::snapshot_store(const std::filesystem::path& path) const {
  json sessions = json::array();
  {
    std::shared_lock lock(mutex_);
    for (const auto& [id, slot] : sessions_) {
      std::lock_guard data(slot->data);
      sessions.push_back(session_to_json(slot->session));
    }
  }
  const json doc = {{"version", kSnapshotVersion}, {"sessions", std::move(sessions)}};
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void ChatService::restore_store(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::map<std::string, std::shared_ptr<Slot>> restored;
  try {
    const auto doc = json::parse(in);
    const int version = doc.at("version").get<int>();
    if (version != kSnapshotVersion) {
      throw ValidationError("snapshot version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kSnapshotVersion) + ")");
    }
    for (const auto& sj : doc.at("sessions")) {
      auto s = session_from_json(sj);
      auto id = s.id;
      if (!restored.emplace(id, make_slot(std::move(s))).second) {
        throw ValidationError("duplicate session id '" + id + "' in snapshot");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  std::unique_lock lock(mutex_);
  sessions_ = std::move(restored);
}

}  // namespace recipechat
