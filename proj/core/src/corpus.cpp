#include "recipechat/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "recipechat/error.hpp"
#include "recipechat/json_io.hpp"
#include "recipechat/text.hpp"

namespace recipechat {

using nlohmann::json;

RecipeStep RecipeStep::from_text(int index, std::string text) {
  RecipeStep step;
  step.index = index;
  step.micro_steps = split_sentences(text);
  step.text = std::move(text);
  return step;
}

Recipe Recipe::from_texts(std::string id, std::string title, const std::vector<std::string>& steps) {
  Recipe r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.steps.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    r.steps.push_back(RecipeStep::from_text(static_cast<int>(i + 1), steps[i]));
  }
  validate(r);
  return r;
}

const char* to_string(Role role) noexcept { return role == Role::kUser ? "user" : "system"; }

Role role_from_string(const std::string& s) {
  if (s == "user") return Role::kUser;
  if (s == "system") return Role::kSystem;
  throw ParseError("unknown role '" + s + "'");
}

const Recipe& Corpus::recipe_for(const Conversation& c) const {
  auto it = recipes.find(c.recipe_id);
  if (it == recipes.end()) throw NotFoundError("unknown recipe id '" + c.recipe_id + "'");
  return it->second;
}

void validate(const Recipe& recipe) {
  if (recipe.steps.empty()) throw ValidationError("recipe '" + recipe.id + "' has no steps");
  for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
    const auto& s = recipe.steps[i];
    if (s.index != static_cast<int>(i + 1)) {
      throw ValidationError("recipe '" + recipe.id + "' step indices are not 1..n");
    }
    if (s.micro_steps.empty()) {
      throw ValidationError("recipe '" + recipe.id + "' step " + std::to_string(s.index) + " is empty");
    }
  }
}

void validate(const Conversation& conversation, const Recipe& recipe) {
  for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
    const auto& t = conversation.turns[i];
    const std::string where = "conversation '" + conversation.id + "' turn " + std::to_string(i);
    if (trim(t.text).empty()) throw ValidationError(where + ": empty text");
    if (t.gold_intents && t.role != Role::kUser) {
      throw ValidationError(where + ": gold_intents on a system turn");
    }
    if (t.gold_state) {
      if (t.role != Role::kSystem) throw ValidationError(where + ": gold_state on a user turn");
      if (*t.gold_state < 1 || *t.gold_state > recipe.num_steps()) {
        throw ValidationError(where + ": gold_state " + std::to_string(*t.gold_state) +
                              " outside 1.." + std::to_string(recipe.num_steps()));
      }
    }
  }
}

void to_json(json& j, const Recipe& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(s.text);
  j = json{{"id", r.id}, {"title", r.title}, {"steps", std::move(steps)}};
}

void from_json(const json& j, Recipe& r) {
  std::vector<std::string> steps;
  for (const auto& s : j.at("steps")) steps.push_back(s.get<std::string>());
  r = Recipe::from_texts(j.at("id").get<std::string>(), j.value("title", std::string{}), steps);
}

void to_json(json& j, const Turn& t) {
  j = json{{"role", to_string(t.role)}, {"text", t.text}};
  if (t.gold_intents) j["gold_intents"] = *t.gold_intents;
  if (t.gold_state) j["gold_state"] = *t.gold_state;
}

void from_json(const json& j, Turn& t) {
  t.role = role_from_string(j.at("role").get<std::string>());
  t.text = j.at("text").get<std::string>();
  if (t.text.empty()) throw ValidationError("turn text must be non-empty");
  t.gold_intents.reset();
  t.gold_state.reset();
  if (auto it = j.find("gold_intents"); it != j.end() && !it->is_null()) {
    t.gold_intents = it->get<std::set<int>>();
  }
  if (auto it = j.find("gold_state"); it != j.end() && !it->is_null()) {
    t.gold_state = it->get<int>();
  }
}

void to_json(json& j, const Conversation& c) {
  j = json{{"id", c.id}, {"recipe_id", c.recipe_id}, {"turns", c.turns}};
}

void from_json(const json& j, Conversation& c) {
  c.id = j.at("id").get<std::string>();
  c.recipe_id = j.at("recipe_id").get<std::string>();
  c.turns = j.at("turns").get<std::vector<Turn>>();
}

namespace {

template <typename Fn>
void for_each_jsonl(std::istream& in, const char* what, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(std::string(what) + " line " + std::to_string(lineno) + ": " + e.what(), line);
    } catch (const Error& e) {
      throw ParseError(std::string(what) + " line " + std::to_string(lineno) + ": " + e.what(), line);
    }
  }
}

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  return in;
}

}  // namespace

RecipeMap read_recipes(std::istream& in) {
  RecipeMap recipes;
  for_each_jsonl(in, "recipes", [&](const json& j) {
    auto r = j.get<Recipe>();
    if (recipes.contains(r.id)) throw ValidationError("duplicate recipe id '" + r.id + "'");
    auto id = r.id;
    recipes.emplace(std::move(id), std::move(r));
  });
  return recipes;
}

std::vector<Conversation> read_conversations(std::istream& in) {
  std::vector<Conversation> out;
  for_each_jsonl(in, "conversations", [&](const json& j) { out.push_back(j.get<Conversation>()); });
  return out;
}

Corpus make_corpus(RecipeMap recipes, std::vector<Conversation> conversations) {
  std::set<std::string> ids;
  for (const auto& c : conversations) {
    if (!ids.insert(c.id).second) throw ValidationError("duplicate conversation id '" + c.id + "'");
    auto it = recipes.find(c.recipe_id);
    if (it == recipes.end()) {
      throw NotFoundError("conversation '" + c.id + "' references unknown recipe id '" +
                          c.recipe_id + "'");
    }
    validate(c, it->second);
  }
  return Corpus{std::move(recipes), std::move(conversations)};
}

Corpus load_corpus(const std::filesystem::path& recipes_path,
                   const std::filesystem::path& conversations_path) {
  auto rin = open_or_throw(recipes_path);
  auto recipes = read_recipes(rin);
  auto cin = open_or_throw(conversations_path);
  auto conversations = read_conversations(cin);
  return make_corpus(std::move(recipes), std::move(conversations));
}

Corpus merge(std::vector<Corpus> parts) {
  RecipeMap recipes;
  std::vector<Conversation> conversations;
  for (auto& p : parts) {
    for (auto& [id, r] : p.recipes) {
      auto [it, inserted] = recipes.emplace(id, r);
      if (!inserted && json(it->second) != json(r)) {
        throw ValidationError("recipe id '" + id + "' has conflicting definitions across corpora");
      }
    }
    for (auto& c : p.conversations) conversations.push_back(std::move(c));
  }
  return make_corpus(std::move(recipes), std::move(conversations));
}

void write_recipes(std::ostream& out, const RecipeMap& recipes) {
  for (const auto& [id, r] : recipes) out << json(r).dump() << '\n';
}

void write_conversations(std::ostream& out, const std::vector<Conversation>& conversations) {
  for (const auto& c : conversations) out << json(c).dump() << '\n';
}

CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.recipes.empty()) throw Error("cannot compute statistics of an empty corpus");
  CorpusStats st;
  st.n_dialogues = corpus.conversations.size();
  st.n_recipes = corpus.recipes.size();

  std::size_t turns = 0;
  for (const auto& c : corpus.conversations) turns += c.turns.size();
  if (st.n_dialogues) st.utterances_per_dialogue = double(turns) / double(st.n_dialogues);

  std::size_t steps = 0, tokens = 0, sentences = 0;
  for (const auto& [id, r] : corpus.recipes) {
    steps += r.steps.size();
    for (const auto& s : r.steps) {
      tokens += tokenize_words(s.text).size();
      sentences += s.micro_steps.size();
    }
  }
  const double nr = double(st.n_recipes);
  st.steps_per_recipe = double(steps) / nr;
  st.tokens_per_recipe = double(tokens) / nr;
  st.sentences_per_step = double(sentences) / double(steps);
  st.tokens_per_step = double(tokens) / double(steps);
  return st;
}

StateChangeHistogram state_change_histogram(const std::vector<Conversation>& conversations) {
  StateChangeHistogram bins;
  for (const auto& c : conversations) {
    const Turn* prev = nullptr;
    for (const auto& t : c.turns) {
      if (t.role != Role::kSystem) continue;
      if (prev && prev->gold_state && t.gold_state) ++bins[*t.gold_state - *prev->gold_state];
      prev = &t;
    }
  }
  return bins;
}

}  // namespace recipechat
