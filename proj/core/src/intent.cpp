#include "recipechat/intent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include "recipechat/error.hpp"
#include "recipechat/history.hpp"
#include "recipechat/text.hpp"

namespace recipechat {

using nlohmann::json;

namespace {

// Index order and wording are fixed: prompts and parsed predictions depend on them.
const std::vector<IntentEntry>& cooking_entries() {
  static const std::vector<IntentEntry> entries = {
      {0, "negate", "negate"},
      {1, "confirm", "confirm the current stage"},
      {2, "req_repeat", "ask to repeat the last information"},
      {3, "req_duration", "ask about cooking duration"},
      {4, "req_confirmation", "ask for verification"},
      {5, "thank", "thank"},
      {6, "req_explanation", "ask to explain the reason or explain in more detail"},
      {7, "req_temperature", "ask about the cooking temperature"},
      {8, "affirm", "affirm"},
      {9, "greeting", "greeting"},
      {10, "req_description", "ask for the description"},
      {11, "req_amount", "ask about the amount information"},
      {12, "goodbye", "goodbye"},
      {13, "req_is_recipe_finished", "ask whether the recipe is finished"},
      {14, "req_instruction", "ask for instructions"},
      {15, "req_ingredient", "ask about the ingredients"},
      {16, "req_tool", "ask about the cooking tool"},
      {17, "req_substitute", "ask for tool or ingredient substitutions"},
      {18, "other", "other intent"},
  };
  return entries;
}

std::vector<int> identity(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

IntentCatalog::IntentCatalog(std::vector<IntentEntry> entries)
    : entries_(std::move(entries)), displayed_(identity(entries_.size())), canonical_(displayed_) {
  if (entries_.empty()) throw ValidationError("intent catalog is empty");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.id != static_cast<int>(i)) throw ValidationError("intent ids must be 0..n-1 in order");
    if (e.name.empty() || e.description.empty()) throw ValidationError("intent entry with empty name or description");
    if (!names.insert(e.name).second) throw ValidationError("duplicate intent name '" + e.name + "'");
  }
}

const IntentCatalog& IntentCatalog::cooking() {
  static const IntentCatalog catalog(cooking_entries());
  return catalog;
}

IntentCatalog IntentCatalog::from_json(const json& j) {
  std::vector<IntentEntry> entries;
  try {
    for (const auto& e : j) {
      entries.push_back({e.at("id").get<int>(), e.at("name").get<std::string>(), e.at("description").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed intent catalog: ") + e.what());
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return IntentCatalog(std::move(entries));
}

IntentCatalog IntentCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json IntentCatalog::to_json() const {
  json arr = json::array();
  for (const auto& e : entries_) arr.push_back({{"id", e.id}, {"name", e.name}, {"description", e.description}});
  return arr;
}

IntentCatalog IntentCatalog::with_permutation(std::vector<int> displayed) const {
  if (displayed.size() != entries_.size()) throw ValidationError("permutation size does not match catalog");
  std::vector<int> inverse(displayed.size(), -1);
  for (std::size_t c = 0; c < displayed.size(); ++c) {
    const int d = displayed[c];
    if (d < 0 || static_cast<std::size_t>(d) >= displayed.size() || inverse[static_cast<std::size_t>(d)] != -1) {
      throw ValidationError("intent permutation is not a bijection");
    }
    inverse[static_cast<std::size_t>(d)] = static_cast<int>(c);
  }
  IntentCatalog copy = *this;
  copy.displayed_ = std::move(displayed);
  copy.canonical_ = std::move(inverse);
  return copy;
}

std::vector<int> IntentCatalog::random_permutation(std::size_t n, std::uint64_t seed) {
  auto v = identity(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
  return v;
}

const IntentEntry& IntentCatalog::at(int canonical_id) const {
  if (canonical_id < 0 || static_cast<std::size_t>(canonical_id) >= entries_.size()) {
    throw NotFoundError("unknown intent id " + std::to_string(canonical_id));
  }
  return entries_[static_cast<std::size_t>(canonical_id)];
}

std::optional<int> IntentCatalog::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

std::string build_intent_prompt(const IntentCatalog& catalog, std::span<const Turn> history,
                                std::string_view user_utterance, std::size_t char_budget) {
  std::string out;
  for (std::size_t d = 0; d < catalog.size(); ++d) {
    if (d) out.push_back(' ');
    out += std::to_string(d);
    out.push_back(':');
    out += catalog.at(catalog.canonical_id(static_cast<int>(d))).description;
  }
  std::vector<Turn> turns(history.begin(), history.end());
  turns.push_back(Turn::user(std::string(user_utterance)));
  out.push_back(' ');
  out += format_history(truncate_history(turns, char_budget));
  return out;
}

IntentPrediction parse_prediction(std::string_view raw, const IntentCatalog& catalog) {
  const auto marker = raw.find(kIntentMarker);
  if (marker == std::string_view::npos) throw ParseError("missing [intents] marker", std::string(raw));
  auto rest = raw.substr(marker + kIntentMarker.size());
  if (auto eol = rest.find('\n'); eol != std::string_view::npos) rest = rest.substr(0, eol);

  IntentPrediction pred;
  pred.raw = std::string(raw);
  std::size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
    std::size_t j = i;
    while (j < rest.size() && !std::isspace(static_cast<unsigned char>(rest[j]))) ++j;
    if (j == i) break;
    const auto tok = rest.substr(i, j - i);
    int value = -1;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ParseError("non-integer intent index '" + std::string(tok) + "'", pred.raw);
    }
    if (value < 0 || static_cast<std::size_t>(value) >= catalog.size()) {
      throw ParseError("intent index " + std::to_string(value) + " out of range", pred.raw);
    }
    pred.intents.insert(catalog.canonical_id(value));
    i = j;
  }
  if (pred.intents.empty()) throw ParseError("no intent indices after marker", pred.raw);
  return pred;
}

std::string format_prediction(const std::set<int>& canonical_ids, const IntentCatalog& catalog) {
  std::vector<int> shown;
  for (int id : canonical_ids) shown.push_back(catalog.displayed_index(id));
  std::sort(shown.begin(), shown.end());
  std::string out(kIntentMarker);
  for (int d : shown) out += " " + std::to_string(d);
  return out;
}

IntentPrediction detect_intents(const CompletionBackend& backend, const IntentCatalog& catalog,
                                std::span<const Turn> history, std::string_view utterance,
                                const IntentOptions& options) {
  std::string prompt;
  for (const auto& demo : options.demonstrations) {
    prompt += demo;
    prompt.push_back('\n');
  }
  prompt += build_intent_prompt(catalog, history, utterance, options.char_budget);
  return parse_prediction(backend.complete(prompt, {}), catalog);
}

double micro_f1(std::span<const std::set<int>> predictions, std::span<const std::set<int>> golds) {
  if (predictions.size() != golds.size()) {
    throw ValidationError("micro_f1: " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(golds.size()) + " gold sets");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    for (int p : predictions[i]) (golds[i].contains(p) ? tp : fp)++;
    for (int g : golds[i]) {
      if (!predictions[i].contains(g)) ++fn;
    }
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * double(tp) / double(2 * tp + fp + fn);
}

}  // namespace recipechat
