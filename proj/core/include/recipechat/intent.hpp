#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "recipechat/backend.hpp"
#include "recipechat/corpus.hpp"

namespace recipechat {

struct IntentEntry {
  int id = 0;
  std::string name;
  std::string description;
};

/// Intents with natural-language descriptions, plus an optional permutation
/// of the indices shown to the model.
///
/// Canonical ids are stable (0..n-1). A permutation maps canonical id to the
/// displayed index; prompts list descriptions by displayed index and model
/// outputs are mapped back through the inverse.
class IntentCatalog {
 public:
  explicit IntentCatalog(std::vector<IntentEntry> entries);

  /// The 19 cooking-dialogue intents, identity permutation.
  static const IntentCatalog& cooking();
  static IntentCatalog from_json(const nlohmann::json& j);
  static IntentCatalog load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  /// Copy with `displayed[canonical]` as the index permutation. Must be a bijection.
  IntentCatalog with_permutation(std::vector<int> displayed) const;
  /// Deterministic Fisher-Yates shuffle of 0..n-1.
  static std::vector<int> random_permutation(std::size_t n, std::uint64_t seed);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<IntentEntry>& entries() const noexcept { return entries_; }
  const IntentEntry& at(int canonical_id) const;
  std::optional<int> find(std::string_view name) const;

  int displayed_index(int canonical_id) const { return displayed_.at(static_cast<std::size_t>(canonical_id)); }
  int canonical_id(int displayed_index) const { return canonical_.at(static_cast<std::size_t>(displayed_index)); }

 private:
  std::vector<IntentEntry> entries_;
  std::vector<int> displayed_;
  std::vector<int> canonical_;
};

struct IntentPrediction {
  std::set<int> intents;  // canonical ids, never empty
  std::string raw;
};

inline constexpr std::string_view kIntentMarker = "[intents]";

/// "0:desc 1:desc ... [user] ... [system] ... [user] {utterance}".
/// `char_budget` truncates the oldest history turns (0 = unlimited).
std::string build_intent_prompt(const IntentCatalog& catalog, std::span<const Turn> history,
                                std::string_view user_utterance, std::size_t char_budget = 0);

/// Parses "[intents] 6 14" (displayed indices) into canonical ids.
/// Throws ParseError carrying the raw output.
IntentPrediction parse_prediction(std::string_view raw, const IntentCatalog& catalog);

/// Inverse of parse_prediction: "[intents] a b" in displayed indices.
std::string format_prediction(const std::set<int>& canonical_ids, const IntentCatalog& catalog);

struct IntentOptions {
  std::size_t char_budget = 0;
  /// Worked examples placed before the prompt, one per line.
  std::vector<std::string> demonstrations;
};

IntentPrediction detect_intents(const CompletionBackend& backend, const IntentCatalog& catalog,
                                std::span<const Turn> history, std::string_view utterance,
                                const IntentOptions& options = {});

/// Micro-averaged F1 over pooled TP/FP/FN. 1.0 when both sides are empty.
double micro_f1(std::span<const std::set<int>> predictions, std::span<const std::set<int>> golds);

}  // namespace recipechat
