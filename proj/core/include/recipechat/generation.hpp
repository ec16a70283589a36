#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recipechat/backend.hpp"
#include "recipechat/corpus.hpp"
#include "recipechat/intent.hpp"
#include "recipechat/tracker.hpp"

namespace recipechat {

enum class KnowledgeMode { kFull, kCutoff, kCenter };

const char* to_string(KnowledgeMode mode) noexcept;
KnowledgeMode knowledge_mode_from_string(const std::string& s);

/// A contiguous, non-empty slice of the recipe steps.
struct KnowledgeSelection {
  KnowledgeMode mode = KnowledgeMode::kFull;
  std::vector<RecipeStep> selected;

  std::vector<int> step_indices() const;
};

/// Full: every step. Cutoff: steps state..n (all steps when state is 0).
/// Center: steps state-1..state+1 clamped to the recipe (1..2 when state is 0).
KnowledgeSelection select_knowledge(const Recipe& recipe, TrackerState state, KnowledgeMode mode);

/// "- step one - step two".
std::string format_knowledge(const KnowledgeSelection& selection);

inline constexpr std::string_view kKnowledgeSeparator = " <|Knowledge|> ";
inline constexpr std::string_view kIntentLead = " [user] wants to: ";
inline constexpr std::string_view kSystemCue = " => [system] ";

/// text == history_part + kKnowledgeSeparator + knowledge_part + intent_part + kSystemCue.
struct GenerationPrompt {
  std::string text;
  std::string history_part;
  std::string knowledge_part;
  std::optional<std::string> intent_part;  // includes its leading space
};

/// Appends " [user] wants to: D." when an intent description is given; the
/// description gets exactly one trailing period.
GenerationPrompt build_prompt(std::string_view history, const KnowledgeSelection& selection,
                              std::optional<std::string_view> intent_description = std::nullopt);

struct RespondConfig {
  KnowledgeMode mode = KnowledgeMode::kFull;
  bool use_intent = false;
  std::size_t char_budget = 0;  // oldest-first history truncation; 0 = unlimited
};

struct RespondResult {
  std::string reply;
  GenerationPrompt prompt;
  KnowledgeSelection selection;
};

/// Descriptions of the given intents joined with "; ", or nullopt if none.
std::optional<std::string> describe_intents(const std::set<int>& intents, const IntentCatalog& catalog);

/// select_knowledge -> build_prompt -> backend completion.
RespondResult respond(const Recipe& recipe, std::span<const Turn> history, TrackerState state,
                      const std::set<int>& intents, const RespondConfig& config,
                      const CompletionBackend& backend, const IntentCatalog& catalog);

}  // namespace recipechat
