#include "recipechat/generation.hpp"

#include <algorithm>

#include "recipechat/error.hpp"
#include "recipechat/history.hpp"

namespace recipechat {

const char* to_string(KnowledgeMode mode) noexcept {
  switch (mode) {
    case KnowledgeMode::kFull:
      return "full";
    case KnowledgeMode::kCutoff:
      return "cutoff";
    case KnowledgeMode::kCenter:
      return "center";
  }
  return "full";
}

KnowledgeMode knowledge_mode_from_string(const std::string& s) {
  if (s == "full") return KnowledgeMode::kFull;
  if (s == "cutoff") return KnowledgeMode::kCutoff;
  if (s == "center") return KnowledgeMode::kCenter;
  throw ValidationError("unknown knowledge mode '" + s + "' (expected full, cutoff or center)");
}

std::vector<int> KnowledgeSelection::step_indices() const {
  std::vector<int> out;
  for (const auto& s : selected) out.push_back(s.index);
  return out;
}

KnowledgeSelection select_knowledge(const Recipe& recipe, TrackerState state, KnowledgeMode mode) {
  const int n = recipe.num_steps();
  const int t = state.current_step;
  if (t < 0 || t > n) {
    throw ValidationError("state " + std::to_string(t) + " outside 0.." + std::to_string(n));
  }
  int first = 1, last = n;
  switch (mode) {
    case KnowledgeMode::kFull:
      break;
    case KnowledgeMode::kCutoff:
      first = std::max(t, 1);
      break;
    case KnowledgeMode::kCenter:
      if (t == 0) {
        last = std::min(2, n);
      } else {
        first = std::max(1, t - 1);
        last = std::min(n, t + 1);
      }
      break;
  }
  KnowledgeSelection sel{mode, {}};
  for (int i = first; i <= last; ++i) sel.selected.push_back(recipe.step(i));
  return sel;
}

std::string format_knowledge(const KnowledgeSelection& selection) {
  std::string out;
  for (const auto& s : selection.selected) {
    if (!out.empty()) out.push_back(' ');
    out += "- ";
    out += s.text;
  }
  return out;
}

GenerationPrompt build_prompt(std::string_view history, const KnowledgeSelection& selection,
                              std::optional<std::string_view> intent_description) {
  if (selection.selected.empty()) throw ValidationError("knowledge selection is empty");
  GenerationPrompt p;
  p.history_part = std::string(history);
  p.knowledge_part = format_knowledge(selection);
  if (intent_description) {
    std::string d(*intent_description);
    while (!d.empty() && (d.back() == '.' || d.back() == ' ')) d.pop_back();
    p.intent_part = std::string(kIntentLead) + d + ".";
  }
  p.text = p.history_part;
  p.text += kKnowledgeSeparator;
  p.text += p.knowledge_part;
  if (p.intent_part) p.text += *p.intent_part;
  p.text += kSystemCue;
  return p;
}

std::optional<std::string> describe_intents(const std::set<int>& intents, const IntentCatalog& catalog) {
  if (intents.empty()) return std::nullopt;
  std::string out;
  for (int id : intents) {
    std::string d = catalog.at(id).description;
    while (!d.empty() && d.back() == '.') d.pop_back();
    if (!out.empty()) out += "; ";
    out += d;
  }
  return out;
}

RespondResult respond(const Recipe& recipe, std::span<const Turn> history, TrackerState state,
                      const std::set<int>& intents, const RespondConfig& config,
                      const CompletionBackend& backend, const IntentCatalog& catalog) {
  RespondResult result;
  result.selection = select_knowledge(recipe, state, config.mode);
  const auto rendered = format_history(truncate_history(history, config.char_budget));
  std::optional<std::string> description;
  if (config.use_intent) description = describe_intents(intents, catalog);
  result.prompt = build_prompt(rendered, result.selection,
                               description ? std::optional<std::string_view>(*description) : std::nullopt);

  CompletionContext ctx;
  ctx.first_knowledge_sentence = result.selection.selected.front().micro_steps.front();
  ctx.state = state.current_step;
  for (int id : intents) ctx.intent_names.push_back(catalog.at(id).name);
  result.reply = backend.complete(result.prompt.text, ctx);
  return result;
}

}  // namespace recipechat
