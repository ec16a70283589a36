#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "recipechat/error.hpp"
#include "recipechat/generation.hpp"
#include "recipechat/history.hpp"

namespace recipechat {
namespace {

Recipe five_steps() { return Recipe::from_texts("r", "R", {"A one.", "B two.", "C three.", "D four.", "E five."}); }

std::vector<int> steps(const Recipe& r, int state, KnowledgeMode mode) {
  return select_knowledge(r, {state}, mode).step_indices();
}

TEST(SelectKnowledge, Examples) {
  const auto four = Recipe::from_texts("r", "R", {"A.", "B.", "C.", "D."});
  EXPECT_EQ(steps(four, 2, KnowledgeMode::kCutoff), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(steps(five_steps(), 3, KnowledgeMode::kCenter), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(steps(five_steps(), 1, KnowledgeMode::kCenter), (std::vector<int>{1, 2}));
  EXPECT_EQ(steps(five_steps(), 5, KnowledgeMode::kCenter), (std::vector<int>{4, 5}));
}

TEST(SelectKnowledge, SentinelState) {
  EXPECT_EQ(steps(five_steps(), 0, KnowledgeMode::kCutoff), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(steps(five_steps(), 0, KnowledgeMode::kCenter), (std::vector<int>{1, 2}));
  const auto one = Recipe::from_texts("r", "R", {"Serve."});
  EXPECT_EQ(steps(one, 0, KnowledgeMode::kCenter), (std::vector<int>{1}));
}

TEST(SelectKnowledge, StateOutOfRange) {
  EXPECT_THROW(select_knowledge(five_steps(), {6}, KnowledgeMode::kFull), ValidationError);
  EXPECT_THROW(select_knowledge(five_steps(), {-1}, KnowledgeMode::kFull), ValidationError);
}

TEST(SelectKnowledge, Properties) {
  for (int n = 1; n <= 7; ++n) {
    std::vector<std::string> texts;
    for (int i = 1; i <= n; ++i) texts.push_back("Step " + std::to_string(i) + ".");
    const auto r = Recipe::from_texts("r", "R", texts);
    for (int s = 0; s <= n; ++s) {
      const auto full = steps(r, s, KnowledgeMode::kFull);
      const auto cut = steps(r, s, KnowledgeMode::kCutoff);
      const auto ctr = steps(r, s, KnowledgeMode::kCenter);
      EXPECT_EQ(int(full.size()), n);
      EXPECT_EQ(int(cut.size()), n - std::max(s, 1) + 1);
      EXPECT_GE(ctr.size(), 1u);
      EXPECT_LE(ctr.size(), 3u);
      for (const auto& sel : {cut, ctr}) {
        for (std::size_t i = 1; i < sel.size(); ++i) EXPECT_EQ(sel[i], sel[i - 1] + 1);
      }
      if (s >= 1) {
        EXPECT_NE(std::find(cut.begin(), cut.end(), s), cut.end());
        EXPECT_NE(std::find(ctr.begin(), ctr.end(), s), ctr.end());
      }
    }
  }
}

TEST(FormatHistory, Examples) {
  const std::vector<Turn> one{Turn::system("hi")};
  EXPECT_EQ(format_history(one), "[system] hi");
  EXPECT_EQ(format_history({}), "");
  const std::vector<Turn> two{Turn::user("a"), Turn::user("b")};
  EXPECT_EQ(format_history(two), "[user] a [user] b");
}

TEST(FormatKnowledge, Examples) {
  const auto one = Recipe::from_texts("r", "R", {"Serve."});
  EXPECT_EQ(format_knowledge(select_knowledge(one, {0}, KnowledgeMode::kFull)), "- Serve.");
  const auto two = Recipe::from_texts("r", "R", {"A.", "B."});
  EXPECT_EQ(format_knowledge(select_knowledge(two, {0}, KnowledgeMode::kFull)), "- A. - B.");
  const auto hb = format_knowledge(select_knowledge(testing::hash_browns(), {0}, KnowledgeMode::kFull));
  EXPECT_TRUE(hb.starts_with("- Peel the potatoes."));
}

TEST(BuildPrompt, Minimal) {
  const auto one = Recipe::from_texts("r", "R", {"Serve."});
  const auto sel = select_knowledge(one, {0}, KnowledgeMode::kFull);
  const auto p = build_prompt("[user] hi", sel);
  EXPECT_EQ(p.text, "[user] hi <|Knowledge|> - Serve. => [system] ");
  EXPECT_FALSE(p.intent_part);
  EXPECT_EQ(build_prompt("", sel).text, " <|Knowledge|> - Serve. => [system] ");
}

TEST(BuildPrompt, IntentClauseGetsExactlyOnePeriod) {
  const auto one = Recipe::from_texts("r", "R", {"Serve."});
  const auto sel = select_knowledge(one, {0}, KnowledgeMode::kFull);
  for (const char* d : {"ask about the cooking tool", "ask about the cooking tool.", "ask about the cooking tool.."}) {
    const auto p = build_prompt("[user] hi", sel, std::string_view(d));
    EXPECT_NE(p.text.find("wants to: ask about the cooking tool. => [system]"), std::string::npos) << p.text;
    EXPECT_EQ(p.text, p.history_part + std::string(kKnowledgeSeparator) + p.knowledge_part + *p.intent_part +
                          std::string(kSystemCue));
  }
}

TEST(BuildPrompt, ReproducesReferenceExample) {
  const auto history = testing::hash_browns_history();
  const auto sel = select_knowledge(testing::hash_browns(), {0}, KnowledgeMode::kFull);
  const auto p = build_prompt(format_history(history), sel, std::string_view("ask about the cooking tool"));
  EXPECT_EQ(p.text, testing::read_file(testing::golden_path("generation_prompt.txt")));
}

TEST(BuildPrompt, Deterministic) {
  const auto history = testing::hash_browns_history();
  const auto sel = select_knowledge(testing::hash_browns(), {2}, KnowledgeMode::kCenter);
  EXPECT_EQ(build_prompt(format_history(history), sel).text, build_prompt(format_history(history), sel).text);
}

TEST(DescribeIntents, JoinsWithSemicolons) {
  const auto& cat = IntentCatalog::cooking();
  EXPECT_FALSE(describe_intents({}, cat));
  EXPECT_EQ(describe_intents({16}, cat), "ask about the cooking tool");
  EXPECT_EQ(describe_intents({14, 16}, cat), "ask for instructions; ask about the cooking tool");
}

TEST(Respond, StubIsDeterministicFromTheWindow) {
  StubBackend stub(StubBackendConfig{"NEXT: {first_knowledge_sentence} ({state})"});
  const auto recipe = testing::hash_browns();
  const auto history = testing::hash_browns_history();
  const RespondConfig cfg{KnowledgeMode::kCenter, false, 0};
  const auto r = respond(recipe, history, {3}, {}, cfg, stub, IntentCatalog::cooking());
  EXPECT_EQ(r.reply, "NEXT: Shred the potatoes. (3)");
  EXPECT_EQ(r.selection.step_indices(), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(r.prompt.text.find("wants to:"), std::string::npos);
  EXPECT_EQ(respond(recipe, history, {3}, {}, cfg, stub, IntentCatalog::cooking()).prompt.text, r.prompt.text);
}

TEST(Respond, CutoffAtSentinelUsesAllSteps) {
  StubBackend stub(StubBackendConfig{"{first_knowledge_sentence}"});
  const auto recipe = testing::hash_browns();
  const RespondConfig cfg{KnowledgeMode::kCutoff, false, 0};
  const auto r = respond(recipe, {}, {0}, {}, cfg, stub, IntentCatalog::cooking());
  EXPECT_EQ(r.selection.step_indices().size(), 6u);
  EXPECT_EQ(r.reply, "Peel the potatoes.");
}

TEST(Respond, CenterWithIntent) {
  StubBackend stub(StubBackendConfig{"{intent_names}"});
  const auto recipe = testing::hash_browns();
  const auto history = testing::hash_browns_history();
  const RespondConfig cfg{KnowledgeMode::kCenter, true, 0};
  const auto r = respond(recipe, history, {1}, {16}, cfg, stub, IntentCatalog::cooking());
  EXPECT_LE(r.selection.selected.size(), 3u);
  EXPECT_TRUE(r.prompt.text.ends_with(" [user] wants to: ask about the cooking tool. => [system] "));
  EXPECT_EQ(r.reply, "req_tool");
}

TEST(Respond, IntentIgnoredWhenDisabled) {
  StubBackend stub(StubBackendConfig{"ok"});
  const RespondConfig cfg{KnowledgeMode::kFull, false, 0};
  const auto r = respond(testing::hash_browns(), {}, {0}, {16}, cfg, stub, IntentCatalog::cooking());
  EXPECT_FALSE(r.prompt.intent_part);
}

TEST(TruncateHistory, OldestFirst) {
  const auto h = testing::hash_browns_history();
  EXPECT_EQ(truncate_history(h, 0).size(), h.size());
  const auto cut = truncate_history(h, 80);
  EXPECT_LE(format_history(cut).size(), 80u);
  EXPECT_EQ(&cut.back(), &h.back());
  EXPECT_EQ(truncate_history(h, 1).size(), 1u);
}

}  // namespace
}  // namespace recipechat
