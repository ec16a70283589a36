#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace recipechat {

/// One recipe step, split into the sentences ("micro-steps") the tracker scores.
struct RecipeStep {
  int index = 0;  // 1-based
  std::string text;
  std::vector<std::string> micro_steps;

  /// Builds a step, computing micro-steps from the text.
  static RecipeStep from_text(int index, std::string text);
};

struct Recipe {
  std::string id;
  std::string title;
  std::vector<RecipeStep> steps;

  int num_steps() const noexcept { return static_cast<int>(steps.size()); }
  const RecipeStep& step(int index) const { return steps.at(static_cast<std::size_t>(index - 1)); }

  /// Builds and validates a recipe from raw step texts.
  static Recipe from_texts(std::string id, std::string title, const std::vector<std::string>& steps);
};

enum class Role { kUser, kSystem };

const char* to_string(Role role) noexcept;
Role role_from_string(const std::string& s);

struct Turn {
  Role role = Role::kUser;
  std::string text;
  std::optional<std::set<int>> gold_intents;  // user turns only
  std::optional<int> gold_state;              // system turns only, 1..n_r

  static Turn user(std::string text) { return Turn{Role::kUser, std::move(text), {}, {}}; }
  static Turn system(std::string text) { return Turn{Role::kSystem, std::move(text), {}, {}}; }

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Conversation {
  std::string id;
  std::string recipe_id;
  std::vector<Turn> turns;
};

using RecipeMap = std::map<std::string, Recipe>;

/// Recipes and conversations that passed validation together.
struct Corpus {
  RecipeMap recipes;
  std::vector<Conversation> conversations;

  const Recipe& recipe_for(const Conversation& c) const;
};

struct CorpusStats {
  std::size_t n_dialogues = 0;
  std::size_t n_recipes = 0;
  double utterances_per_dialogue = 0.0;
  double steps_per_recipe = 0.0;
  double tokens_per_recipe = 0.0;
  double sentences_per_step = 0.0;
  double tokens_per_step = 0.0;
};

/// Signed change in gold state between consecutive system turns, and its count.
using StateChangeHistogram = std::map<int, std::size_t>;

// Structural checks; throw ValidationError.
void validate(const Recipe& recipe);
void validate(const Conversation& conversation, const Recipe& recipe);

/// Parses recipes.jsonl. Errors carry the 1-based line number.
RecipeMap read_recipes(std::istream& in);
/// Parses conversations.jsonl. Recipe resolution happens in load_corpus.
std::vector<Conversation> read_conversations(std::istream& in);

/// Loads and cross-validates both files.
Corpus load_corpus(const std::filesystem::path& recipes_path,
                   const std::filesystem::path& conversations_path);

/// Resolves and validates conversations against an already loaded recipe set.
Corpus make_corpus(RecipeMap recipes, std::vector<Conversation> conversations);

/// Merges several corpora (e.g. train/valid/test splits). A recipe id may repeat
/// only with identical content.
Corpus merge(std::vector<Corpus> parts);

void write_recipes(std::ostream& out, const RecipeMap& recipes);
void write_conversations(std::ostream& out, const std::vector<Conversation>& conversations);

CorpusStats compute_stats(const Corpus& corpus);

StateChangeHistogram state_change_histogram(const std::vector<Conversation>& conversations);

}  // namespace recipechat
