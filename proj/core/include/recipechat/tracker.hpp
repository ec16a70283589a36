#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recipechat/corpus.hpp"
#include "recipechat/embedding.hpp"

namespace recipechat {

enum class ScorerKind { kWordMatch, kEmbedding };

const char* to_string(ScorerKind kind) noexcept;
ScorerKind scorer_kind_from_string(const std::string& s);

/// Instruction-state tracker settings. Requires 0 < alpha1 <= alpha2 < 1.
struct TrackerConfig {
  ScorerKind scorer = ScorerKind::kWordMatch;
  /// Threshold for moving to exactly the next step.
  double alpha1 = 0.2;
  /// Threshold for moving to any other step.
  double alpha2 = 0.3;
  /// Required when scorer is kEmbedding.
  std::optional<EmbeddingEndpoint> embedding;

  void validate() const;

  static TrackerConfig word_match() { return {}; }
  static TrackerConfig sentence_embedding(EmbeddingEndpoint endpoint) {
    return {ScorerKind::kEmbedding, 0.5, 0.6, std::move(endpoint)};
  }
};

/// Last instructed recipe step; 0 means nothing has been instructed yet.
struct TrackerState {
  int current_step = 0;
  friend bool operator==(TrackerState, TrackerState) = default;
};

struct AlignmentScore {
  int step_index = 0;
  double score = 0.0;
  std::string best_micro_step;
};

/// Bag-of-words F1 between two texts, on tokenize_words output. 0 if either is empty.
double unigram_f1(std::string_view a, std::string_view b);

/// Same, on already tokenized input (tokens need not be sorted).
double unigram_f1(std::span<const std::string> a, std::span<const std::string> b);

/// Scores one utterance against every step of a single recipe. Built once per
/// recipe so micro-step token bags or embeddings are computed only once.
class RecipeScorer {
 public:
  virtual ~RecipeScorer() = default;
  /// One entry per step, in step order; each score is the max over micro-steps.
  virtual std::vector<AlignmentScore> score_steps(std::string_view utterance) const = 0;
};

/// Similarity function between an utterance and a micro-step, in [0, 1].
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::unique_ptr<RecipeScorer> prepare(const Recipe& recipe) const = 0;
};

/// Unigram F1 overlap.
class WordMatchScorer final : public Scorer {
 public:
  std::unique_ptr<RecipeScorer> prepare(const Recipe& recipe) const override;
};

/// Cosine similarity of sentence embeddings, negatives clamped to 0.
class EmbeddingScorer final : public Scorer {
 public:
  explicit EmbeddingScorer(std::shared_ptr<const EmbeddingClient> client);
  std::unique_ptr<RecipeScorer> prepare(const Recipe& recipe) const override;

 private:
  std::shared_ptr<const EmbeddingClient> client_;
};

/// Scorer for a validated config. Embedding configs get an HTTP client.
std::shared_ptr<const Scorer> make_scorer(const TrackerConfig& config);

std::vector<AlignmentScore> score_steps(std::string_view utterance, const Recipe& recipe,
                                        const Scorer& scorer);

/// The state update rule on precomputed per-step scores (scores[i] is step i+1).
///
/// best is the argmax with ties going to the lowest step. The state moves to
/// best when (best == prev + 1 and max > alpha1) or max > alpha2; otherwise it
/// stays at prev. Comparisons are strict. alpha2 may be 1 here to express
/// "never jump".
int decide_state(int prev, std::span<const double> scores, double alpha1, double alpha2);

/// Tracker bound to one recipe; keeps the scorer's per-recipe cache.
class Tracker {
 public:
  struct Step {
    TrackerState state;
    std::vector<AlignmentScore> scores;
  };

  Tracker(const Recipe& recipe, TrackerConfig config, std::shared_ptr<const Scorer> scorer);
  Tracker(const Recipe& recipe, TrackerConfig config);

  Step advance(TrackerState prev, std::string_view system_utterance) const;

  int num_steps() const noexcept { return num_steps_; }
  const TrackerConfig& config() const noexcept { return config_; }

 private:
  int num_steps_;
  TrackerConfig config_;
  std::shared_ptr<const Scorer> scorer_;
  std::unique_ptr<RecipeScorer> prepared_;
};

TrackerState advance_state(TrackerState prev, std::string_view utterance, const Recipe& recipe,
                           const TrackerConfig& config);
TrackerState advance_state(TrackerState prev, std::string_view utterance, const Recipe& recipe,
                           const TrackerConfig& config, const Scorer& scorer);

struct TrackedTurn {
  std::size_t turn_index = 0;  // index into Conversation::turns
  TrackerState state;
  friend bool operator==(const TrackedTurn&, const TrackedTurn&) = default;
};

/// Folds the update rule over the system turns, starting from state 0.
std::vector<TrackedTurn> track_conversation(const Conversation& conversation, const Recipe& recipe,
                                            const TrackerConfig& config);
std::vector<TrackedTurn> track_conversation(const Conversation& conversation, const Recipe& recipe,
                                            const TrackerConfig& config, const Scorer& scorer);

/// Exact-match accuracy over positions with a gold value. Throws if there are none.
double evaluate_tracking(std::span<const int> predicted, std::span<const std::optional<int>> gold);

struct TrackingReport {
  std::size_t annotated = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

/// Tracks every conversation and scores it against the gold system-turn states.
TrackingReport evaluate_corpus_tracking(const Corpus& corpus, const TrackerConfig& config,
                                        const Scorer& scorer);

}  // namespace recipechat
