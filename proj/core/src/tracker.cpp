#include "recipechat/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "recipechat/error.hpp"
#include "recipechat/text.hpp"

namespace recipechat {

const char* to_string(ScorerKind kind) noexcept {
  return kind == ScorerKind::kWordMatch ? "wordmatch" : "embedding";
}

ScorerKind scorer_kind_from_string(const std::string& s) {
  if (s == "wordmatch") return ScorerKind::kWordMatch;
  if (s == "embedding") return ScorerKind::kEmbedding;
  throw ValidationError("unknown scorer '" + s + "' (expected wordmatch or embedding)");
}

void TrackerConfig::validate() const {
  if (!(alpha1 > 0.0 && alpha1 <= alpha2 && alpha2 < 1.0)) {
    throw ValidationError("tracker thresholds must satisfy 0 < alpha1 <= alpha2 < 1 (got " +
                          std::to_string(alpha1) + ", " + std::to_string(alpha2) + ")");
  }
  if (scorer == ScorerKind::kEmbedding && (!embedding || embedding->url.empty())) {
    throw ValidationError("embedding scorer requires an endpoint URL");
  }
}

namespace {

using SortedBag = std::vector<std::string>;

SortedBag sorted_bag(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

std::size_t multiset_overlap(const SortedBag& a, const SortedBag& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

double f1_from_counts(std::size_t overlap, std::size_t na, std::size_t nb) {
  if (overlap == 0 || na == 0 || nb == 0) return 0.0;
  const double p = double(overlap) / double(na);
  const double r = double(overlap) / double(nb);
  return 2.0 * p * r / (p + r);
}

double bag_f1(const SortedBag& a, const SortedBag& b) {
  return f1_from_counts(multiset_overlap(a, b), a.size(), b.size());
}

class WordMatchRecipe final : public RecipeScorer {
 public:
  explicit WordMatchRecipe(const Recipe& recipe) {
    for (const auto& step : recipe.steps) {
      auto& entry = steps_.emplace_back();
      for (const auto& sentence : step.micro_steps) {
        entry.push_back({sentence, sorted_bag(tokenize_words(sentence))});
      }
    }
  }

  std::vector<AlignmentScore> score_steps(std::string_view utterance) const override {
    const auto bag = sorted_bag(tokenize_words(utterance));
    std::vector<AlignmentScore> out;
    out.reserve(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      AlignmentScore best{static_cast<int>(i + 1), 0.0, steps_[i].front().text};
      for (const auto& ms : steps_[i]) {
        double s = bag_f1(bag, ms.bag);
        if (s > best.score) {
          best.score = s;
          best.best_micro_step = ms.text;
        }
      }
      out.push_back(std::move(best));
    }
    return out;
  }

 private:
  struct MicroStep {
    std::string text;
    SortedBag bag;
  };
  std::vector<std::vector<MicroStep>> steps_;
};

Embedding normalized(Embedding v) {
  double norm = 0.0;
  for (float x : v) norm += double(x) * double(x);
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (float& x : v) x = static_cast<float>(x / norm);
  }
  return v;
}

double clamped_cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw ScorerUnavailableError("embedding dimension mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += double(a[i]) * double(b[i]);
  return std::clamp(dot, 0.0, 1.0);
}

class EmbeddingRecipe final : public RecipeScorer {
 public:
  EmbeddingRecipe(const Recipe& recipe, std::shared_ptr<const EmbeddingClient> client)
      : client_(std::move(client)) {
    std::vector<std::string> texts;
    for (const auto& step : recipe.steps) {
      step_begin_.push_back(texts.size());
      texts.insert(texts.end(), step.micro_steps.begin(), step.micro_steps.end());
    }
    step_begin_.push_back(texts.size());
    auto vectors = client_->embed(texts);
    if (vectors.size() != texts.size()) throw ScorerUnavailableError("embedding count mismatch");
    for (auto& v : vectors) vectors_.push_back(normalized(std::move(v)));
    texts_ = std::move(texts);
  }

  std::vector<AlignmentScore> score_steps(std::string_view utterance) const override {
    std::vector<AlignmentScore> out;
    const std::size_t n = step_begin_.size() - 1;
    if (trim(utterance).empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back({static_cast<int>(i + 1), 0.0, texts_[step_begin_[i]]});
      }
      return out;
    }
    auto vecs = client_->embed({std::string(utterance)});
    if (vecs.size() != 1) throw ScorerUnavailableError("embedding count mismatch");
    const auto u = normalized(std::move(vecs.front()));
    for (std::size_t i = 0; i < n; ++i) {
      AlignmentScore best{static_cast<int>(i + 1), 0.0, texts_[step_begin_[i]]};
      for (std::size_t k = step_begin_[i]; k < step_begin_[i + 1]; ++k) {
        double s = clamped_cosine(u, vectors_[k]);
        if (s > best.score) {
          best.score = s;
          best.best_micro_step = texts_[k];
        }
      }
      out.push_back(std::move(best));
    }
    return out;
  }

 private:
  std::shared_ptr<const EmbeddingClient> client_;
  std::vector<std::size_t> step_begin_;
  std::vector<std::string> texts_;
  std::vector<Embedding> vectors_;
};

void check_state(int state, const Recipe& recipe) {
  if (state < 0 || state > recipe.num_steps()) {
    throw ValidationError("tracker state " + std::to_string(state) + " outside 0.." +
                          std::to_string(recipe.num_steps()));
  }
}

}  // namespace

double unigram_f1(std::span<const std::string> a, std::span<const std::string> b) {
  return bag_f1(sorted_bag({a.begin(), a.end()}), sorted_bag({b.begin(), b.end()}));
}

double unigram_f1(std::string_view a, std::string_view b) {
  return bag_f1(sorted_bag(tokenize_words(a)), sorted_bag(tokenize_words(b)));
}

std::unique_ptr<RecipeScorer> WordMatchScorer::prepare(const Recipe& recipe) const {
  return std::make_unique<WordMatchRecipe>(recipe);
}

EmbeddingScorer::EmbeddingScorer(std::shared_ptr<const EmbeddingClient> client)
    : client_(std::move(client)) {}

std::unique_ptr<RecipeScorer> EmbeddingScorer::prepare(const Recipe& recipe) const {
  return std::make_unique<EmbeddingRecipe>(recipe, client_);
}

std::shared_ptr<const Scorer> make_scorer(const TrackerConfig& config) {
  config.validate();
  if (config.scorer == ScorerKind::kWordMatch) return std::make_shared<WordMatchScorer>();
  return std::make_shared<EmbeddingScorer>(std::make_shared<HttpEmbeddingClient>(*config.embedding));
}

std::vector<AlignmentScore> score_steps(std::string_view utterance, const Recipe& recipe,
                                        const Scorer& scorer) {
  return scorer.prepare(recipe)->score_steps(utterance);
}

int decide_state(int prev, std::span<const double> scores, double alpha1, double alpha2) {
  if (scores.empty()) return prev;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  const int best_state = static_cast<int>(best + 1);
  const double max_score = scores[best];
  if ((best_state == prev + 1 && max_score > alpha1) || max_score > alpha2) return best_state;
  return prev;
}

Tracker::Tracker(const Recipe& recipe, TrackerConfig config, std::shared_ptr<const Scorer> scorer)
    : num_steps_(recipe.num_steps()), config_(std::move(config)), scorer_(std::move(scorer)) {
  config_.validate();
  prepared_ = scorer_->prepare(recipe);
}

Tracker::Tracker(const Recipe& recipe, TrackerConfig config)
    : Tracker(recipe, config, make_scorer(config)) {}

Tracker::Step Tracker::advance(TrackerState prev, std::string_view system_utterance) const {
  if (prev.current_step < 0 || prev.current_step > num_steps_) {
    throw ValidationError("tracker state " + std::to_string(prev.current_step) + " outside 0.." +
                          std::to_string(num_steps_));
  }
  Step step;
  step.scores = prepared_->score_steps(system_utterance);
  std::vector<double> values;
  values.reserve(step.scores.size());
  for (const auto& s : step.scores) values.push_back(s.score);
  step.state.current_step = decide_state(prev.current_step, values, config_.alpha1, config_.alpha2);
  return step;
}

TrackerState advance_state(TrackerState prev, std::string_view utterance, const Recipe& recipe,
                           const TrackerConfig& config, const Scorer& scorer) {
  config.validate();
  check_state(prev.current_step, recipe);
  auto scores = score_steps(utterance, recipe, scorer);
  std::vector<double> values;
  for (const auto& s : scores) values.push_back(s.score);
  return {decide_state(prev.current_step, values, config.alpha1, config.alpha2)};
}

TrackerState advance_state(TrackerState prev, std::string_view utterance, const Recipe& recipe,
                           const TrackerConfig& config) {
  return advance_state(prev, utterance, recipe, config, *make_scorer(config));
}

std::vector<TrackedTurn> track_conversation(const Conversation& conversation, const Recipe& recipe,
                                            const TrackerConfig& config, const Scorer& scorer) {
  config.validate();
  std::vector<TrackedTurn> out;
  std::unique_ptr<RecipeScorer> prepared;
  TrackerState state;
  for (std::size_t i = 0; i < conversation.turns.size(); ++i) {
    const auto& turn = conversation.turns[i];
    if (turn.role != Role::kSystem) continue;
    if (!prepared) prepared = scorer.prepare(recipe);
    std::vector<double> values;
    for (const auto& s : prepared->score_steps(turn.text)) values.push_back(s.score);
    state.current_step = decide_state(state.current_step, values, config.alpha1, config.alpha2);
    out.push_back({i, state});
  }
  return out;
}

std::vector<TrackedTurn> track_conversation(const Conversation& conversation, const Recipe& recipe,
                                            const TrackerConfig& config) {
  return track_conversation(conversation, recipe, config, *make_scorer(config));
}

double evaluate_tracking(std::span<const int> predicted, std::span<const std::optional<int>> gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("prediction/gold length mismatch: " + std::to_string(predicted.size()) +
                          " vs " + std::to_string(gold.size()));
  }
  std::size_t annotated = 0, correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i]) continue;
    ++annotated;
    if (predicted[i] == *gold[i]) ++correct;
  }
  if (annotated == 0) throw ValidationError("no annotated system turns to evaluate");
  return double(correct) / double(annotated);
}

TrackingReport evaluate_corpus_tracking(const Corpus& corpus, const TrackerConfig& config,
                                        const Scorer& scorer) {
  TrackingReport report;
  for (const auto& c : corpus.conversations) {
    for (const auto& t : track_conversation(c, corpus.recipe_for(c), config, scorer)) {
      const auto& gold = c.turns[t.turn_index].gold_state;
      if (!gold) continue;
      ++report.annotated;
      if (t.state.current_step == *gold) ++report.correct;
    }
  }
  if (report.annotated == 0) throw ValidationError("no annotated system turns to evaluate");
  report.accuracy = double(report.correct) / double(report.annotated);
  return report;
}

}  // namespace recipechat
