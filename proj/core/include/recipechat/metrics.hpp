#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "recipechat/corpus.hpp"

namespace recipechat {

struct BleuOptions {
  /// Add-one smoothing of the n >= 2 precisions. Off by default.
  bool smooth = false;
};

/// Breakdown of a corpus BLEU-4 computation.
struct BleuStats {
  std::size_t matches[4] = {0, 0, 0, 0};
  std::size_t totals[4] = {0, 0, 0, 0};
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;
  double brevity_penalty = 0.0;
  double score = 0.0;  // 0..100
};

/// Corpus-level BLEU-4, one reference per hypothesis: clipped n-gram counts
/// pooled over the corpus, uniform weights, exponential brevity penalty.
/// Uses tokenize_words.
BleuStats corpus_bleu4_stats(std::span<const std::string> hypotheses,
                             std::span<const std::string> references, const BleuOptions& options = {});
double corpus_bleu4(std::span<const std::string> hypotheses, std::span<const std::string> references,
                    const BleuOptions& options = {});

/// 100 * unique n-grams / total n-grams, pooled over all utterances.
double distinct_n(std::span<const std::string> utterances, int n);

/// Mean token count per utterance.
double avg_length(std::span<const std::string> utterances);

enum class OverlapVariant {
  /// Sum of matched response n-gram tokens / sum of response n-gram tokens.
  kMicroToken,
  /// Mean over utterances of the per-utterance token-level percentage.
  kMacroToken,
  /// Like kMicroToken but each utterance counts its distinct n-grams once.
  kMicroType,
};

const char* to_string(OverlapVariant v) noexcept;

/// Percentage of system-utterance n-grams that also occur in the grounding
/// recipe (n-grams taken within each step's token sequence).
double recipe_ngram_overlap(const Corpus& corpus, int n, OverlapVariant variant = OverlapVariant::kMicroToken);

/// System-role utterances (or all utterances when include_user is set).
std::vector<std::string> collect_utterances(const std::vector<Conversation>& conversations,
                                            bool include_user = false);

struct EvalReport {
  double bleu4 = 0.0;
  double distinct1 = 0.0;
  double distinct2 = 0.0;
  double avg_length = 0.0;
  std::map<int, double> overlap;  // n -> percent; empty when not computed
};

/// BLEU-4, diversity and length of generated responses against references.
EvalReport evaluate_generation(std::span<const std::string> hypotheses, std::span<const std::string> references,
                               const BleuOptions& options = {});

}  // namespace recipechat
