#include "recipechat/metrics.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "recipechat/error.hpp"
#include "recipechat/text.hpp"

namespace recipechat {
namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[join_tokens(tokens, i, n)];
  return counts;
}

void check_n(int n, int lo, int hi) {
  if (n < lo || n > hi) {
    throw ValidationError("n-gram order " + std::to_string(n) + " outside " + std::to_string(lo) + ".." +
                          std::to_string(hi));
  }
}

}  // namespace

BleuStats corpus_bleu4_stats(std::span<const std::string> hypotheses, std::span<const std::string> references,
                             const BleuOptions& options) {
  if (hypotheses.size() != references.size()) {
    throw ValidationError("BLEU: " + std::to_string(hypotheses.size()) + " hypotheses for " +
                          std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) throw ValidationError("BLEU: empty corpus");

  BleuStats st;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    const auto hyp = tokenize_words(hypotheses[k]);
    const auto ref = tokenize_words(references[k]);
    st.hyp_length += hyp.size();
    st.ref_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hc = count_ngrams(hyp, n);
      const auto rc = count_ngrams(ref, n);
      for (const auto& [gram, c] : hc) {
        st.totals[n - 1] += c;
        if (auto it = rc.find(gram); it != rc.end()) st.matches[n - 1] += std::min(c, it->second);
      }
    }
  }

  if (st.hyp_length == 0) return st;
  st.brevity_penalty =
      st.hyp_length > st.ref_length ? 1.0 : std::exp(1.0 - double(st.ref_length) / double(st.hyp_length));

  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = double(st.matches[n]);
    double t = double(st.totals[n]);
    if (options.smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return st;  // a zero precision zeroes the geometric mean
    log_sum += std::log(m / t);
  }
  st.score = 100.0 * st.brevity_penalty * std::exp(log_sum / 4.0);
  return st;
}

double corpus_bleu4(std::span<const std::string> hypotheses, std::span<const std::string> references,
                    const BleuOptions& options) {
  return corpus_bleu4_stats(hypotheses, references, options).score;
}

double distinct_n(std::span<const std::string> utterances, int n) {
  check_n(n, 1, 16);
  std::unordered_set<std::string> unique;
  std::size_t total = 0;
  for (const auto& u : utterances) {
    const auto tokens = tokenize_words(u);
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      unique.insert(join_tokens(tokens, i, un));
      ++total;
    }
  }
  if (total == 0) throw ValidationError("distinct-" + std::to_string(n) + ": no n-grams in the pool");
  return 100.0 * double(unique.size()) / double(total);
}

double avg_length(std::span<const std::string> utterances) {
  if (utterances.empty()) throw ValidationError("average length of an empty list");
  std::size_t total = 0;
  for (const auto& u : utterances) total += tokenize_words(u).size();
  return double(total) / double(utterances.size());
}

const char* to_string(OverlapVariant v) noexcept {
  switch (v) {
    case OverlapVariant::kMicroToken:
      return "micro-token";
    case OverlapVariant::kMacroToken:
      return "macro-token";
    case OverlapVariant::kMicroType:
      return "micro-type";
  }
  return "micro-token";
}

double recipe_ngram_overlap(const Corpus& corpus, int n, OverlapVariant variant) {
  check_n(n, 1, 5);
  const auto un = static_cast<std::size_t>(n);

  std::unordered_map<std::string, std::unordered_set<std::string>> recipe_grams;
  auto grams_for = [&](const Recipe& r) -> const std::unordered_set<std::string>& {
    auto [it, inserted] = recipe_grams.try_emplace(r.id);
    if (inserted) {
      for (const auto& s : r.steps) {
        const auto tokens = tokenize_words(s.text);
        for (std::size_t i = 0; i + un <= tokens.size(); ++i) it->second.insert(join_tokens(tokens, i, un));
      }
    }
    return it->second;
  };

  std::size_t matched = 0, total = 0;
  double macro_sum = 0.0;
  std::size_t macro_count = 0;
  for (const auto& c : corpus.conversations) {
    const auto& grams = grams_for(corpus.recipe_for(c));
    for (const auto& t : c.turns) {
      if (t.role != Role::kSystem) continue;
      const auto tokens = tokenize_words(t.text);
      if (tokens.size() < un) continue;
      std::size_t m = 0, k = 0;
      if (variant == OverlapVariant::kMicroType) {
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i + un <= tokens.size(); ++i) seen.insert(join_tokens(tokens, i, un));
        for (const auto& g : seen) m += grams.contains(g);
        k = seen.size();
      } else {
        for (std::size_t i = 0; i + un <= tokens.size(); ++i) m += grams.contains(join_tokens(tokens, i, un));
        k = tokens.size() - un + 1;
      }
      matched += m;
      total += k;
      macro_sum += double(m) / double(k);
      ++macro_count;
    }
  }
  if (total == 0) throw ValidationError("overlap: no system-utterance " + std::to_string(n) + "-grams");
  if (variant == OverlapVariant::kMacroToken) return 100.0 * macro_sum / double(macro_count);
  return 100.0 * double(matched) / double(total);
}

std::vector<std::string> collect_utterances(const std::vector<Conversation>& conversations, bool include_user) {
  std::vector<std::string> out;
  for (const auto& c : conversations) {
    for (const auto& t : c.turns) {
      if (include_user || t.role == Role::kSystem) out.push_back(t.text);
    }
  }
  return out;
}

EvalReport evaluate_generation(std::span<const std::string> hypotheses, std::span<const std::string> references,
                               const BleuOptions& options) {
  EvalReport r;
  r.bleu4 = corpus_bleu4(hypotheses, references, options);
  r.distinct1 = distinct_n(hypotheses, 1);
  r.distinct2 = distinct_n(hypotheses, 2);
  r.avg_length = avg_length(hypotheses);
  return r;
}

}  // namespace recipechat
