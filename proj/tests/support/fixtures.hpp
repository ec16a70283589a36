#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "recipechat/corpus.hpp"

namespace recipechat::testing {

std::string read_file(const std::string& path);
std::string data_path(const std::string& name);
std::string golden_path(const std::string& name);
/// Lines of a file under tests/data.
std::vector<std::string> data_lines(const std::string& name);

/// tiny_recipes.jsonl + tiny_conversations.jsonl
Corpus tiny_corpus();
/// The six-step hash-brown recipe and its five-turn history plus the final user question.
Recipe hash_browns();
std::vector<Turn> hash_browns_history();

/// Random small corpora over a 24-word vocabulary. System turns mostly
/// paraphrase a step so states move in every direction.
struct RandomCorpusOptions {
  int max_steps = 6;
  int max_sentences = 3;
  int max_turns = 10;
};
Corpus random_corpus(std::mt19937_64& rng, int n_conversations, const RandomCorpusOptions& options = {});
std::string random_sentence(std::mt19937_64& rng, int min_words, int max_words);

// Independent reference implementations used as oracles.
namespace oracle {

/// Unigram F1 via sorted token lists.
double f1(const std::string& a, const std::string& b);

/// Enumerates every (step, micro-step) pair and applies the update rule.
int next_state(int prev, const std::string& utterance, const Recipe& recipe, double alpha1, double alpha2);

/// Corpus BLEU-4 with vector n-gram keys and std::map counting.
double corpus_bleu4(const std::vector<std::string>& hyps, const std::vector<std::string>& refs);

double distinct_n(const std::vector<std::string>& utterances, int n);

/// Token-level containment by scanning every recipe position for each response n-gram.
double overlap_micro_token(const Corpus& corpus, int n);

double micro_f1(const std::vector<std::set<int>>& preds, const std::vector<std::set<int>>& golds);

}  // namespace oracle

}  // namespace recipechat::testing
