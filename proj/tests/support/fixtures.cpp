#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "recipechat/json_io.hpp"
#include "recipechat/text.hpp"

namespace recipechat::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string data_path(const std::string& name) { return std::string(RECIPECHAT_TEST_DATA) + "/" + name; }
std::string golden_path(const std::string& name) { return std::string(RECIPECHAT_TEST_GOLDEN) + "/" + name; }

std::vector<std::string> data_lines(const std::string& name) {
  std::istringstream in(read_file(data_path(name)));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

Corpus tiny_corpus() { return load_corpus(data_path("tiny_recipes.jsonl"), data_path("tiny_conversations.jsonl")); }

Recipe hash_browns() {
  std::ifstream in(data_path("hash_browns_recipes.jsonl"));
  auto recipes = read_recipes(in);
  return recipes.at("hash-browns");
}

std::vector<Turn> hash_browns_history() {
  return nlohmann::json::parse(read_file(data_path("hash_browns_history.json"))).get<std::vector<Turn>>();
}

namespace {

const std::vector<std::string> kVocab = {
    "heat", "the",  "pan",   "add",    "butter", "stir", "flour", "milk",  "eggs",  "whisk", "bake",  "oven",
    "salt", "pour", "batter", "slowly", "until", "golden", "serve", "warm", "chop", "onion", "garlic", "mix",
};

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::string random_sentence(std::mt19937_64& rng, int min_words, int max_words) {
  const int n = uniform(rng, min_words, max_words);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += kVocab[static_cast<std::size_t>(uniform(rng, 0, int(kVocab.size()) - 1))];
  }
  return capitalized(s) + ".";
}

Corpus random_corpus(std::mt19937_64& rng, int n_conversations, const RandomCorpusOptions& options) {
  RecipeMap recipes;
  std::vector<Conversation> conversations;
  for (int c = 0; c < n_conversations; ++c) {
    const std::string rid = "r" + std::to_string(c);
    std::vector<std::string> steps;
    const int n_steps = uniform(rng, 1, options.max_steps);
    for (int s = 0; s < n_steps; ++s) {
      std::string text;
      const int n_sent = uniform(rng, 1, options.max_sentences);
      for (int k = 0; k < n_sent; ++k) text += (k ? " " : "") + random_sentence(rng, 2, 7);
      steps.push_back(text);
    }
    auto recipe = Recipe::from_texts(rid, "Recipe " + std::to_string(c), steps);

    Conversation conv{"c" + std::to_string(c), rid, {}};
    const int n_turns = uniform(rng, 0, options.max_turns);
    for (int t = 0; t < n_turns; ++t) {
      const bool system = uniform(rng, 0, 2) != 0;
      if (!system) {
        conv.turns.push_back(Turn::user(random_sentence(rng, 1, 6)));
        continue;
      }
      std::string text;
      switch (uniform(rng, 0, 3)) {
        case 0:
          text = random_sentence(rng, 1, 8);
          break;
        case 1: {  // one micro-step verbatim
          const auto& st = recipe.steps[static_cast<std::size_t>(uniform(rng, 0, n_steps - 1))];
          text = st.micro_steps[static_cast<std::size_t>(uniform(rng, 0, int(st.micro_steps.size()) - 1))];
          break;
        }
        default: {  // micro-step with noise words
          const auto& st = recipe.steps[static_cast<std::size_t>(uniform(rng, 0, n_steps - 1))];
          text = st.micro_steps.front() + " " + random_sentence(rng, 1, 4);
          break;
        }
      }
      auto turn = Turn::system(text);
      if (uniform(rng, 0, 3) != 0) turn.gold_state = uniform(rng, 1, n_steps);
      conv.turns.push_back(std::move(turn));
    }
    recipes.emplace(rid, std::move(recipe));
    conversations.push_back(std::move(conv));
  }
  return make_corpus(std::move(recipes), std::move(conversations));
}

namespace oracle {

double f1(const std::string& a, const std::string& b) {
  auto ta = tokenize_words(a);
  auto tb = tokenize_words(b);
  if (ta.empty() || tb.empty()) return 0.0;
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::string> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  if (common.empty()) return 0.0;
  const double p = double(common.size()) / double(ta.size());
  const double r = double(common.size()) / double(tb.size());
  return 2 * p * r / (p + r);
}

int next_state(int prev, const std::string& utterance, const Recipe& recipe, double alpha1, double alpha2) {
  double best_score = -1.0;
  int best = 0;
  for (const auto& step : recipe.steps) {
    for (const auto& sentence : step.micro_steps) {
      const double s = f1(utterance, sentence);
      // Strictly greater keeps the earliest step on ties.
      if (s > best_score) {
        best_score = s;
        best = step.index;
      }
    }
  }
  if (best == prev + 1 && best_score > alpha1) return best;
  if (best_score > alpha2) return best;
  return prev;
}

namespace {

using Gram = std::vector<std::string>;

std::map<Gram, int> grams(const std::vector<std::string>& t, std::size_t n) {
  std::map<Gram, int> m;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++m[Gram(t.begin() + long(i), t.begin() + long(i + n))];
  return m;
}

}  // namespace

double corpus_bleu4(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  double num[4] = {}, den[4] = {};
  double hyp_len = 0, ref_len = 0;
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    const auto h = tokenize_words(hyps[k]);
    const auto r = tokenize_words(refs[k]);
    hyp_len += double(h.size());
    ref_len += double(r.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hg = grams(h, n);
      const auto rg = grams(r, n);
      for (const auto& [g, c] : hg) {
        den[n - 1] += c;
        auto it = rg.find(g);
        num[n - 1] += it == rg.end() ? 0 : std::min(c, it->second);
      }
    }
  }
  double log_p = 0;
  for (int n = 0; n < 4; ++n) {
    if (num[n] == 0) return 0.0;
    log_p += 0.25 * std::log(num[n] / den[n]);
  }
  const double bp = hyp_len > ref_len ? 1.0 : std::exp(1 - ref_len / hyp_len);
  return 100 * bp * std::exp(log_p);
}

double distinct_n(const std::vector<std::string>& utterances, int n) {
  std::vector<Gram> all;
  for (const auto& u : utterances) {
    const auto t = tokenize_words(u);
    for (std::size_t i = 0; i + std::size_t(n) <= t.size(); ++i) {
      all.emplace_back(t.begin() + long(i), t.begin() + long(i) + n);
    }
  }
  const double total = double(all.size());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return 100.0 * double(all.size()) / total;
}

double overlap_micro_token(const Corpus& corpus, int n) {
  const auto un = std::size_t(n);
  double hit = 0, total = 0;
  for (const auto& c : corpus.conversations) {
    const auto& recipe = corpus.recipe_for(c);
    for (const auto& t : c.turns) {
      if (t.role != Role::kSystem) continue;
      const auto u = tokenize_words(t.text);
      for (std::size_t i = 0; i + un <= u.size(); ++i) {
        bool found = false;
        for (const auto& s : recipe.steps) {
          const auto st = tokenize_words(s.text);
          for (std::size_t j = 0; !found && j + un <= st.size(); ++j) {
            found = std::equal(u.begin() + long(i), u.begin() + long(i + un), st.begin() + long(j));
          }
          if (found) break;
        }
        hit += found;
        total += 1;
      }
    }
  }
  if (total == 0) throw std::invalid_argument("no n-grams");
  return 100.0 * hit / total;
}

double micro_f1(const std::vector<std::set<int>>& preds, const std::vector<std::set<int>>& golds) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (int p : preds[i]) (golds[i].count(p) ? tp : fp) += 1;
    for (int g : golds[i]) fn += preds[i].count(g) ? 0 : 1;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2 * tp / (2 * tp + fp + fn);
}

}  // namespace oracle

}  // namespace recipechat::testing
