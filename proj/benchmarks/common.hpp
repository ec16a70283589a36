#pragma once

#include <random>
#include <string>
#include <vector>

#include "recipechat/corpus.hpp"

namespace recipechat::bench {

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "heat", "the", "oil", "in", "a", "large", "pan", "over", "medium", "add", "onions", "and",
      "cook", "until", "soft", "stir", "garlic", "for", "minutes", "season", "with", "salt", "pepper", "serve"};
  return words;
}

inline std::string sentence(std::mt19937_64& rng, int words) {
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  std::string s;
  for (int i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += vocabulary()[pick(rng)];
  }
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s + ".";
}

inline Recipe recipe(std::mt19937_64& rng, int steps, int sentences_per_step) {
  std::vector<std::string> texts;
  for (int i = 0; i < steps; ++i) {
    std::string t;
    for (int j = 0; j < sentences_per_step; ++j) t += (j ? " " : "") + sentence(rng, 12);
    texts.push_back(t);
  }
  return Recipe::from_texts("bench", "Bench", texts);
}

}  // namespace recipechat::bench
