#include "recipechat/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace recipechat {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

// Multi-byte UTF-8 punctuation that shows up in crowd-written text.
constexpr std::array<std::string_view, 9> kUtf8Punct = {
    "\xE2\x80\x98",  // ‘
    "\xE2\x80\x99",  // ’
    "\xE2\x80\x9C",  // “
    "\xE2\x80\x9D",  // ”
    "\xE2\x80\x93",  // –
    "\xE2\x80\x94",  // U+2014
    "\xE2\x80\xA6",  // …
    "\xC2\xA1",      // ¡
    "\xC2\xBF",      // ¿
};

std::size_t punct_prefix(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_punct(s.front())) return 1;
  for (auto p : kUtf8Punct) {
    if (s.starts_with(p)) return p.size();
  }
  return 0;
}

std::size_t punct_suffix(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_punct(s.back())) return 1;
  for (auto p : kUtf8Punct) {
    if (s.ends_with(p)) return p.size();
  }
  return 0;
}

std::string_view strip_punct(std::string_view tok) {
  while (auto n = punct_prefix(tok)) tok.remove_prefix(n);
  while (auto n = punct_suffix(tok)) tok.remove_suffix(n);
  return tok;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Always protected, whatever follows them.
constexpr std::array<std::string_view, 10> kAbbreviations = {
    "e.g", "i.e", "approx", "vs", "dr", "mr", "mrs", "ms", "st", "fig",
};

// Protected only right after a quantity ("2 tbsp. Butter").
constexpr std::array<std::string_view, 11> kUnitAbbreviations = {
    "tbsp", "tbs", "tsp", "oz", "fl", "lb", "lbs", "ml", "pt", "qt", "gal",
};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

bool looks_numeric(std::string_view w) {
  w = strip_punct(w);
  return !w.empty() && std::any_of(w.begin(), w.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

// Word ending at `end` (exclusive), scanning back to whitespace.
std::string_view word_before(std::string_view text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  return text.substr(begin, end - begin);
}

bool protected_period(std::string_view text, std::size_t dot) {
  std::string_view word = word_before(text, dot);
  // Strip an opening bracket: "(approx. 2 cups".
  while (!word.empty() && is_opener(word.front())) word.remove_prefix(1);
  if (word.empty()) return false;
  const std::string lw = lower_ascii(word);
  for (auto a : kAbbreviations) {
    if (lw == a) return true;
  }
  for (auto u : kUnitAbbreviations) {
    if (lw == u) {
      std::size_t wstart = static_cast<std::size_t>(word.data() - text.data());
      std::size_t p = wstart;
      while (p > 0 && is_space(text[p - 1])) --p;
      return p < wstart && looks_numeric(word_before(text, p));
    }
  }
  return false;
}

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) {
      auto tok = strip_punct(text.substr(i, j - i));
      if (!tok.empty()) tokens.push_back(lower_ascii(tok));
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto emit = [&](std::size_t end) {
    auto s = trim(text.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end;
  };

  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t first_term = i;
    while (i < n && is_terminator(text[i])) ++i;
    const bool single_period = text[first_term] == '.' && i - first_term == 1;
    while (i < n && is_closer(text[i])) ++i;
    const std::size_t sentence_end = i;

    std::size_t k = i;
    while (k < n && is_space(text[k])) ++k;
    const bool at_end = k == n;
    bool boundary = false;
    if (at_end) {
      boundary = true;
    } else if (k > i) {
      std::size_t m = k;
      while (m < n && is_opener(text[m])) ++m;
      boundary = m < n && std::isupper(static_cast<unsigned char>(text[m])) != 0;
    }
    if (boundary && !at_end && single_period && protected_period(text, first_term)) {
      boundary = false;
    }
    if (boundary) emit(sentence_end);
  }
  emit(n);
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first,
                        std::size_t count) {
  std::string key;
  for (std::size_t k = 0; k < count; ++k) {
    if (k) key.push_back(' ');
    key += tokens[first + k];
  }
  return key;
}

}  // namespace recipechat
