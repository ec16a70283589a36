#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace recipechat {

/// Word tokenizer shared by the tracker and every metric.
///
/// Lowercases ASCII, splits on whitespace and strips punctuation from both
/// ends of each token. Punctuation inside a token survives, so "0.5", "1/2"
/// and "don't" stay whole. Tokens that are pure punctuation are dropped.
std::vector<std::string> tokenize_words(std::string_view text);

/// Splits text into sentences without dropping any non-whitespace bytes.
///
/// A boundary is a run of `.`, `!` or `?` (plus trailing closing quotes or
/// brackets) followed by whitespace and an uppercase letter, or by the end
/// of the text. A period is not a boundary when it ends a known abbreviation
/// ("e.g.", "approx.") or a unit abbreviation preceded by a number
/// ("1.5 oz. Parmesan"). Returned sentences are trimmed.
std::vector<std::string> split_sentences(std::string_view text);

/// Joins tokens with single spaces; the n-gram key used by the metrics.
std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first,
                        std::size_t count);

std::string_view trim(std::string_view s);

}  // namespace recipechat
