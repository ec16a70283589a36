#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "recipechat/corpus.hpp"

namespace recipechat {

/// "[system] a [user] b ..." in turn order; "" for no turns.
std::string format_history(std::span<const Turn> turns);

/// Drops the oldest turns until the rendered history fits in `char_budget`
/// bytes. The newest turn is always kept. A budget of 0 means unlimited.
/// Shared by the intent and generation prompts.
std::span<const Turn> truncate_history(std::span<const Turn> turns, std::size_t char_budget);

}  // namespace recipechat
