#include "recipechat/history.hpp"

namespace recipechat {
namespace {

std::size_t rendered_size(const Turn& t) {
  // "[" role "] " text
  return 3 + std::string_view(to_string(t.role)).size() + t.text.size();
}

}  // namespace

std::string format_history(std::span<const Turn> turns) {
  std::string out;
  for (const auto& t : turns) {
    if (!out.empty()) out.push_back(' ');
    out += '[';
    out += to_string(t.role);
    out += "] ";
    out += t.text;
  }
  return out;
}

std::span<const Turn> truncate_history(std::span<const Turn> turns, std::size_t char_budget) {
  if (char_budget == 0 || turns.empty()) return turns;
  std::size_t total = 0;
  for (const auto& t : turns) total += rendered_size(t);
  total += turns.size() - 1;  // separators
  std::size_t first = 0;
  while (total > char_budget && first + 1 < turns.size()) {
    total -= rendered_size(turns[first]) + 1;
    ++first;
  }
  return turns.subspan(first);
}

}  // namespace recipechat
