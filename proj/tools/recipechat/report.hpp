#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace recipechat::cli {

enum class Format { kText, kJson };

Format parse_format(const std::string& s);

/// Rows of cells printed with every column padded to its widest cell.
/// Numeric-looking cells are right-aligned.
class Table {
 public:
  explicit Table(std::vector<std::string> header = {}) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double v, int digits = 1);

/// Reads one utterance per line; a trailing empty line is ignored.
std::vector<std::string> read_lines(const std::string& path);

/// Loads a JSON file, or throws with the path in the message.
nlohmann::json read_json_file(const std::string& path);

}  // namespace recipechat::cli
