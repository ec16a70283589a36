#pragma once

#include <string>

namespace recipechat::acceptance {

// Collects one line per criterion.
class Report {
 public:
  void pass(const std::string& name, const std::string& detail = "");
  void fail(const std::string& name, const std::string& detail = "");
  void skip(const std::string& name, const std::string& detail = "");
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    ok ? pass(name, detail) : fail(name, detail);
  }

  int passed() const { return passed_; }
  int failed() const { return failed_; }
  int skipped() const { return skipped_; }

 private:
  void line(const char* tag, const std::string& name, const std::string& detail);
  int passed_ = 0;
  int failed_ = 0;
  int skipped_ = 0;
};

void run_properties(Report& report);
void run_corpus(Report& report);

}  // namespace recipechat::acceptance
