#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace recipechat::cli {

struct CorpusArgs {
  std::vector<std::string> recipes;
  std::vector<std::string> conversations;
};

struct StatsArgs {
  CorpusArgs corpus;
  bool table2 = false;
  bool histogram = false;
  bool include_user = false;  // diversity over both roles
  std::string format = "text";
};

struct TrackArgs {
  CorpusArgs corpus;
  std::string scorer = "wordmatch";
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::string embed_url;
  std::string embed_auth_env;
  bool report = false;
  std::string format = "text";
};

struct EvalIntentArgs {
  std::vector<std::string> conversations;
  std::string backend;
  std::size_t k_shot = 0;
  std::string catalog;
  std::size_t history_budget = 0;
  std::optional<std::uint64_t> permutation_seed;
  std::size_t jobs = 4;
  std::string format = "text";
};

struct EvalGenArgs {
  std::string hyp;
  std::string ref;
  bool smooth = false;
  std::string format = "text";
};

struct ServeArgs {
  std::string addr = "127.0.0.1:8080";
  std::vector<std::string> recipes;
  std::string backend;
  std::string static_dir;
  std::string snapshot;
};

struct ChatArgs {
  std::string recipe;
  std::vector<std::string> recipes;
  std::string backend;
  bool debug = false;
};

int run_stats(const StatsArgs& args);
int run_track(const TrackArgs& args);
int run_eval_intent(const EvalIntentArgs& args);
int run_eval_gen(const EvalGenArgs& args);
int run_serve(const ServeArgs& args);
int run_chat(const ChatArgs& args);

}  // namespace recipechat::cli
