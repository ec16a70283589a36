#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "recipechat/error.hpp"

using namespace recipechat::cli;

namespace {

void add_corpus_options(CLI::App* cmd, CorpusArgs& c) {
  cmd->add_option("--recipes", c.recipes, "recipes.jsonl (repeatable)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--conversations", c.conversations, "conversations.jsonl (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_format_option(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recipe-grounded dialogue engine: tracking, intent detection, generation and evaluation"};
  app.require_subcommand(1);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  add_corpus_options(stats_cmd, stats.corpus);
  stats_cmd->add_flag("--table2", stats.table2, "Add diversity and recipe overlap of agent utterances");
  stats_cmd->add_flag("--histogram", stats.histogram, "Add the gold state-change histogram");
  stats_cmd->add_flag("--include-user", stats.include_user, "Pool user utterances into the diversity numbers");
  add_format_option(stats_cmd, stats.format);

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Instruction state tracking");
  add_corpus_options(track_cmd, track.corpus);
  track_cmd->add_option("--scorer", track.scorer, "wordmatch or embedding")
      ->check(CLI::IsMember({"wordmatch", "embedding"}));
  track_cmd->add_option("--alpha1", track.alpha1, "Next-step threshold (default 0.2 / 0.5)");
  track_cmd->add_option("--alpha2", track.alpha2, "Jump threshold (default 0.3 / 0.6)");
  track_cmd->add_option("--embed-url", track.embed_url, "Embedding endpoint URL");
  track_cmd->add_option("--embed-auth-env", track.embed_auth_env, "Env var holding the embedding bearer token");
  track_cmd->add_flag("--report", track.report, "Print accuracy against gold states instead of predictions");
  add_format_option(track_cmd, track.format);

  EvalIntentArgs intent;
  auto* intent_cmd = app.add_subcommand("eval-intent", "Intent detection micro-F1");
  intent_cmd->add_option("--conversations", intent.conversations, "conversations.jsonl (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  intent_cmd->add_option("--backend", intent.backend, "Backend or service config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  intent_cmd->add_option("--k-shot", intent.k_shot, "Annotated turns used as in-prompt demonstrations");
  intent_cmd->add_option("--catalog", intent.catalog, "Intent catalog JSON")->check(CLI::ExistingFile);
  intent_cmd->add_option("--history-budget", intent.history_budget, "History character budget (0 = unlimited)");
  intent_cmd->add_option("--permutation-seed", intent.permutation_seed, "Shuffle displayed intent indices");
  intent_cmd->add_option("--jobs", intent.jobs, "Concurrent backend calls")->check(CLI::PositiveNumber);
  add_format_option(intent_cmd, intent.format);

  EvalGenArgs gen;
  auto* gen_cmd = app.add_subcommand("eval-gen", "BLEU-4, distinct-n and length of generated responses");
  gen_cmd->add_option("--hyp", gen.hyp, "Hypotheses, one per line")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--ref", gen.ref, "References, one per line")->required()->check(CLI::ExistingFile);
  gen_cmd->add_flag("--smooth", gen.smooth, "Add-one smoothing for n >= 2");
  add_format_option(gen_cmd, gen.format);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP chat service");
  serve_cmd->add_option("--addr", serve.addr, "HOST:PORT");
  serve_cmd->add_option("--recipes", serve.recipes, "recipes.jsonl (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--backend", serve.backend, "Service config JSON")->check(CLI::ExistingFile);
  serve_cmd->add_option("--static", serve.static_dir, "Directory served under /")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--snapshot", serve.snapshot, "Session snapshot restored at start and written at exit");

  ChatArgs chat;
  auto* chat_cmd = app.add_subcommand("chat", "Terminal chat about one recipe");
  chat_cmd->add_option("--recipe", chat.recipe, "Recipe id")->required();
  chat_cmd->add_option("--recipes", chat.recipes, "recipes.jsonl (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  chat_cmd->add_option("--backend", chat.backend, "Service config JSON")->check(CLI::ExistingFile);
  chat_cmd->add_flag("--debug", chat.debug, "Print the prompt and step scores after each reply");

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats_cmd->parsed()) return run_stats(stats);
    if (track_cmd->parsed()) return run_track(track);
    if (intent_cmd->parsed()) return run_eval_intent(intent);
    if (gen_cmd->parsed()) return run_eval_gen(gen);
    if (serve_cmd->parsed()) return run_serve(serve);
    if (chat_cmd->parsed()) return run_chat(chat);
  } catch (const recipechat::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!e.raw().empty()) std::cerr << "raw: " << e.raw() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
