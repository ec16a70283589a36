#include <benchmark/benchmark.h>

#include "common.hpp"
#include "recipechat/tracker.hpp"

namespace {

void BM_UnigramF1(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = recipechat::bench::sentence(rng, 20);
  const auto b = recipechat::bench::sentence(rng, 20);
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::unigram_f1(a, b));
}
BENCHMARK(BM_UnigramF1);

void BM_TrackConversation(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto recipe = recipechat::bench::recipe(rng, static_cast<int>(state.range(0)), 6);
  recipechat::Conversation conv{"c", recipe.id, {}};
  for (int i = 0; i < 26; ++i) {
    conv.turns.push_back(i % 2 ? recipechat::Turn::system(recipechat::bench::sentence(rng, 15))
                               : recipechat::Turn::user(recipechat::bench::sentence(rng, 8)));
  }
  const auto cfg = recipechat::TrackerConfig::word_match();
  const recipechat::WordMatchScorer scorer;
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::track_conversation(conv, recipe, cfg, scorer));
}
BENCHMARK(BM_TrackConversation)->Arg(4)->Arg(12);

}  // namespace
