#include <benchmark/benchmark.h>

#include "common.hpp"
#include "recipechat/text.hpp"

namespace {

void BM_TokenizeWords(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto text = recipechat::bench::sentence(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::tokenize_words(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_TokenizeWords)->Arg(16)->Arg(128)->Arg(1024);

void BM_SplitSentences(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += recipechat::bench::sentence(rng, 12) + " ";
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::split_sentences(text));
}
BENCHMARK(BM_SplitSentences)->Arg(6)->Arg(60);

}  // namespace
