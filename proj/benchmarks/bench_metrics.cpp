#include <benchmark/benchmark.h>

#include "common.hpp"
#include "recipechat/metrics.hpp"

namespace {

void BM_CorpusBleu4(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<std::string> hyps, refs;
  for (int i = 0; i < state.range(0); ++i) {
    hyps.push_back(recipechat::bench::sentence(rng, 15));
    refs.push_back(recipechat::bench::sentence(rng, 15));
  }
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::corpus_bleu4(hyps, refs));
}
BENCHMARK(BM_CorpusBleu4)->Arg(100)->Arg(1000);

void BM_DistinctN(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::vector<std::string> utts;
  for (int i = 0; i < 1000; ++i) utts.push_back(recipechat::bench::sentence(rng, 15));
  for (auto _ : state) benchmark::DoNotOptimize(recipechat::distinct_n(utts, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DistinctN)->Arg(1)->Arg(2);

}  // namespace
