#include <benchmark/benchmark.h>

#include <map>

#include "planrec/baseline.hpp"
#include "planrec/corpus.hpp"
#include "planrec/embedding.hpp"
#include "planrec/generators.hpp"
#include "planrec/recognizer.hpp"

namespace {

using namespace planrec;

const PlanLibrary& corpus(int blocks) {
  static std::map<int, PlanLibrary> cache;
  auto it = cache.find(blocks);
  if (it == cache.end()) it = cache.emplace(blocks, generate_blocks_corpus(blocks, 500, 1)).first;
  return it->second;
}

const EmbeddingModel& model(int blocks) {
  static std::map<int, EmbeddingModel> cache;
  auto it = cache.find(blocks);
  if (it == cache.end()) {
    TrainConfig cfg;
    it = cache.emplace(blocks, train_skipgram(corpus(blocks), cfg)).first;
  }
  return it->second;
}

void BM_LogProb(benchmark::State& state) {
  const auto& m = model(static_cast<int>(state.range(0)));
  ActionId w = 0, c = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_prob(m, w, c));
    w = (w + 7) % m.vocab_size();
    c = (c + 3) % m.vocab_size();
  }
  state.counters["vocab"] = static_cast<double>(m.vocab_size());
}
BENCHMARK(BM_LogProb)->Arg(4)->Arg(8)->Arg(12);

void BM_TrainEpoch(benchmark::State& state) {
  const auto& lib = corpus(static_cast<int>(state.range(0)));
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_skipgram(lib, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lib.total_words()));
}
BENCHMARK(BM_TrainEpoch)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_DupRecognize(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const auto& m = model(blocks);
  const MaskedPlan mp = mask_plan(corpus(blocks).plans()[3], {0.25, 1});
  DupConfig cfg;
  cfg.iterations = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dup_recognize(m, mp.observation, cfg));
  state.counters["holes"] = static_cast<double>(mp.observation.hole_count());
}
BENCHMARK(BM_DupRecognize)->Args({4, 300})->Args({4, 1000})->Args({8, 1000})->Unit(benchmark::kMillisecond);

void BM_MatchPlan(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const auto& lib = corpus(blocks);
  const MaskedPlan mp = mask_plan(lib.plans()[3], {0.25, 1});
  MatchConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(matchplan_recognize(lib, mp.observation, cfg));
}
BENCHMARK(BM_MatchPlan)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_Exhaustive(benchmark::State& state) {
  const auto& m = model(4);
  const Observation obs = mask_plan(corpus(4).plans()[3], {2.0 / corpus(4).plans()[3].size(), 2}).observation;
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_recognize(m, obs));
}
BENCHMARK(BM_Exhaustive)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
