// Serial reference vs OpenMP kernel, one pair per kernel.

#include <benchmark/benchmark.h>

#include <algorithm>

#include "synthetic.hpp"
#include "ttalign/eval.hpp"
#include "ttalign/trainer.hpp"
#include "ttalign/traversal.hpp"

using namespace ttalign;

namespace {

struct Fixture {
  testing::SyntheticLibraries syn;
  std::vector<TtItem> items;
  std::vector<CorpusLine> lines;
  EmbeddingModel model;

  Fixture() {
    testing::SyntheticConfig cfg;
    cfg.templates = 3000;
    cfg.constants = 80;
    syn = testing::make_synthetic(cfg);
    items = syn.lib1;
    items.insert(items.end(), syn.lib2.begin(), syn.lib2.end());
    Rng rng(1);
    std::shuffle(items.begin(), items.end(), rng);
    lines = corpus_lines(items, {});
    TrainConfig tc;
    tc.dim = 100;
    tc.epochs = 1;
    model = train(lines, tc);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_CorpusLinesSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(corpus_lines_serial(f.items, {}));
}

void BM_CorpusLines(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(corpus_lines(f.items, {}));
}

void BM_Train(benchmark::State& state) {
  const auto& f = fixture();
  TrainConfig tc;
  tc.dim = 100;
  tc.epochs = 1;
  tc.threads = static_cast<int>(state.range(0));
  std::int64_t tokens = 0;
  for (auto _ : state) {
    TrainReport r;
    benchmark::DoNotOptimize(train(f.lines, tc, &r));
    tokens += r.tokens;
  }
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens), benchmark::Counter::kIsRate);
}

void BM_NearestSerial(benchmark::State& state) {
  const auto& f = fixture();
  const VectorIndex index(f.model);
  const std::string q = "L1:" + f.syn.gold[0].first;
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest_serial(q, 10, 2));
}

void BM_Nearest(benchmark::State& state) {
  const auto& f = fixture();
  const VectorIndex index(f.model);
  const std::string q = "L1:" + f.syn.gold[0].first;
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest(q, 10, 2));
}

void BM_TopnHitSerial(benchmark::State& state) {
  const auto& f = fixture();
  const VectorIndex index(f.model);
  for (auto _ : state) benchmark::DoNotOptimize(topn_hit_serial(index, f.syn.gold, default_cutoffs()));
}

void BM_TopnHit(benchmark::State& state) {
  const auto& f = fixture();
  const VectorIndex index(f.model);
  for (auto _ : state) benchmark::DoNotOptimize(topn_hit(index, f.syn.gold, default_cutoffs()));
}

}  // namespace

BENCHMARK(BM_CorpusLinesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorpusLines)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Train)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NearestSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Nearest)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TopnHitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopnHit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
