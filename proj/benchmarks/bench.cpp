// Copyright 2026 The parafilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "parafilter/lexical_tm.hpp"
#include "parafilter/ngram_lm.hpp"
#include "parafilter/random.hpp"
#include "parafilter/scoring.hpp"
#include "parafilter/selection.hpp"
#include "parafilter/synthetic.hpp"

namespace {

using namespace parafilter;

const SyntheticBitext& generator() {
  static const SyntheticBitext gen;
  return gen;
}

std::vector<Sentence> targets(std::size_t n, std::uint64_t seed) {
  std::vector<Sentence> out;
  for (auto& p : generator().pairs(n, seed)) out.push_back(std::move(p.tgt));
  return out;
}

void BM_ScoreAlgebra(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> h(4096);
  for (auto& v : h) v = 10.0 * uniform_unit(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    const double adq = adequacy(h[i & 4095], h[(i + 1) & 4095]);
    const double dom = domain_score(h[(i + 2) & 4095], h[(i + 3) & 4095]);
    benchmark::DoNotOptimize(combined_score(adq, dom, false));
    ++i;
  }
}
BENCHMARK(BM_ScoreAlgebra);

void BM_LmCrossEntropy(benchmark::State& state) {
  NgramOptions o;
  o.order = static_cast<int>(state.range(0));
  const auto lm = train_ngram(targets(20000, 2), o);
  const auto test = targets(1000, 3);
  std::size_t i = 0, tokens = 0;
  for (auto _ : state) {
    const auto& s = test[i++ % test.size()];
    tokens += s.tokens.size();
    benchmark::DoNotOptimize(cross_entropy(lm, s));
  }
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_LmCrossEntropy)->Arg(2)->Arg(3);

void BM_LmTrain(benchmark::State& state) {
  const auto text = targets(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(train_ngram(text, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LmTrain)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Model1Train(benchmark::State& state) {
  const auto pairs = generator().pairs(static_cast<std::size_t>(state.range(0)), 5);
  Model1Options o;
  o.min_gain_per_pair = 0;
  for (auto _ : state) benchmark::DoNotOptimize(train_model1(pairs, o).trace);
  state.SetItemsProcessed(state.iterations() * state.range(0) * o.iterations);
}
BENCHMARK(BM_Model1Train)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Model1Score(benchmark::State& state) {
  const auto tm = train_model1(generator().pairs(5000, 6), {}).model;
  const auto test = generator().pairs(1000, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = test[i++ % test.size()];
    benchmark::DoNotOptimize(cond_cross_entropy(tm, p.src, p.tgt));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Model1Score);

void BM_ExternalSort(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto budget = static_cast<std::size_t>(state.range(1));
  Rng rng(8);
  std::vector<RankKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = {uniform_unit(rng), i};
  for (auto _ : state) {
    ExternalSorter sorter(budget);
    for (const auto& k : keys) sorter.add(k);
    std::uint64_t acc = 0;
    sorter.for_each([&](const RankKey& k) {
      acc += k.id;
      return true;
    });
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExternalSort)
    ->Args({1 << 20, std::int64_t{1} << 30})  // in memory
    ->Args({1 << 20, 1 << 20})                // 16 spilled runs
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
