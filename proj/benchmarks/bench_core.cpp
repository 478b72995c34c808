// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "hmrs/digits.hpp"
#include "hmrs/metrics.hpp"
#include "hmrs/search.hpp"
#include "hmrs/train.hpp"
#include "hmrs/transforms.hpp"

namespace {

const hmrs::Mlp& toy_model() {
  static const hmrs::Mlp model = [] {
    hmrs::TrainOptions opt;
    opt.epochs = 5;
    return hmrs::train_toy(hmrs::default_architecture(), hmrs::synthetic_digits(300, 1), opt);
  }();
  return model;
}

void BM_Forward(benchmark::State& state) {
  const hmrs::Dataset data = hmrs::synthetic_digits(64, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmrs::forward(toy_model(), data.images[i++ % data.size()]));
  }
}
BENCHMARK(BM_Forward);

void BM_Certainty(benchmark::State& state) {
  const hmrs::Dataset data = hmrs::synthetic_digits(64, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmrs::certainty(toy_model(), data.images[i % data.size()], 30, i));
    ++i;
  }
}
BENCHMARK(BM_Certainty);

void BM_ApplyChain(benchmark::State& state) {
  const hmrs::Dataset data = hmrs::synthetic_digits(64, 2);
  hmrs::Rng rng(3);
  hmrs::HmrChain chain;
  for (int k = 0; k < 3; ++k) chain.nodes.push_back(hmrs::sample_spec(std::nullopt, hmrs::BoundsTable::defaults(), rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hmrs::apply_chain(chain, data.images[i++ % data.size()]));
}
BENCHMARK(BM_ApplyChain);

void BM_NondominatedSort(benchmark::State& state) {
  hmrs::Rng rng(4);
  std::vector<hmrs::ObjectiveVector> pop;
  for (int i = 0; i < state.range(0); ++i) {
    pop.push_back({rng.uniform(), rng.uniform(), rng.uniform(), rng.bernoulli(0.8)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(hmrs::nondominated_sort(pop));
}
BENCHMARK(BM_NondominatedSort)->Arg(50)->Arg(100);

void BM_Evaluate(benchmark::State& state) {
  const hmrs::Dataset subset = hmrs::synthetic_digits(75, 5);
  const hmrs::Evaluator evaluator(toy_model(), subset, hmrs::CoverageConfig{}, hmrs::BoundsTable::defaults());
  hmrs::Rng rng(6);
  const hmrs::Individual ind = hmrs::random_individual(hmrs::SearchConfig{}, hmrs::BoundsTable::defaults(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate(ind));
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
