// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ircnn/model.hpp"
#include "ircnn/parallel.hpp"
#include "ircnn/rng.hpp"

namespace {

ircnn::Tensor random_batch(std::int64_t n, std::uint64_t seed) {
  ircnn::Tensor t(ircnn::Shape{n, 3, 32, 32});
  ircnn::Rng rng(seed);
  for (std::int64_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<float>(rng.uniform(-0.5, 0.5));
  return t;
}

void BM_ModelForward(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ircnn::set_threads(static_cast<int>(state.range(1)));
  const auto model = ircnn::model_init(ircnn::kDefaultWidths, 1);
  const auto x = random_batch(batch, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ircnn::model_forward(model, x));
  }
  ircnn::set_threads(1);
}
BENCHMARK(BM_ModelForward)->Args({1, 1})->Args({256, 1})->Args({256, 2})->Unit(benchmark::kMillisecond);

// One full training step: forward with cache, loss, backward.
void BM_ModelTrainStep(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ircnn::set_threads(static_cast<int>(state.range(1)));
  const auto model = ircnn::model_init(ircnn::kDefaultWidths, 1);
  const auto noisy = random_batch(batch, 2);
  const auto clean = random_batch(batch, 3);
  ircnn::ForwardCache cache;
  for (auto _ : state) {
    const auto out = ircnn::model_forward_cached(model, noisy, cache);
    const auto mse = ircnn::mse_loss(out, clean);
    benchmark::DoNotOptimize(ircnn::model_backward(model, cache, mse.grad));
  }
  state.counters["patch/s"] = benchmark::Counter(
      static_cast<double>(batch) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
  ircnn::set_threads(1);
}
BENCHMARK(BM_ModelTrainStep)->Args({256, 1})->Args({256, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
