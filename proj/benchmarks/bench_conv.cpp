// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ircnn/nn.hpp"
#include "ircnn/parallel.hpp"
#include "ircnn/rng.hpp"

namespace {

ircnn::Tensor random_tensor(ircnn::Shape shape, std::uint64_t seed) {
  ircnn::Tensor t(shape);
  ircnn::Rng rng(seed);
  for (std::int64_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<float>(rng.uniform(-0.5, 0.5));
  return t;
}

ircnn::ConvLayer random_layer(std::int64_t out_c, std::int64_t in_c,
                              std::int64_t k, std::uint64_t seed) {
  auto layer = ircnn::make_conv_layer<float>(out_c, in_c, k);
  ircnn::Rng rng(seed);
  for (std::int64_t i = 0; i < layer.weights.size(); ++i)
    layer.weights[i] = static_cast<float>(rng.normal() * 0.05);
  return layer;
}

// batch x (64 -> 64) 5x5 on 32x32: the dominant layer shape in training
void BM_ConvForward5x5(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ircnn::set_threads(static_cast<int>(state.range(1)));
  const auto x = random_tensor({batch, 64, 32, 32}, 1);
  const auto layer = random_layer(64, 64, 5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ircnn::conv_forward(x, layer));
  }
  const double macs = static_cast<double>(batch) * 64 * 64 * 25 * 32 * 32;
  state.counters["GFLOP/s"] = benchmark::Counter(
      2 * macs * static_cast<double>(state.iterations()) * 1e-9,
      benchmark::Counter::kIsRate);
  ircnn::set_threads(1);
}
BENCHMARK(BM_ConvForward5x5)->Args({32, 1})->Args({256, 1})->Args({256, 2})->Unit(benchmark::kMillisecond);

void BM_ConvForward1x1(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  const auto x = random_tensor({batch, 64, 32, 32}, 1);
  const auto layer = random_layer(64, 64, 1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ircnn::conv_forward(x, layer));
  }
  const double macs = static_cast<double>(batch) * 64 * 64 * 32 * 32;
  state.counters["GFLOP/s"] = benchmark::Counter(
      2 * macs * static_cast<double>(state.iterations()) * 1e-9,
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ConvForward1x1)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ConvBackward5x5(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ircnn::set_threads(static_cast<int>(state.range(1)));
  const auto x = random_tensor({batch, 64, 32, 32}, 1);
  const auto layer = random_layer(64, 64, 5, 2);
  const auto g = random_tensor({batch, 64, 32, 32}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ircnn::conv_backward(x, layer, g, true));
  }
  const double macs = 2.0 * static_cast<double>(batch) * 64 * 64 * 25 * 32 * 32;
  state.counters["GFLOP/s"] = benchmark::Counter(
      2 * macs * static_cast<double>(state.iterations()) * 1e-9,
      benchmark::Counter::kIsRate);
  ircnn::set_threads(1);
}
BENCHMARK(BM_ConvBackward5x5)->Args({32, 1})->Args({256, 1})->Args({256, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
