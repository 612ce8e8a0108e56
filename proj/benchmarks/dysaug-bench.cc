// benchmarks/dysaug-bench.cc

// Copyright 2026  The dysaug Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "dysaug/speed.h"
#include "dysaug/stft.h"
#include "dysaug/vtlp.h"
#include "dysaug/wsola.h"

namespace {

dysaug::AudioBuffer Noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> x(n);
  for (double &v : x) v = u(rng);
  return dysaug::AudioBuffer(std::move(x), 16000);
}

void BM_StftRoundTrip(benchmark::State &state) {
  auto x = Noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dysaug::Istft(dysaug::Stft(x)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StftRoundTrip)->Arg(16000)->Arg(80000);

void BM_Vtlp(benchmark::State &state) {
  auto x = Noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dysaug::VtlpPerturb(x, {1.1, 4800.0}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Vtlp)->Arg(16000)->Arg(80000);

void BM_Tempo(benchmark::State &state) {
  auto x = Noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dysaug::TempoPerturb(x, {0.9}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tempo)->Arg(16000)->Arg(80000);

void BM_Speed(benchmark::State &state) {
  auto x = Noise(16000);
  const double alpha = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(dysaug::SpeedPerturb(x, {alpha}));
  state.SetItemsProcessed(state.iterations() * 16000);
}
BENCHMARK(BM_Speed)->Arg(90)->Arg(110);

}  // namespace

BENCHMARK_MAIN();
