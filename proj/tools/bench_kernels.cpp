// Copyright 2026 The pscd Authors
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

// Serial reference vs OpenMP kernels. Both paths produce identical bits; this
// only measures time.

#include <benchmark/benchmark.h>

#include "pscd/datasets.hpp"
#include "pscd/energy.hpp"
#include "pscd/eval.hpp"
#include "pscd/oracle.hpp"
#include "pscd/sampler.hpp"

namespace {

using namespace pscd;

PointSet points(std::size_t n) { return sample_dataset({DatasetName::MoG2D, {}, n, 1}); }

void BM_BatchEnergyGrads_Serial(benchmark::State& st) {
  const auto model = init_mlp({2, 128, 128, 1}, 1);
  const auto pts = points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::batch_energy_grads(model, pts));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_BatchEnergyGrads_OpenMP(benchmark::State& st) {
  const auto model = init_mlp({2, 128, 128, 1}, 1);
  const auto pts = points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(batch_energy_grads(model, pts));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

const LangevinConfig kChains{20, 0.1, 0.005, FixedUniformInit{}};

void BM_RunChains_Serial(benchmark::State& st) {
  const auto model = init_mlp({2, 32, 32, 1}, 2);
  const auto start = points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto s = start;
    serial::run_chains(model, s, kChains, 3);
    benchmark::DoNotOptimize(s);
  }
}

void BM_RunChains_OpenMP(benchmark::State& st) {
  const auto model = init_mlp({2, 32, 32, 1}, 2);
  const auto start = points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto s = start;
    run_chains(model, s, kChains, 3);
    benchmark::DoNotOptimize(s);
  }
}

void BM_Landscape_Serial(benchmark::State& st) {
  const auto p = DensitySpec::gaussian(0.5, 1.0);
  const auto mu = linspace(-4, 4, 41);
  const auto sigma = linspace(0.1, 3, 30);
  for (auto _ : st) benchmark::DoNotOptimize(serial::landscape_grid(p, mu, sigma, 1.0, {-40, 40, 2048}));
}

void BM_Landscape_OpenMP(benchmark::State& st) {
  const auto p = DensitySpec::gaussian(0.5, 1.0);
  const auto mu = linspace(-4, 4, 41);
  const auto sigma = linspace(0.1, 3, 30);
  for (auto _ : st) benchmark::DoNotOptimize(landscape_grid(p, mu, sigma, 1.0, {-40, 40, 2048}));
}

void BM_Mmd_Serial(benchmark::State& st) {
  const auto x = points(static_cast<std::size_t>(st.range(0)));
  const auto y = sample_dataset({DatasetName::Rings, {}, static_cast<std::size_t>(st.range(0)), 2});
  for (auto _ : st) benchmark::DoNotOptimize(serial::mmd(x, y));
}

void BM_Mmd_OpenMP(benchmark::State& st) {
  const auto x = points(static_cast<std::size_t>(st.range(0)));
  const auto y = sample_dataset({DatasetName::Rings, {}, static_cast<std::size_t>(st.range(0)), 2});
  for (auto _ : st) benchmark::DoNotOptimize(mmd(x, y));
}

}  // namespace

BENCHMARK(BM_BatchEnergyGrads_Serial)->Arg(1024)->Arg(8192);
BENCHMARK(BM_BatchEnergyGrads_OpenMP)->Arg(1024)->Arg(8192);
BENCHMARK(BM_RunChains_Serial)->Arg(512);
BENCHMARK(BM_RunChains_OpenMP)->Arg(512);
BENCHMARK(BM_Landscape_Serial);
BENCHMARK(BM_Landscape_OpenMP);
BENCHMARK(BM_Mmd_Serial)->Arg(1000);
BENCHMARK(BM_Mmd_OpenMP)->Arg(1000);

BENCHMARK_MAIN();
