// Copyright 2026 The mvspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "mvspec/bootstrap.hpp"
#include "mvspec/empirical.hpp"
#include "mvspec/montecarlo.hpp"

namespace mvspec {
namespace {

std::vector<double> uniforms(std::size_t n) {
  RngStream rng(1);
  std::vector<double> u(n);
  for (double& v : u) v = rng.uniform();
  return u;
}

void BM_D2Norms(benchmark::State& state) {
  const auto u = uniforms(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(d2_norms(u, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_D2Norms)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oNSquared);

void BM_D1Stats(benchmark::State& state) {
  const auto u = uniforms(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(d1_stats(u));
}
BENCHMARK(BM_D1Stats)->Range(128, 4096);

void BM_EstimateLstar(benchmark::State& state) {
  RngStream rng(2);
  const SeriesMatrix y =
      dgp_simulate(DgpSpec::make(DgpId::C1, 0.0, static_cast<std::size_t>(state.range(0))), rng);
  const ModelFamily f = ModelFamily::parse("lstar2_normal", 2);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(f, y));
}
BENCHMARK(BM_EstimateLstar)->Arg(156)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BootstrapIidNormal(benchmark::State& state) {
  RngStream rng(3);
  const SeriesMatrix y = dgp_simulate(DgpSpec::make(DgpId::B1, 0.0, 100), rng);
  BootstrapConfig cfg;
  cfg.B = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bootstrap(ModelFamily::parse("h0b", 2), y, cfg));
  }
}
BENCHMARK(BM_BootstrapIidNormal)->Arg(99)->Unit(benchmark::kMillisecond);

void BM_BootstrapLstar(benchmark::State& state) {
  RngStream rng(4);
  const SeriesMatrix y = dgp_simulate(DgpSpec::make(DgpId::C1, 0.0, 156), rng);
  BootstrapConfig cfg;
  cfg.B = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bootstrap(ModelFamily::parse("h0nar", 2), y, cfg));
  }
}
BENCHMARK(BM_BootstrapLstar)->Arg(99)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mvspec

BENCHMARK_MAIN();
