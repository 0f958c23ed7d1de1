// Copyright 2026 The bayesex Authors.
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

#include <random>

#include "bayesex/harness.hpp"
#include "support/instances.hpp"

namespace {

using namespace bayesex;
using namespace bayesex::testing;

UtilityStructure sized(std::size_t actions, std::size_t states) {
  std::mt19937_64 gen(actions * 31 + states);
  RandomSpec spec;
  spec.max_agents = 1;
  spec.min_actions = spec.max_actions = actions;
  spec.min_states = spec.max_states = states;
  return random_instance(gen, spec);
}

void BM_OptimalPolicy(benchmark::State& state) {
  const auto g = sized(state.range(0), state.range(1));
  const SignalStructure s = all_info(g, std::vector<std::vector<std::size_t>>(
                                            g.num_states(), {0, 1}));
  for (auto _ : state) benchmark::DoNotOptimize(optimal_policy(g, s, 0));
}
BENCHMARK(BM_OptimalPolicy)->Args({2, 4})->Args({3, 4})->Args({4, 6});

void BM_ExplorableSet(benchmark::State& state) {
  const auto g = sized(state.range(0), state.range(1));
  const SignalStructure s = all_info(g, std::vector<std::vector<std::size_t>>(
                                            g.num_states(), {0}));
  for (auto _ : state) benchmark::DoNotOptimize(explorable_set(g, s, 0));
}
BENCHMARK(BM_ExplorableSet)->Args({2, 4})->Args({3, 4})->Args({4, 6});

void BM_PlanIndMax(benchmark::State& state) {
  const auto g = sized(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(plan_ind_max(g));
}
BENCHMARK(BM_PlanIndMax)->Args({2, 4})->Args({3, 4});

void BM_DeterministicEpisode(benchmark::State& state) {
  const UtilityStructure g = kp();
  const DeterministicPipeline p(g, static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(p.run(++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DeterministicEpisode)->Arg(1000)->Arg(10000);

void BM_NoisyEpisode(benchmark::State& state) {
  const UtilityStructure g = kp();
  const StochasticPipeline p(g, NoiseModel{NoiseModel::Kind::kBernoulli},
                             static_cast<std::size_t>(state.range(0)), Rational(1, 8));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(p.run(++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NoisyEpisode)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
