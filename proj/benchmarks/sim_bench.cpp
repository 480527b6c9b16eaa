// Copyright 2026 The pedforce Authors
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

#include "pedforce/scenario.hpp"
#include "pedforce/sim.hpp"

using namespace pedforce;

namespace
{

void BM_Step(benchmark::State & state)
{
  const auto spec = random_scenario(SceneKind::MovingRobot, 3);
  const auto world = make_world(spec);
  ForceProvider provider;
  provider.tag = state.range(0) ? ProviderTag::Analytic : ProviderTag::SFM;
  RolloutConfig cfg;
  for (auto _ : state) {
    state.PauseTiming();
    World w = world;
    state.ResumeTiming();
    benchmark::DoNotOptimize(step(w, provider, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(world.agents.size()));
}
BENCHMARK(BM_Step)->Arg(0)->Arg(1);

void BM_Rollout(benchmark::State & state)
{
  const auto spec = random_scenario(SceneKind::MovingRobot, 3);
  const auto world = make_world(spec);
  ForceProvider provider;
  provider.tag = ProviderTag::Analytic;
  RolloutConfig cfg;
  cfg.horizon = 150;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rollout(world, provider, cfg));
  }
}
BENCHMARK(BM_Rollout);

}  // namespace
