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

#include <random>

#include "pedforce/forces.hpp"

using namespace pedforce;

namespace
{

SceneFrame crowd(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  SceneFrame s;
  for (std::size_t i = 0; i < n; ++i) {
    s.pedestrians.push_back({static_cast<std::int64_t>(i), {u(rng), u(rng)}, {1.0, 0.0}, std::nullopt});
  }
  s.robot = make_robot_state(RobotType::Go1, {0.0, 0.5}, {0.6, 0.0});
  s.obstacles.segments = {{{-10, -9}, {10, -9}}, {{-10, 9}, {10, 9}}};
  return s;
}

void BM_TotalForce(benchmark::State & state)
{
  const auto scene = crowd(static_cast<std::size_t>(state.range(0)), 1);
  PedestrianAgent a;
  a.id = 0;
  a.position = scene.pedestrians[0].position;
  a.velocity = {1.0, 0.0};
  a.goal = {20.0, 0.0};
  a.behavior_mode = BehaviorLabel::Avoidance;
  const SfmParams p;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(total_force(a, scene, p, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TotalForce)->Arg(8)->Arg(64)->Arg(256);

void BM_ObstacleRepulsion(benchmark::State & state)
{
  ObstacleSet obs;
  for (int i = 0; i < state.range(0); ++i) {
    obs.segments.push_back({{static_cast<double>(i), 2.0}, {static_cast<double>(i) + 0.8, 2.5}});
  }
  const SfmParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(obstacle_repulsion({3.0, 0.0}, obs, p));
  }
}
BENCHMARK(BM_ObstacleRepulsion)->Arg(4)->Arg(64);

}  // namespace
