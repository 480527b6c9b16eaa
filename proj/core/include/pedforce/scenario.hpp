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

#ifndef PEDFORCE_SCENARIO_HPP_
#define PEDFORCE_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pedforce/behavior.hpp"
#include "pedforce/forces.hpp"
#include "pedforce/ingest.hpp"
#include "pedforce/sim.hpp"

namespace pedforce
{

struct AgentSpec
{
  std::int64_t id = 0;
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  std::optional<int> group;
  BehaviorLabel behavior = BehaviorLabel::Neutral;  // disposition towards the robot
};

/// Robot moving at constant velocity (zero for a stationary robot).
struct RobotSpec
{
  RobotType type = RobotType::Go1;
  Vec2 position;
  Vec2 velocity;
};

struct ScenarioSpec
{
  std::string name = "scenario";
  std::size_t horizon = 150;  // frames
  std::vector<AgentSpec> agents;
  std::optional<RobotSpec> robot;
  ObstacleSet obstacles;

  /// Throws on duplicate agent ids or an empty agent list.
  void validate() const;
};

/// Reads the scenario file, a TOML subset:
///
///   name = "headon"
///   horizon = 90
///   [robot]
///   type = "go1"            # hsr | go1 | mpo700
///   position = [0.0, 0.0]
///   velocity = [0.0, 0.0]
///   [[agent]]
///   id = 1
///   position = [-5.0, 0.0]
///   velocity = [1.2, 0.0]
///   goal = [10.0, 0.0]
///   group = 1               # optional
///   behavior = "avoidance"  # attraction | neutral | avoidance
///   [[obstacle]]
///   a = [-10.0, 3.0]
///   b = [10.0, 3.0]
ScenarioSpec parse_scenario(std::istream & in);
void write_scenario(std::ostream & out, const ScenarioSpec & spec);

/// Initial world of a scenario; the robot track covers the horizon.
World make_world(const ScenarioSpec & spec, double dt = kFramePeriod);

enum class SceneKind
{
  NoRobot,
  StationaryRobot,
  MovingRobot,
};

/// Knobs of random_scenario.
struct ScenarioMix
{
  double avoidance = 0.7;  // disposition shares in robot scenes
  double neutral = 0.2;
  double attraction = 0.1;
  double wall_probability = 0.5;
  double group_probability = 0.4;
  std::size_t min_agents = 2;
  std::size_t max_agents = 5;
  std::size_t horizon = 150;
};

/// Corridor-like scene: agents cross along x in both directions, an optional
/// pair of walls at y = +-4 m, and a robot near the middle.
ScenarioSpec random_scenario(SceneKind kind, std::uint64_t seed, const ScenarioMix & mix = {});

struct SyntheticScene
{
  std::vector<Trajectory> trajectories;  // sorted by id
  std::vector<SceneFrame> scenes;
  std::map<std::int64_t, BehaviorLabel> labels;  // dispositions, robot scenes only
  std::map<std::int64_t, Vec2> goals;
  std::map<std::int64_t, int> groups;
  ObstacleSet obstacles;
  bool synthetic = true;
};

/// Rolls the scenario out under the full analytic model. Deterministic in
/// `rng_seed`; throws if a position diverges.
SyntheticScene synthesize(
  const SfmParams & params, const ScenarioSpec & spec, std::uint64_t rng_seed, const ClassifierParams & classifier = {});

/// Dataset records of a synthetic scene.
std::vector<DatasetRecord> to_records(const SyntheticScene & scene);

/// Side information that the record format cannot carry: wall segments, goals
/// and groups. Lines `obstacle,x1,y1,x2,y2` and `agent,ped_id,goal_x,goal_y,group`
/// (group NA when absent).
struct SceneMeta
{
  ObstacleSet obstacles;
  std::map<std::int64_t, Vec2> goals;
  std::map<std::int64_t, int> groups;
};

SceneMeta meta_of(const SyntheticScene & scene);
SceneMeta read_meta(std::istream & in);
void write_meta(std::ostream & out, const SceneMeta & meta);

}  // namespace pedforce

#endif  // PEDFORCE_SCENARIO_HPP_
