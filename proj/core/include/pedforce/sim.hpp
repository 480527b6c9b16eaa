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

#ifndef PEDFORCE_SIM_HPP_
#define PEDFORCE_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pedforce/behavior.hpp"
#include "pedforce/forces.hpp"
#include "pedforce/neural_forces.hpp"
#include "pedforce/params.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

/// Force model variants. Analytic is the full analytic composition (robot
/// routing, group cohesion, goal switching) used to generate synthetic data.
enum class ProviderTag
{
  SFM,
  SRFM,
  NeuRoSFM,
  NeuRoSFM_noRobot,
  NeuRoSFM_noGroup,
  Analytic,
};

std::string_view to_string(ProviderTag tag);
std::optional<ProviderTag> parse_provider_tag(std::string_view text);

struct ForceProvider
{
  ProviderTag tag = ProviderTag::SFM;
  SfmParams params;
  ClassifierParams classifier;
  std::shared_ptr<const NeuralForceSet> nets;  // required by the NeuRoSFM tags
  NeuralRanges ranges;

  bool is_neural() const;
  /// Whether Attraction-disposed agents switch their goal to the robot.
  bool uses_goal_switch() const;
  ForceTerms terms() const;
  /// Throws when a neural tag has no complete network set.
  void validate() const;

  ForceBreakdown force(const PedestrianAgent & agent, const SceneFrame & scene, std::uint64_t rng_seed) const;
};

struct RolloutConfig
{
  double dt = kFramePeriod;  // s
  std::size_t horizon = 60;  // frames
  double speed_cap = 2.7;    // m/s
  std::size_t samples_k = 20;
  std::size_t rng_seed = 42;

  void validate() const;
};

std::span<const ParamField<RolloutConfig>> rollout_config_fields();

/// Scripted robot path: one position per simulation step from the start; the
/// last position holds once the script runs out.
struct RobotTrack
{
  RobotType type = RobotType::Go1;
  std::vector<Vec2> positions;

  Vec2 position_at(std::size_t step) const;
  /// Forward difference; zero past the end of the script.
  Vec2 velocity_at(std::size_t step, double dt) const;
};

/// A constant-velocity track of `steps + 1` positions.
RobotTrack straight_track(RobotType type, const Vec2 & start, const Vec2 & velocity, std::size_t steps, double dt);

/// Simulation state. `replayed` pedestrians are not integrated; they appear in
/// the scene at their recorded position whenever their trajectory has a frame
/// with the current frame index.
struct World
{
  std::vector<PedestrianAgent> agents;
  std::vector<Trajectory> replayed;
  std::vector<std::optional<int>> replayed_groups;  // parallel to `replayed`, may be empty
  std::optional<RobotTrack> robot;
  ObstacleSet obstacles;
  std::int64_t start_frame = 0;
  double start_time = 0.0;
  std::size_t step = 0;
  /// Recent velocities per agent (newest last) for the classifier lookback.
  std::vector<std::vector<Vec2>> velocity_history;

  std::int64_t frame_index() const { return start_frame + static_cast<std::int64_t>(step); }
};

/// Snapshot of the world at its current step.
SceneFrame scene_of(const World & world, double dt);

/// Seed of the noise draw for one agent at one step.
std::uint64_t step_seed(std::uint64_t rollout_seed, std::size_t step, std::int64_t agent_id);

/// When the summed repulsion (walls, pedestrians, robot) opposes the velocity
/// to within kSidestepAngle, a push of kSidestepGain * |repulsion| to the
/// agent's right is added so that head-on encounters resolve deterministically.
inline constexpr double kSidestepAngle = 10.0 * std::numbers::pi / 180.0;  // rad
inline constexpr double kSidestepGain = 0.5;

/// One synchronous semi-implicit Euler step: forces for every agent from the
/// frozen current scene, then v' = clamp(v + F dt, speed_cap), x' = x + v' dt.
/// Attraction-disposed agents update their goal switch first when the
/// provider uses one. Throws naming the agent and term on a non-finite force.
/// Returns the scene after the step.
SceneFrame step(World & world, const ForceProvider & provider, const RolloutConfig & cfg);

struct Rollout
{
  std::vector<Trajectory> trajectories;  // one per agent, horizon + 1 frames
  std::vector<SceneFrame> scenes;        // horizon + 1 snapshots
};

/// `cfg.horizon` steps from `world` (copied). Deterministic given cfg.rng_seed.
Rollout rollout(World world, const ForceProvider & provider, const RolloutConfig & cfg);

/// Everything around the predicted pedestrian.
struct PredictionContext
{
  std::vector<Trajectory> neighbors;  // replayed by frame index
  std::optional<RobotTrack> robot;    // starts at the last prefix frame
  ObstacleSet obstacles;
  std::optional<Vec2> goal;           // overrides the extrapolated goal
  BehaviorLabel label = BehaviorLabel::Neutral;
  std::optional<int> group_id;
  std::vector<std::optional<int>> neighbor_groups;  // parallel to neighbors, may be empty
};

/// Minimum observed prefix for prediction.
inline constexpr std::size_t kMinPrefixFrames = 8;

/// Rolls the pedestrian forward from its last observed frame (velocity from
/// the last backward difference). Without a supplied goal, the goal is the
/// last position plus the mean prefix velocity times horizon * dt. Returns
/// horizon + 1 frames, the first being the last observation.
Trajectory predict(
  const Trajectory & prefix, const PredictionContext & context, const ForceProvider & provider,
  const RolloutConfig & cfg);

struct BestOfK
{
  Trajectory trajectory;
  double ade = 0.0;
  std::size_t sample = 0;  // index of the winning draw
};

/// cfg.samples_k predictions with seeds rng_seed + k; keeps the lowest ADE
/// against `ground_truth` (horizon + 1 frames aligned with the prediction).
BestOfK best_of_k(
  const Trajectory & prefix, const Trajectory & ground_truth, const PredictionContext & context,
  const ForceProvider & provider, const RolloutConfig & cfg);

}  // namespace pedforce

#endif  // PEDFORCE_SIM_HPP_
