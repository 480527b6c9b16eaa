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

#ifndef PEDFORCE_FORCES_HPP_
#define PEDFORCE_FORCES_HPP_

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>

#include "pedforce/params.hpp"
#include "pedforce/scene.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

/// Tunables of the analytic force model. Potentials are exponential in the
/// distance b: V(b) = A * range * exp(-b / range), so each force magnitude is
/// A * exp(-b / range) for robots and (A / range) * exp(-b / range) for
/// pedestrians and walls.
struct SfmParams
{
  double relaxation_time = 0.5;              // s
  double desired_speed = 1.34;               // m/s
  double ped_amplitude = 2.1;                // m^2/s^2
  double ped_range = 0.3;                    // m
  double obs_amplitude = 10.0;               // m^2/s^2
  double obs_range = 0.2;                    // m
  double robot_amplitude_stationary = 3.0;   // m/s^2
  double robot_amplitude_moving = 4.5;       // m/s^2
  double robot_range = 1.0;                  // m
  double fov_half_angle = 100.0 * std::numbers::pi / 180.0;
  double fov_weight = 0.5;                   // out-of-view down-weight
  double group_threshold = 1.5;              // m
  double group_gain = 1.0;                   // 1/s^2
  double noise_std = 0.05;                   // m/s^2 per axis

  void validate() const;
};

std::span<const ParamField<SfmParams>> sfm_param_fields();

/// Reads flat `key = value` lines over defaults; unknown keys are rejected.
SfmParams load_sfm_params(std::istream & in);

/// Dynamic state of one simulated pedestrian.
struct PedestrianAgent
{
  std::int64_t id = 0;
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  std::optional<int> group_id;
  BehaviorLabel behavior_mode = BehaviorLabel::Neutral;
  double goal_switch_remaining = 0.0;  // s
  std::optional<Vec2> saved_goal;      // original goal while switched
  bool goal_switch_spent = false;
};

/// Per-term forces. `total` is the left-to-right sum of the six terms.
struct ForceBreakdown
{
  Vec2 f_a;
  Vec2 f_o;
  Vec2 f_p;
  Vec2 f_r;
  Vec2 f_gr;
  Vec2 noise;
  Vec2 total;

  void sum_terms() { total = f_a + f_o + f_p + f_r + f_gr + noise; }
};

/// Which terms of the composition are active.
struct ForceTerms
{
  bool robot = true;
  bool group = true;
  /// Route the robot term by behavior mode. When false the robot always
  /// repels (classical robot-augmented model).
  bool behavior_routing = true;

  static constexpr ForceTerms classical() { return {false, false, false}; }
  static constexpr ForceTerms robot_augmented() { return {true, false, false}; }
  static constexpr ForceTerms full() { return {true, true, true}; }
};

/// Relaxation toward the desired velocity: (v_des * e_goal - v) / tau. At the
/// goal (distance <= 1e-9) only the braking term -v / tau remains.
Vec2 goal_force(const Vec2 & position, const Vec2 & velocity, const Vec2 & goal, const SfmParams & p);
Vec2 goal_force(const PedestrianAgent & agent, const SfmParams & p);

/// Whether `other` lies within the field of view around the heading of
/// `velocity`. A standing agent sees everything.
bool in_field_of_view(const Vec2 & position, const Vec2 & velocity, const Vec2 & other, const SfmParams & p);

struct Repulsion
{
  Vec2 force;
  int skipped_pairs = 0;  // coincident neighbours (distance < 1e-6)
};

/// Anisotropic exponential repulsion summed over `others`. Entries with the
/// agent's own id are ignored.
Repulsion pedestrian_repulsion(
  const PedestrianAgent & agent, std::span<const PedestrianState> others, const SfmParams & p);

/// Force from a single neighbour with perception weight `weight`.
Vec2 pair_repulsion(const Vec2 & position, const Vec2 & other, double weight, const SfmParams & p);

/// Exponential wall repulsion summed over every segment (closest point per
/// segment). Zero for an empty set.
Vec2 obstacle_repulsion(const Vec2 & position, const ObstacleSet & obstacles, const SfmParams & p);

/// Wall repulsion from a single point.
Vec2 point_obstacle_repulsion(const Vec2 & position, const Vec2 & point, const SfmParams & p);

/// Negative gradient of the robot potential; amplitude depends on whether the
/// robot moves. Within 1e-6 m the magnitude is capped at the amplitude.
Vec2 robot_repulsion(const Vec2 & position, const RobotState & robot, const SfmParams & p);

double robot_amplitude(const RobotState & robot, const SfmParams & p);

/// Cohesion toward the centroid of {agent} u peers: linear in the excess
/// distance beyond group_threshold, zero inside it.
Vec2 group_force(const Vec2 & position, std::span<const Vec2> peers, const SfmParams & p);

// Potentials whose negative gradients are the repulsive forces above.
double pair_potential(const Vec2 & position, const Vec2 & other, double weight, const SfmParams & p);
double obstacle_potential(const Vec2 & position, const ObstacleSet & obstacles, const SfmParams & p);
double robot_potential(const Vec2 & position, const RobotState & robot, const SfmParams & p);

/// Positions of same-group peers of `agent` in `scene`.
std::vector<Vec2> group_peers(const PedestrianAgent & agent, const SceneFrame & scene);

/// Full composition f_a + f_o + f_p + f_r + f_gr + noise with behavior-mode
/// routing of the robot term:
///  - Avoidance: robot repulsion;
///  - Neutral (and Attraction with no active goal switch): the robot is a
///    point obstacle;
///  - Attraction with an active goal switch: goal is the robot, f_r = 0.
/// Noise is N(0, noise_std^2) per axis drawn from `rng_seed`.
ForceBreakdown total_force(
  const PedestrianAgent & agent, const SceneFrame & scene, const SfmParams & p, std::uint64_t rng_seed,
  ForceTerms terms = ForceTerms::full());

/// Goal used for the attraction term, honouring an active goal switch.
Vec2 effective_goal(const PedestrianAgent & agent, const SceneFrame & scene);

/// Seeded Gaussian pair used as the noise term.
Vec2 sample_noise(std::uint64_t rng_seed, double stddev);

}  // namespace pedforce

#endif  // PEDFORCE_FORCES_HPP_
