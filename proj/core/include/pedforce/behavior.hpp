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

#ifndef PEDFORCE_BEHAVIOR_HPP_
#define PEDFORCE_BEHAVIOR_HPP_

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "pedforce/forces.hpp"
#include "pedforce/params.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

struct ClassifierParams
{
  double cone_half_angle = 20.0 * std::numbers::pi / 180.0;     // rad, in (0, pi/2)
  double deviation_threshold = 10.0 * std::numbers::pi / 180.0;  // rad
  double zone_radius = 3.0;                                      // m
  double attraction_duration = 5.0;                              // s
  std::size_t heading_lookback = 8;                              // frames
  std::size_t min_attraction_run = 3;     // consecutive Attraction steps
  double avoidance_fraction = 0.10;       // of in-zone steps

  void validate() const;
};

std::span<const ParamField<ClassifierParams>> classifier_param_fields();

/// Speeds at or below this leave the heading undefined.
inline constexpr double kMinHeadingSpeed = 1e-6;

/// Heading of a velocity, or nullopt when the pedestrian is standing still.
std::optional<double> heading_from_velocity(const Vec2 & velocity);

/// Per-step label. Outside the zone, or with an undefined heading, the step is
/// Neutral. A robot bearing within +-cone_half_angle of the heading is
/// Attraction. Otherwise the step is Avoidance when the heading opened away
/// from the robot bearing by more than deviation_threshold relative to
/// `past_heading`, i.e.
///   |heading - bearing| - |past_heading - bearing| > deviation_threshold.
BehaviorLabel classify_step(
  const Vec2 & position, std::optional<double> heading, std::optional<double> past_heading,
  const Vec2 & robot_position, const ClassifierParams & params);

struct TrajectoryClassification
{
  BehaviorLabel label = BehaviorLabel::Neutral;
  bool interaction = false;  // false when the robot never appears
  std::size_t in_zone_steps = 0;
  std::size_t attraction_steps = 0;
  std::size_t avoidance_steps = 0;
  std::size_t longest_attraction_run = 0;
};

/// Aggregates per-step labels: Attraction on a run of at least
/// min_attraction_run consecutive Attraction steps, else Avoidance when
/// Avoidance steps make up at least avoidance_fraction of the in-zone steps,
/// else Neutral. `robot_track` holds the robot position per trajectory frame
/// (nullopt when absent) and must match the trajectory length.
TrajectoryClassification classify_trajectory(
  const Trajectory & traj, std::span<const std::optional<Vec2>> robot_track, const ClassifierParams & params);

/// Advances the attraction goal switch by one step of length `dt`.
/// An active switch counts down (tracking the robot) and restores the
/// original goal on expiry; otherwise a first Attraction label with a robot
/// present starts a switch of attraction_duration seconds.
PedestrianAgent update_goal_switch(
  PedestrianAgent agent, std::optional<Vec2> robot_position, BehaviorLabel label, double dt,
  const ClassifierParams & params);

}  // namespace pedforce

#endif  // PEDFORCE_BEHAVIOR_HPP_
