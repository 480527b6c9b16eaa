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

#include "pedforce/behavior.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pedforce/error.hpp"

namespace pedforce
{

void ClassifierParams::validate() const
{
  if (!(cone_half_angle > 0.0 && cone_half_angle < std::numbers::pi / 2.0)) {
    throw Error("cone_half_angle must lie in (0, pi/2)");
  }
  if (!(deviation_threshold > 0.0) || !(zone_radius > 0.0) || !(attraction_duration > 0.0)) {
    throw Error("deviation_threshold, zone_radius and attraction_duration must be positive");
  }
  if (heading_lookback == 0 || min_attraction_run == 0 || !(avoidance_fraction > 0.0)) {
    throw Error("heading_lookback, min_attraction_run and avoidance_fraction must be positive");
  }
}

std::span<const ParamField<ClassifierParams>> classifier_param_fields()
{
  static const std::array<ParamField<ClassifierParams>, 7> fields{{
    {"cone_half_angle", &ClassifierParams::cone_half_angle, "attraction cone half angle [rad]"},
    {"deviation_threshold", &ClassifierParams::deviation_threshold, "avoidance heading deviation [rad]"},
    {"zone_radius", &ClassifierParams::zone_radius, "robot zone of influence [m]"},
    {"attraction_duration", &ClassifierParams::attraction_duration, "goal switch duration [s]"},
    {"heading_lookback", &ClassifierParams::heading_lookback, "frames between past and current heading"},
    {"min_attraction_run", &ClassifierParams::min_attraction_run,
     "consecutive Attraction steps for an Attraction trajectory"},
    {"avoidance_fraction", &ClassifierParams::avoidance_fraction,
     "fraction of in-zone Avoidance steps for an Avoidance trajectory"},
  }};
  return fields;
}

std::optional<double> heading_from_velocity(const Vec2 & velocity)
{
  if (velocity.norm() <= kMinHeadingSpeed) {
    return std::nullopt;
  }
  return heading_of(velocity);
}

BehaviorLabel classify_step(
  const Vec2 & position, std::optional<double> heading, std::optional<double> past_heading,
  const Vec2 & robot_position, const ClassifierParams & params)
{
  const Vec2 to_robot = robot_position - position;
  if (to_robot.norm() > params.zone_radius || !heading) {
    return BehaviorLabel::Neutral;
  }
  if (to_robot.norm() <= kMinNormalizable) {
    return BehaviorLabel::Attraction;
  }
  const double bearing = heading_of(to_robot);
  const double off_now = std::abs(wrap_angle(*heading - bearing));
  if (off_now <= params.cone_half_angle) {
    return BehaviorLabel::Attraction;
  }
  if (past_heading) {
    const double off_past = std::abs(wrap_angle(*past_heading - bearing));
    if (off_now - off_past > params.deviation_threshold) {
      return BehaviorLabel::Avoidance;
    }
  }
  return BehaviorLabel::Neutral;
}

TrajectoryClassification classify_trajectory(
  const Trajectory & traj, std::span<const std::optional<Vec2>> robot_track, const ClassifierParams & params)
{
  if (robot_track.size() != traj.size()) {
    throw Error("robot track is not aligned with the trajectory");
  }
  TrajectoryClassification out;
  out.interaction = std::any_of(robot_track.begin(), robot_track.end(), [](const auto & r) { return r.has_value(); });
  if (!out.interaction || traj.size() < 2) {
    return out;
  }
  const auto velocities = finite_difference_velocity(traj);
  std::size_t run = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto & robot = robot_track[i];
    if (!robot || distance(*robot, traj.frames[i].position) > params.zone_radius) {
      run = 0;
      continue;
    }
    ++out.in_zone_steps;
    const auto heading = heading_from_velocity(velocities[i]);
    const auto past =
      i >= params.heading_lookback ? heading_from_velocity(velocities[i - params.heading_lookback]) : std::nullopt;
    const auto label = classify_step(traj.frames[i].position, heading, past, *robot, params);
    if (label == BehaviorLabel::Attraction) {
      ++out.attraction_steps;
      out.longest_attraction_run = std::max(out.longest_attraction_run, ++run);
    } else {
      run = 0;
      if (label == BehaviorLabel::Avoidance) {
        ++out.avoidance_steps;
      }
    }
  }
  if (out.longest_attraction_run >= params.min_attraction_run) {
    out.label = BehaviorLabel::Attraction;
  } else if (
    out.avoidance_steps > 0 &&
    static_cast<double>(out.avoidance_steps) >= params.avoidance_fraction * static_cast<double>(out.in_zone_steps)) {
    out.label = BehaviorLabel::Avoidance;
  }
  return out;
}

PedestrianAgent update_goal_switch(
  PedestrianAgent agent, std::optional<Vec2> robot_position, BehaviorLabel label, double dt,
  const ClassifierParams & params)
{
  if (!(dt > 0.0)) {
    throw Error("update_goal_switch: dt must be positive");
  }
  if (agent.goal_switch_remaining > 0.0) {
    agent.goal_switch_remaining -= dt;
    if (agent.goal_switch_remaining <= 1e-9) {
      agent.goal_switch_remaining = 0.0;
      if (agent.saved_goal) {
        agent.goal = *agent.saved_goal;
      }
      agent.saved_goal.reset();
    } else if (robot_position) {
      agent.goal = *robot_position;
    }
    return agent;
  }
  if (label == BehaviorLabel::Attraction && robot_position && !agent.goal_switch_spent) {
    agent.saved_goal = agent.goal;
    agent.goal = *robot_position;
    agent.goal_switch_remaining = params.attraction_duration;
    agent.goal_switch_spent = true;
  }
  return agent;
}

}  // namespace pedforce
