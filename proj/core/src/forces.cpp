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

#include "pedforce/forces.hpp"

#include <array>
#include <cmath>
#include <random>

#include "pedforce/error.hpp"

namespace pedforce
{

void SfmParams::validate() const
{
  if (!(relaxation_time > 0) || !(ped_range > 0) || !(obs_range > 0) || !(robot_range > 0) ||
      !(group_threshold > 0)) {
    throw Error("SfmParams: relaxation time and ranges must be positive");
  }
  if (!(robot_amplitude_moving >= robot_amplitude_stationary)) {
    throw Error("SfmParams: robot_amplitude_moving must be >= robot_amplitude_stationary");
  }
  if (!(fov_weight >= 0.0 && fov_weight <= 1.0)) {
    throw Error("SfmParams: fov_weight must lie in [0, 1]");
  }
  if (!(noise_std >= 0.0) || !(desired_speed >= 0.0)) {
    throw Error("SfmParams: desired_speed and noise_std must be non-negative");
  }
}

std::span<const ParamField<SfmParams>> sfm_param_fields()
{
  static const std::array<ParamField<SfmParams>, 14> fields{{
    {"relaxation_time", &SfmParams::relaxation_time, "velocity relaxation time [s]"},
    {"desired_speed", &SfmParams::desired_speed, "desired walking speed [m/s]"},
    {"ped_amplitude", &SfmParams::ped_amplitude, "pedestrian potential amplitude [m^2/s^2]"},
    {"ped_range", &SfmParams::ped_range, "pedestrian potential range [m]"},
    {"obs_amplitude", &SfmParams::obs_amplitude, "wall potential amplitude [m^2/s^2]"},
    {"obs_range", &SfmParams::obs_range, "wall potential range [m]"},
    {"robot_amplitude_stationary", &SfmParams::robot_amplitude_stationary,
     "stationary robot force amplitude [m/s^2]"},
    {"robot_amplitude_moving", &SfmParams::robot_amplitude_moving, "moving robot force amplitude [m/s^2]"},
    {"robot_range", &SfmParams::robot_range, "robot potential range [m]"},
    {"fov_half_angle", &SfmParams::fov_half_angle, "field-of-view half angle [rad]"},
    {"fov_weight", &SfmParams::fov_weight, "weight of neighbours outside the field of view"},
    {"group_threshold", &SfmParams::group_threshold, "group cohesion dead-zone radius [m]"},
    {"group_gain", &SfmParams::group_gain, "group cohesion gain [1/s^2]"},
    {"noise_std", &SfmParams::noise_std, "per-axis force noise std [m/s^2]"},
  }};
  return fields;
}

SfmParams load_sfm_params(std::istream & in)
{
  SfmParams p;
  apply_key_values(p, sfm_param_fields(), parse_key_values(in));
  p.validate();
  return p;
}

Vec2 goal_force(const Vec2 & position, const Vec2 & velocity, const Vec2 & goal, const SfmParams & p)
{
  const Vec2 to_goal = goal - position;
  if (to_goal.norm() <= 1e-9) {
    return -velocity / p.relaxation_time;
  }
  const Vec2 desired = normalize(to_goal) * p.desired_speed;
  return (desired - velocity) / p.relaxation_time;
}

Vec2 goal_force(const PedestrianAgent & agent, const SfmParams & p)
{
  return goal_force(agent.position, agent.velocity, agent.goal, p);
}

bool in_field_of_view(const Vec2 & position, const Vec2 & velocity, const Vec2 & other, const SfmParams & p)
{
  const Vec2 to_other = other - position;
  if (velocity.norm() <= kMinNormalizable || to_other.norm() <= kMinNormalizable) {
    return true;
  }
  const double angle = std::abs(wrap_angle(heading_of(to_other) - heading_of(velocity)));
  return angle <= p.fov_half_angle;
}

double pair_potential(const Vec2 & position, const Vec2 & other, double weight, const SfmParams & p)
{
  return weight * p.ped_amplitude * std::exp(-distance(position, other) / p.ped_range);
}

Vec2 pair_repulsion(const Vec2 & position, const Vec2 & other, double weight, const SfmParams & p)
{
  const Vec2 diff = position - other;
  const double b = diff.norm();
  const double magnitude = weight * (p.ped_amplitude / p.ped_range) * std::exp(-b / p.ped_range);
  return diff * (magnitude / b);
}

Repulsion pedestrian_repulsion(
  const PedestrianAgent & agent, std::span<const PedestrianState> others, const SfmParams & p)
{
  Repulsion out;
  for (const auto & o : others) {
    if (o.id == agent.id) {
      continue;
    }
    if (distance(agent.position, o.position) < 1e-6) {
      ++out.skipped_pairs;
      continue;
    }
    const double w = in_field_of_view(agent.position, agent.velocity, o.position, p) ? 1.0 : p.fov_weight;
    out.force += pair_repulsion(agent.position, o.position, w, p);
  }
  return out;
}

double obstacle_potential(const Vec2 & position, const ObstacleSet & obstacles, const SfmParams & p)
{
  double total = 0.0;
  for (const auto & s : obstacles.segments) {
    total += p.obs_amplitude * std::exp(-distance(position, closest_point_on_segment(position, s)) / p.obs_range);
  }
  return total;
}

Vec2 point_obstacle_repulsion(const Vec2 & position, const Vec2 & point, const SfmParams & p)
{
  const Vec2 diff = position - point;
  const double b = diff.norm();
  if (b < 1e-6) {
    return {};
  }
  const double magnitude = (p.obs_amplitude / p.obs_range) * std::exp(-b / p.obs_range);
  return diff * (magnitude / b);
}

Vec2 obstacle_repulsion(const Vec2 & position, const ObstacleSet & obstacles, const SfmParams & p)
{
  Vec2 total;
  for (const auto & s : obstacles.segments) {
    total += point_obstacle_repulsion(position, closest_point_on_segment(position, s), p);
  }
  return total;
}

double robot_amplitude(const RobotState & robot, const SfmParams & p)
{
  return robot.moving ? p.robot_amplitude_moving : p.robot_amplitude_stationary;
}

double robot_potential(const Vec2 & position, const RobotState & robot, const SfmParams & p)
{
  return robot_amplitude(robot, p) * p.robot_range * std::exp(-distance(position, robot.position) / p.robot_range);
}

Vec2 robot_repulsion(const Vec2 & position, const RobotState & robot, const SfmParams & p)
{
  const double amplitude = robot_amplitude(robot, p);
  const Vec2 diff = position - robot.position;
  const double b = diff.norm();
  if (b < 1e-6) {
    const Vec2 dir = b > kMinNormalizable ? diff / b : Vec2{1.0, 0.0};
    return dir * amplitude;
  }
  return diff * (amplitude * std::exp(-b / p.robot_range) / b);
}

Vec2 group_force(const Vec2 & position, std::span<const Vec2> peers, const SfmParams & p)
{
  if (peers.empty()) {
    return {};
  }
  Vec2 centroid = position;
  for (const auto & q : peers) {
    centroid += q;
  }
  centroid = centroid / static_cast<double>(peers.size() + 1);
  const Vec2 d = centroid - position;
  const double dist = d.norm();
  if (dist <= p.group_threshold) {
    return {};
  }
  return d * (p.group_gain * (dist - p.group_threshold) / dist);
}

std::vector<Vec2> group_peers(const PedestrianAgent & agent, const SceneFrame & scene)
{
  std::vector<Vec2> peers;
  if (!agent.group_id) {
    return peers;
  }
  for (const auto & o : scene.pedestrians) {
    if (o.id != agent.id && o.group_id == agent.group_id) {
      peers.push_back(o.position);
    }
  }
  return peers;
}

Vec2 effective_goal(const PedestrianAgent & agent, const SceneFrame & scene)
{
  if (agent.behavior_mode == BehaviorLabel::Attraction && agent.goal_switch_remaining > 0.0 && scene.robot) {
    return scene.robot->position;
  }
  return agent.goal;
}

Vec2 sample_noise(std::uint64_t rng_seed, double stddev)
{
  if (stddev <= 0.0) {
    return {};
  }
  std::mt19937_64 gen(rng_seed);
  std::normal_distribution<double> normal(0.0, stddev);
  const double x = normal(gen);
  const double y = normal(gen);
  return {x, y};
}

ForceBreakdown total_force(
  const PedestrianAgent & agent, const SceneFrame & scene, const SfmParams & p, std::uint64_t rng_seed,
  ForceTerms terms)
{
  ForceBreakdown fb;
  const bool switched = terms.behavior_routing && agent.behavior_mode == BehaviorLabel::Attraction &&
                        agent.goal_switch_remaining > 0.0 && scene.robot.has_value();
  const Vec2 goal = switched ? scene.robot->position : agent.goal;
  fb.f_a = goal_force(agent.position, agent.velocity, goal, p);
  fb.f_o = obstacle_repulsion(agent.position, scene.obstacles, p);
  fb.f_p = pedestrian_repulsion(agent, scene.pedestrians, p).force;
  if (terms.robot && scene.robot) {
    if (!terms.behavior_routing || agent.behavior_mode == BehaviorLabel::Avoidance) {
      fb.f_r = robot_repulsion(agent.position, *scene.robot, p);
    } else if (!switched) {
      fb.f_r = point_obstacle_repulsion(agent.position, scene.robot->position, p);
    }
  }
  if (terms.group) {
    fb.f_gr = group_force(agent.position, group_peers(agent, scene), p);
  }
  fb.noise = sample_noise(rng_seed, p.noise_std);
  fb.sum_terms();
  return fb;
}

}  // namespace pedforce
