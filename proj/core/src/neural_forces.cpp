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

#include "pedforce/neural_forces.hpp"

#include <fstream>
#include <string>

#include "pedforce/error.hpp"

namespace pedforce
{
namespace
{

Vec2 unit_or_zero(const Vec2 & v)
{
  const double n = v.norm();
  return n > kMinNormalizable ? v / n : Vec2{};
}

}  // namespace

std::vector<double> goal_input(const Vec2 & velocity, const Vec2 & position, const Vec2 & goal)
{
  const Vec2 to_goal = goal - position;
  const Vec2 e = to_goal.norm() <= 1e-9 ? Vec2{} : unit_or_zero(to_goal);
  return {velocity.x / kSpeedScale, velocity.y / kSpeedScale, e.x, e.y};
}

std::vector<double> obstacle_input(const Vec2 & position, const Vec2 & point)
{
  const Vec2 d = position - point;
  const Vec2 e = unit_or_zero(d);
  return {d.norm() / kDistanceScale, e.x, e.y};
}

std::vector<double> pedestrian_input(const Vec2 & velocity, const Vec2 & position, const Vec2 & other)
{
  const Vec2 d = position - other;
  const Vec2 e = unit_or_zero(d);
  return {velocity.x / kSpeedScale, velocity.y / kSpeedScale, d.norm() / kDistanceScale, e.x, e.y};
}

std::vector<double> robot_input(const Vec2 & position, const RobotState & robot)
{
  const Vec2 d = position - robot.position;
  const Vec2 e = d.norm() > kMinNormalizable ? d / d.norm() : Vec2{1.0, 0.0};
  return {d.norm() / kDistanceScale, robot.moving ? 1.0 : 0.0, e.x, e.y};
}

std::optional<std::vector<double>> group_input(
  const Vec2 & position, const Vec2 & velocity, const Vec2 & goal, std::span<const Vec2> peers)
{
  if (peers.empty()) {
    return std::nullopt;
  }
  Vec2 centroid = position;
  for (const auto & q : peers) {
    centroid += q;
  }
  centroid = centroid / static_cast<double>(peers.size() + 1);
  const Vec2 d = centroid - position;
  const Vec2 e = unit_or_zero(d);
  const Vec2 g = goal - position;
  const double aligned = g.norm() > 1e-9 ? dot(velocity, g / g.norm()) : 0.0;
  return std::vector<double>{aligned / kSpeedScale, d.norm() / kDistanceScale, e.x, e.y};
}

std::span<const ParamField<NeuralRanges>> neural_range_fields()
{
  static const std::array<ParamField<NeuralRanges>, 3> fields{{
    {"neural_pedestrian_range", &NeuralRanges::pedestrian, "Pedestrian net cutoff [m]"},
    {"neural_obstacle_range", &NeuralRanges::obstacle, "Obstacle net cutoff per segment [m]"},
    {"neural_robot_range", &NeuralRanges::robot, "Robot net cutoff [m]"},
  }};
  return fields;
}

void NeuralForceSet::set(NetworkWeights net)
{
  net.validate();
  const auto layout = layout_for(net.id);
  if (net.topology != layout.topology || net.split != layout.split || net.input_size() != layout.inputs) {
    throw Error("network does not match the layout of '" + std::string(to_string(net.id)) + "'");
  }
  const auto slot = static_cast<std::size_t>(net.id);
  nets_[slot] = std::move(net);
}

bool NeuralForceSet::has(NetworkId id) const { return nets_[static_cast<std::size_t>(id)].has_value(); }

const NetworkWeights & NeuralForceSet::get(NetworkId id) const
{
  const auto & slot = nets_[static_cast<std::size_t>(id)];
  if (!slot) {
    throw Error("missing network '" + std::string(to_string(id)) + "'");
  }
  return *slot;
}

bool NeuralForceSet::complete() const
{
  for (const auto & n : nets_) {
    if (!n) {
      return false;
    }
  }
  return true;
}

NeuralForceSet NeuralForceSet::load(const std::filesystem::path & dir)
{
  NeuralForceSet set;
  for (std::uint32_t i = 0; i < kNetworkCount; ++i) {
    const auto id = static_cast<NetworkId>(i);
    const auto path = dir / (std::string(to_string(id)) + ".nsw");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error("missing network '" + std::string(to_string(id)) + "' (" + path.string() + ")");
    }
    auto net = read_weights(in);
    if (net.id != id) {
      throw Error(path.string() + " holds network '" + std::string(to_string(net.id)) + "'");
    }
    set.set(std::move(net));
  }
  return set;
}

void NeuralForceSet::save(const std::filesystem::path & dir) const
{
  std::filesystem::create_directories(dir);
  for (const auto & n : nets_) {
    if (!n) {
      continue;
    }
    const auto path = dir / (std::string(to_string(n->id)) + ".nsw");
    std::ofstream out(path, std::ios::binary);
    write_weights(out, *n);
    if (!out) {
      throw Error("cannot write " + path.string());
    }
  }
}

ForceBreakdown compose_neural(
  const PedestrianAgent & agent, const SceneFrame & scene, const NeuralForceSet & nets, const NeuralRanges & ranges,
  double noise_std, std::uint64_t rng_seed, ForceTerms terms, const SfmParams & p)
{
  for (std::uint32_t i = 0; i < kNetworkCount; ++i) {
    nets.get(static_cast<NetworkId>(i));
  }
  ForceBreakdown fb;
  const bool switched = terms.behavior_routing && agent.behavior_mode == BehaviorLabel::Attraction &&
                        agent.goal_switch_remaining > 0.0 && scene.robot.has_value();
  const Vec2 goal = switched ? scene.robot->position : agent.goal;
  fb.f_a = forward(nets.get(NetworkId::Goal), goal_input(agent.velocity, agent.position, goal));

  const auto & obstacle_net = nets.get(NetworkId::Obstacle);
  for (const auto & s : scene.obstacles.segments) {
    const Vec2 c = closest_point_on_segment(agent.position, s);
    if (distance(agent.position, c) < ranges.obstacle) {
      fb.f_o += forward(obstacle_net, obstacle_input(agent.position, c));
    }
  }

  const auto & ped_net = nets.get(NetworkId::Pedestrian);
  for (const auto & o : scene.pedestrians) {
    if (o.id == agent.id) {
      continue;
    }
    const double b = distance(agent.position, o.position);
    if (b < 1e-6 || b >= ranges.pedestrian || !in_field_of_view(agent.position, agent.velocity, o.position, p)) {
      continue;
    }
    fb.f_p += forward(ped_net, pedestrian_input(agent.velocity, agent.position, o.position));
  }

  if (terms.robot && scene.robot) {
    const double b = distance(agent.position, scene.robot->position);
    if (!terms.behavior_routing || agent.behavior_mode == BehaviorLabel::Avoidance) {
      if (b < ranges.robot) {
        fb.f_r = forward(nets.get(NetworkId::Robot), robot_input(agent.position, *scene.robot));
      }
    } else if (!switched && b < ranges.obstacle && b >= 1e-6) {
      fb.f_r = forward(obstacle_net, obstacle_input(agent.position, scene.robot->position));
    }
  }

  if (terms.group) {
    const auto peers = group_peers(agent, scene);
    if (const auto in = group_input(agent.position, agent.velocity, goal, peers)) {
      fb.f_gr = forward(nets.get(NetworkId::Group), *in);
    }
  }
  fb.noise = sample_noise(rng_seed, noise_std);
  fb.sum_terms();
  return fb;
}

}  // namespace pedforce
