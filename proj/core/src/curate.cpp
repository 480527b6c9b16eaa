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

#include "pedforce/curate.hpp"

#include <limits>
#include <string>

#include "pedforce/error.hpp"
#include "pedforce/neural_forces.hpp"

namespace pedforce
{

void CurationRules::validate() const
{
  if (!(straightness > 0.0 && straightness <= 1.0)) {
    throw Error("straightness must lie in (0, 1]");
  }
  if (!(goal_clearance > 0.0) || !(obstacle_distance > 0.0) || !(pedestrian_distance > 0.0) ||
      !(robot_distance > 0.0) || !(speed_cap > 0.0)) {
    throw Error("curation distances and speed_cap must be positive");
  }
}

std::span<const ParamField<CurationRules>> curation_rules_fields()
{
  static const std::array<ParamField<CurationRules>, 7> fields{{
    {"straightness", &CurationRules::straightness, "minimum net/arc ratio of Goal trajectories"},
    {"goal_clearance", &CurationRules::goal_clearance, "no neighbour or robot within this for Goal samples [m]"},
    {"obstacle_distance", &CurationRules::obstacle_distance, "Obstacle samples below this wall distance [m]"},
    {"pedestrian_distance", &CurationRules::pedestrian_distance, "Pedestrian samples below this distance [m]"},
    {"robot_distance", &CurationRules::robot_distance, "Robot samples below this distance [m]"},
    {"curation_speed_cap", &CurationRules::speed_cap, "skip steps whose speed reached this [m/s]"},
    {"max_samples_per_network", &CurationRules::max_samples_per_network, "thin each network's samples (0 keeps all)"},
  }};
  return fields;
}

CurationResult curate(
  const CurationInput & input, const SfmParams & params, const CurationRules & rules, bool require_every_network)
{
  rules.validate();
  auto p = params;
  p.noise_std = 0.0;

  std::map<std::int64_t, SceneFrame> scenes;
  for (const auto & s : input.scenes) {
    auto copy = s;
    for (auto & ped : copy.pedestrians) {
      if (const auto g = input.groups.find(ped.id); g != input.groups.end()) {
        ped.group_id = g->second;
      }
    }
    scenes.emplace(s.frame_index, std::move(copy));
  }

  CurationResult out;
  std::array<std::vector<TrainingSample>, kNetworkCount> per_net;
  const auto emit = [&](NetworkId id, std::vector<double> in, const Vec2 & target) {
    per_net[static_cast<std::size_t>(id)].push_back({id, std::move(in), target});
  };

  for (const auto & traj : input.trajectories) {
    const auto label_it = input.labels.find(traj.pedestrian_id);
    const auto label = label_it == input.labels.end() ? BehaviorLabel::Neutral : label_it->second;
    if (label == BehaviorLabel::Attraction) {
      ++out.excluded_trajectories;
      continue;
    }
    if (traj.size() < 3) {
      continue;
    }
    const auto goal_it = input.goals.find(traj.pedestrian_id);
    const Vec2 goal = goal_it == input.goals.end() ? traj.back().position : goal_it->second;
    const auto group_it = input.groups.find(traj.pedestrian_id);
    const double arc = arc_length(traj);
    const bool straight = arc > 0.0 && net_displacement(traj) / arc > rules.straightness;

    for (std::size_t t = 1; t + 1 < traj.size(); ++t) {
      const auto & f0 = traj.frames[t - 1];
      const auto & f1 = traj.frames[t];
      const auto & f2 = traj.frames[t + 1];
      if (f1.frame_index != f0.frame_index + 1 || f2.frame_index != f1.frame_index + 1) {
        continue;
      }
      const auto scene_it = scenes.find(f1.frame_index);
      if (scene_it == scenes.end()) {
        continue;
      }
      const auto & scene = scene_it->second;
      const double dt = f2.timestamp - f1.timestamp;
      const Vec2 v = (f1.position - f0.position) / (f1.timestamp - f0.timestamp);
      const Vec2 v_next = (f2.position - f1.position) / dt;
      if (v_next.norm() >= rules.speed_cap - 1e-9) {
        ++out.capped_steps;
        continue;
      }
      const Vec2 accel = (v_next - v) / dt;

      PedestrianAgent agent;
      agent.id = traj.pedestrian_id;
      agent.position = f1.position;
      agent.velocity = v;
      agent.goal = goal;
      if (group_it != input.groups.end()) {
        agent.group_id = group_it->second;
      }
      agent.behavior_mode = label;
      const auto fb = total_force(agent, scene, p, 0);
      const Vec2 x = f1.position;

      // nearest neighbours
      double nearest_any = std::numeric_limits<double>::infinity();
      const PedestrianState * nearest_seen = nullptr;
      double nearest_seen_d = std::numeric_limits<double>::infinity();
      for (const auto & o : scene.pedestrians) {
        if (o.id == agent.id) {
          continue;
        }
        const double b = distance(x, o.position);
        nearest_any = std::min(nearest_any, b);
        if (b >= 1e-6 && b < nearest_seen_d && in_field_of_view(x, v, o.position, p)) {
          nearest_seen_d = b;
          nearest_seen = &o;
        }
      }
      const double robot_d = scene.robot ? distance(x, scene.robot->position) : std::numeric_limits<double>::infinity();

      if (straight && nearest_any >= rules.goal_clearance && robot_d >= rules.goal_clearance) {
        emit(NetworkId::Goal, goal_input(v, x, goal), accel - (fb.total - fb.f_a));
      }
      if (!scene.obstacles.empty()) {
        const auto c = nearest_obstacle_point(x, scene.obstacles);
        if (c.distance < rules.obstacle_distance && c.distance >= 1e-6) {
          const Vec2 own = point_obstacle_repulsion(x, c.point, p);
          emit(NetworkId::Obstacle, obstacle_input(x, c.point), accel - (fb.total - own));
        }
      }
      if (scene.robot && label == BehaviorLabel::Neutral && robot_d < rules.obstacle_distance && robot_d >= 1e-6) {
        emit(NetworkId::Obstacle, obstacle_input(x, scene.robot->position), accel - (fb.total - fb.f_r));
      }
      if (nearest_seen && nearest_seen_d < rules.pedestrian_distance) {
        const Vec2 own = pair_repulsion(x, nearest_seen->position, 1.0, p);
        emit(NetworkId::Pedestrian, pedestrian_input(v, x, nearest_seen->position), accel - (fb.total - own));
      }
      if (scene.robot && label == BehaviorLabel::Avoidance && robot_d < rules.robot_distance) {
        emit(NetworkId::Robot, robot_input(x, *scene.robot), accel - (fb.total - fb.f_r));
      }
      const auto peers = group_peers(agent, scene);
      if (const auto in = group_input(x, v, goal, peers)) {
        emit(NetworkId::Group, *in, accel - (fb.total - fb.f_gr));
      }
    }
  }

  for (std::size_t n = 0; n < kNetworkCount; ++n) {
    auto & set = per_net[n];
    if (set.empty() && require_every_network) {
      throw Error(
        "curation selected no samples for network '" + std::string(to_string(static_cast<NetworkId>(n))) + "'");
    }
    const auto cap = rules.max_samples_per_network;
    if (cap > 0 && set.size() > cap) {
      std::vector<TrainingSample> thinned;
      thinned.reserve(cap);
      for (std::size_t i = 0; i < cap; ++i) {
        thinned.push_back(std::move(set[i * set.size() / cap]));
      }
      set = std::move(thinned);
    }
    out.counts[n] = set.size();
    for (auto & s : set) {
      out.samples.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace pedforce
