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

#include "pedforce/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pedforce/error.hpp"
#include "pedforce/eval.hpp"

namespace pedforce
{

std::string_view to_string(ProviderTag tag)
{
  switch (tag) {
    case ProviderTag::SFM:
      return "sfm";
    case ProviderTag::SRFM:
      return "srfm";
    case ProviderTag::NeuRoSFM:
      return "neurosfm";
    case ProviderTag::NeuRoSFM_noRobot:
      return "neurosfm-no-robot";
    case ProviderTag::NeuRoSFM_noGroup:
      return "neurosfm-no-group";
    case ProviderTag::Analytic:
      return "analytic";
  }
  return "sfm";
}

std::optional<ProviderTag> parse_provider_tag(std::string_view text)
{
  for (auto tag :
       {ProviderTag::SFM, ProviderTag::SRFM, ProviderTag::NeuRoSFM, ProviderTag::NeuRoSFM_noRobot,
        ProviderTag::NeuRoSFM_noGroup, ProviderTag::Analytic}) {
    if (to_string(tag) == text) {
      return tag;
    }
  }
  return std::nullopt;
}

bool ForceProvider::is_neural() const
{
  return tag == ProviderTag::NeuRoSFM || tag == ProviderTag::NeuRoSFM_noRobot ||
         tag == ProviderTag::NeuRoSFM_noGroup;
}

bool ForceProvider::uses_goal_switch() const { return is_neural() || tag == ProviderTag::Analytic; }

ForceTerms ForceProvider::terms() const
{
  switch (tag) {
    case ProviderTag::SFM:
      return ForceTerms::classical();
    case ProviderTag::SRFM:
      return ForceTerms::robot_augmented();
    case ProviderTag::NeuRoSFM_noRobot:
      return {false, true, true};
    case ProviderTag::NeuRoSFM_noGroup:
      return {true, false, true};
    case ProviderTag::NeuRoSFM:
    case ProviderTag::Analytic:
      break;
  }
  return ForceTerms::full();
}

void ForceProvider::validate() const
{
  params.validate();
  classifier.validate();
  if (is_neural()) {
    if (!nets) {
      throw Error("provider '" + std::string(to_string(tag)) + "' needs trained networks");
    }
    for (std::uint32_t i = 0; i < kNetworkCount; ++i) {
      nets->get(static_cast<NetworkId>(i));
    }
  }
}

ForceBreakdown ForceProvider::force(
  const PedestrianAgent & agent, const SceneFrame & scene, std::uint64_t rng_seed) const
{
  if (is_neural()) {
    if (!nets) {
      throw Error("provider '" + std::string(to_string(tag)) + "' needs trained networks");
    }
    return compose_neural(agent, scene, *nets, ranges, params.noise_std, rng_seed, terms(), params);
  }
  return total_force(agent, scene, params, rng_seed, terms());
}

void RolloutConfig::validate() const
{
  if (!(dt > 0.0)) {
    throw Error("dt must be positive");
  }
  if (horizon < 1) {
    throw Error("horizon must be at least 1");
  }
  if (samples_k < 1) {
    throw Error("samples_k must be at least 1");
  }
  if (!(speed_cap > 0.0)) {
    throw Error("speed_cap must be positive");
  }
}

std::span<const ParamField<RolloutConfig>> rollout_config_fields()
{
  static const std::array<ParamField<RolloutConfig>, 4> fields{{
    {"dt", &RolloutConfig::dt, "integration step [s]"},
    {"horizon", &RolloutConfig::horizon, "rollout length [frames]"},
    {"speed_cap", &RolloutConfig::speed_cap, "speed clamp [m/s]"},
    {"samples_k", &RolloutConfig::samples_k, "draws for best-of-K"},
  }};
  return fields;
}

Vec2 RobotTrack::position_at(std::size_t step) const
{
  if (positions.empty()) {
    throw Error("robot track is empty");
  }
  return positions[std::min(step, positions.size() - 1)];
}

Vec2 RobotTrack::velocity_at(std::size_t step, double dt) const
{
  if (step + 1 >= positions.size()) {
    return {};
  }
  return (positions[step + 1] - positions[step]) / dt;
}

RobotTrack straight_track(RobotType type, const Vec2 & start, const Vec2 & velocity, std::size_t steps, double dt)
{
  RobotTrack t;
  t.type = type;
  for (std::size_t k = 0; k <= steps; ++k) {
    t.positions.push_back(start + velocity * (static_cast<double>(k) * dt));
  }
  return t;
}

namespace
{

const TrajectoryFrame * frame_at(const Trajectory & traj, std::int64_t frame_index)
{
  const auto it = std::lower_bound(
    traj.frames.begin(), traj.frames.end(), frame_index,
    [](const TrajectoryFrame & f, std::int64_t idx) { return f.frame_index < idx; });
  if (it == traj.frames.end() || it->frame_index != frame_index) {
    return nullptr;
  }
  return &*it;
}

Vec2 replayed_velocity(const Trajectory & traj, const TrajectoryFrame & f)
{
  const auto i = static_cast<std::size_t>(&f - traj.frames.data());
  if (i + 1 < traj.size()) {
    const auto & n = traj.frames[i + 1];
    return (n.position - f.position) / (n.timestamp - f.timestamp);
  }
  if (i > 0) {
    const auto & p = traj.frames[i - 1];
    return (f.position - p.position) / (f.timestamp - p.timestamp);
  }
  return {};
}

std::uint64_t mix(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void check_finite(const ForceBreakdown & fb, std::int64_t id)
{
  const std::array<std::pair<const char *, const Vec2 *>, 6> terms{{
    {"f_a", &fb.f_a},
    {"f_o", &fb.f_o},
    {"f_p", &fb.f_p},
    {"f_r", &fb.f_r},
    {"f_gr", &fb.f_gr},
    {"noise", &fb.noise},
  }};
  for (const auto & [name, v] : terms) {
    if (!is_finite(*v)) {
      throw Error("agent " + std::to_string(id) + ": non-finite force term " + name);
    }
  }
}

}  // namespace

SceneFrame scene_of(const World & world, double dt)
{
  SceneFrame scene;
  scene.frame_index = world.frame_index();
  scene.timestamp = world.start_time + static_cast<double>(world.step) * dt;
  for (const auto & a : world.agents) {
    scene.pedestrians.push_back({a.id, a.position, a.velocity, a.group_id});
  }
  for (std::size_t i = 0; i < world.replayed.size(); ++i) {
    const auto & traj = world.replayed[i];
    if (const auto * f = frame_at(traj, scene.frame_index)) {
      const auto group = i < world.replayed_groups.size() ? world.replayed_groups[i] : std::nullopt;
      scene.pedestrians.push_back({traj.pedestrian_id, f->position, replayed_velocity(traj, *f), group});
    }
  }
  if (world.robot) {
    scene.robot = make_robot_state(
      world.robot->type, world.robot->position_at(world.step), world.robot->velocity_at(world.step, dt));
  }
  scene.obstacles = world.obstacles;
  return scene;
}

std::uint64_t step_seed(std::uint64_t rollout_seed, std::size_t step, std::int64_t agent_id)
{
  return mix(mix(rollout_seed ^ mix(step)) ^ static_cast<std::uint64_t>(agent_id));
}

SceneFrame step(World & world, const ForceProvider & provider, const RolloutConfig & cfg)
{
  const SceneFrame scene = scene_of(world, cfg.dt);
  const std::optional<Vec2> robot_pos =
    scene.robot ? std::optional<Vec2>(scene.robot->position) : std::nullopt;
  const auto lookback = provider.classifier.heading_lookback;
  world.velocity_history.resize(world.agents.size());

  std::vector<Vec2> forces(world.agents.size());
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    auto & agent = world.agents[i];
    auto & history = world.velocity_history[i];
    history.push_back(agent.velocity);
    if (history.size() > lookback + 1) {
      history.erase(history.begin(), history.end() - static_cast<std::ptrdiff_t>(lookback + 1));
    }
    if (provider.uses_goal_switch() && agent.behavior_mode == BehaviorLabel::Attraction) {
      auto label = BehaviorLabel::Neutral;
      if (robot_pos) {
        const auto past = history.size() > lookback ? heading_from_velocity(history.front()) : std::nullopt;
        label = classify_step(
          agent.position, heading_from_velocity(agent.velocity), past, *robot_pos, provider.classifier);
      }
      agent = update_goal_switch(agent, robot_pos, label, cfg.dt, provider.classifier);
    }
    const auto fb = provider.force(agent, scene, step_seed(cfg.rng_seed, world.step, agent.id));
    check_finite(fb, agent.id);
    Vec2 f = fb.total;
    // Near head-on repulsion: sidestep to the right.
    const Vec2 repulsion = fb.f_o + fb.f_p + fb.f_r;
    const double fn = repulsion.norm();
    const double vn = agent.velocity.norm();
    if (fn > kMinNormalizable && vn > kMinNormalizable && dot(repulsion, agent.velocity) < 0.0 &&
        std::abs(cross(repulsion, agent.velocity)) <= std::sin(kSidestepAngle) * fn * vn) {
      const Vec2 h = agent.velocity / vn;
      f += Vec2{h.y, -h.x} * (kSidestepGain * fn);
    }
    forces[i] = f;
  }
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    auto & a = world.agents[i];
    Vec2 v = a.velocity + forces[i] * cfg.dt;
    const double speed = v.norm();
    if (speed > cfg.speed_cap) {
      v = v * (cfg.speed_cap / speed);
    }
    a.velocity = v;
    a.position = a.position + v * cfg.dt;
    if (!is_finite(a.position)) {
      throw Error("agent " + std::to_string(a.id) + ": position diverged");
    }
  }
  ++world.step;
  return scene_of(world, cfg.dt);
}

Rollout rollout(World world, const ForceProvider & provider, const RolloutConfig & cfg)
{
  cfg.validate();
  provider.validate();
  Rollout out;
  out.trajectories.resize(world.agents.size());
  const auto record = [&](const SceneFrame & scene) {
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      out.trajectories[i].pedestrian_id = world.agents[i].id;
      out.trajectories[i].frames.push_back({scene.frame_index, scene.timestamp, world.agents[i].position});
    }
    out.scenes.push_back(scene);
  };
  record(scene_of(world, cfg.dt));
  for (std::size_t k = 0; k < cfg.horizon; ++k) {
    record(step(world, provider, cfg));
  }
  return out;
}

Trajectory predict(
  const Trajectory & prefix, const PredictionContext & context, const ForceProvider & provider,
  const RolloutConfig & cfg)
{
  if (prefix.size() < kMinPrefixFrames) {
    throw Error(
      "prefix too short: " + std::to_string(prefix.size()) + " frames, need at least " +
      std::to_string(kMinPrefixFrames));
  }
  validate(prefix);
  const auto & last = prefix.back();
  const auto & prev = prefix.frames[prefix.size() - 2];
  const Vec2 v0 = (last.position - prev.position) / (last.timestamp - prev.timestamp);
  const Vec2 mean_v = (last.position - prefix.front().position) / (last.timestamp - prefix.front().timestamp);

  PedestrianAgent agent;
  agent.id = prefix.pedestrian_id;
  agent.position = last.position;
  agent.velocity = v0;
  agent.goal = context.goal ? *context.goal
                            : last.position + mean_v * (static_cast<double>(cfg.horizon) * cfg.dt);
  agent.group_id = context.group_id;
  agent.behavior_mode = context.label;

  World world;
  world.agents.push_back(agent);
  for (std::size_t i = 0; i < context.neighbors.size(); ++i) {
    if (context.neighbors[i].pedestrian_id == prefix.pedestrian_id) {
      continue;
    }
    world.replayed.push_back(context.neighbors[i]);
    world.replayed_groups.push_back(i < context.neighbor_groups.size() ? context.neighbor_groups[i] : std::nullopt);
  }
  world.robot = context.robot;
  world.obstacles = context.obstacles;
  world.start_frame = last.frame_index;
  world.start_time = last.timestamp;
  auto & history = world.velocity_history.emplace_back();
  for (std::size_t i = 1; i + 1 < prefix.size(); ++i) {
    const auto & a = prefix.frames[i - 1];
    const auto & b = prefix.frames[i];
    history.push_back((b.position - a.position) / (b.timestamp - a.timestamp));
  }
  return rollout(std::move(world), provider, cfg).trajectories.front();
}

BestOfK best_of_k(
  const Trajectory & prefix, const Trajectory & ground_truth, const PredictionContext & context,
  const ForceProvider & provider, const RolloutConfig & cfg)
{
  if (cfg.samples_k == 0) {
    throw Error("best_of_k needs samples_k >= 1");
  }
  if (ground_truth.size() != cfg.horizon + 1) {
    throw Error(
      "ground truth has " + std::to_string(ground_truth.size()) + " frames, expected horizon + 1 = " +
      std::to_string(cfg.horizon + 1));
  }
  BestOfK best;
  for (std::size_t k = 0; k < cfg.samples_k; ++k) {
    auto c = cfg;
    c.rng_seed = cfg.rng_seed + k;
    auto pred = predict(prefix, context, provider, c);
    const double e = ade(pred, ground_truth);
    if (k == 0 || e < best.ade) {
      best.trajectory = std::move(pred);
      best.ade = e;
      best.sample = k;
    }
  }
  return best;
}

}  // namespace pedforce
