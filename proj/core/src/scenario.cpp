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

#include "pedforce/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "pedforce/error.hpp"

namespace pedforce
{

void ScenarioSpec::validate() const
{
  if (agents.empty()) {
    throw Error("scenario '" + name + "' has no agents");
  }
  if (horizon < 1) {
    throw Error("scenario horizon must be at least 1");
  }
  std::set<std::int64_t> ids;
  for (const auto & a : agents) {
    if (!ids.insert(a.id).second) {
      throw Error("scenario has duplicate agent id " + std::to_string(a.id));
    }
    if (!is_finite(a.position) || !is_finite(a.velocity) || !is_finite(a.goal)) {
      throw Error("agent " + std::to_string(a.id) + " has non-finite state");
    }
  }
}

namespace
{

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

/// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s)
{
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

struct Value
{
  std::string_view raw;
  std::string where;

  std::string text() const
  {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
      throw Error(where + ": expected a quoted string");
    }
    return std::string(raw.substr(1, raw.size() - 2));
  }
  double number() const { return parse_double(raw, where); }
  std::int64_t integer() const
  {
    const double v = number();
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      throw Error(where + ": expected an integer");
    }
    return static_cast<std::int64_t>(v);
  }
  Vec2 vec() const
  {
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
      throw Error(where + ": expected [x, y]");
    }
    const auto inner = raw.substr(1, raw.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
      throw Error(where + ": expected [x, y]");
    }
    return {parse_double(inner.substr(0, comma), where), parse_double(inner.substr(comma + 1), where)};
  }
};

enum class Section
{
  Top,
  Robot,
  Agent,
  Obstacle,
};

BehaviorLabel parse_disposition(const Value & v)
{
  const auto text = v.text();
  if (text == "attraction") {
    return BehaviorLabel::Attraction;
  }
  if (const auto label = parse_behavior_label(text)) {
    return *label;
  }
  throw Error(v.where + ": unknown behavior '" + text + "'");
}

std::string vec_text(const Vec2 & v) { return "[" + format_double(v.x) + ", " + format_double(v.y) + "]"; }

}  // namespace

ScenarioSpec parse_scenario(std::istream & in)
{
  ScenarioSpec spec;
  Section section = Section::Top;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = "scenario line " + std::to_string(line_no);
    const auto view = trim(strip_comment(line));
    if (view.empty()) {
      continue;
    }
    if (view == "[robot]") {
      if (spec.robot) {
        throw Error(where + ": repeated [robot] table");
      }
      spec.robot.emplace();
      section = Section::Robot;
      seen.clear();
      continue;
    }
    if (view == "[[agent]]") {
      spec.agents.emplace_back();
      spec.agents.back().id = static_cast<std::int64_t>(spec.agents.size());
      section = Section::Agent;
      seen.clear();
      continue;
    }
    if (view == "[[obstacle]]") {
      spec.obstacles.segments.emplace_back();
      section = Section::Obstacle;
      seen.clear();
      continue;
    }
    if (view.front() == '[') {
      throw Error(where + ": unknown table " + std::string(view));
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(where + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const Value value{trim(view.substr(eq + 1)), where};
    if (!seen.insert(key).second) {
      throw Error(where + ": repeated key '" + key + "'");
    }
    const auto unknown = [&] { return Error(where + ": unknown key '" + key + "'"); };
    switch (section) {
      case Section::Top:
        if (key == "name") {
          spec.name = value.text();
        } else if (key == "horizon") {
          const auto h = value.integer();
          if (h < 1) {
            throw Error(where + ": horizon must be at least 1");
          }
          spec.horizon = static_cast<std::size_t>(h);
        } else {
          throw unknown();
        }
        break;
      case Section::Robot:
        if (key == "type") {
          auto name = value.text();
          std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
          const auto t = name == "hsr"      ? std::optional(RobotType::HSR)
                         : name == "go1"    ? std::optional(RobotType::Go1)
                         : name == "mpo700" ? std::optional(RobotType::MPO700)
                                            : std::nullopt;
          if (!t || *t == RobotType::NA) {
            throw Error(where + ": unknown robot type");
          }
          spec.robot->type = *t;
        } else if (key == "position") {
          spec.robot->position = value.vec();
        } else if (key == "velocity") {
          spec.robot->velocity = value.vec();
        } else {
          throw unknown();
        }
        break;
      case Section::Agent: {
        auto & a = spec.agents.back();
        if (key == "id") {
          a.id = value.integer();
        } else if (key == "position") {
          a.position = value.vec();
        } else if (key == "velocity") {
          a.velocity = value.vec();
        } else if (key == "goal") {
          a.goal = value.vec();
        } else if (key == "group") {
          a.group = static_cast<int>(value.integer());
        } else if (key == "behavior") {
          a.behavior = parse_disposition(value);
        } else {
          throw unknown();
        }
        break;
      }
      case Section::Obstacle: {
        auto & s = spec.obstacles.segments.back();
        if (key == "a") {
          s.a = value.vec();
        } else if (key == "b") {
          s.b = value.vec();
        } else {
          throw unknown();
        }
        break;
      }
    }
  }
  spec.validate();
  return spec;
}

void write_scenario(std::ostream & out, const ScenarioSpec & spec)
{
  out << "name = \"" << spec.name << "\"\n";
  out << "horizon = " << spec.horizon << "\n";
  if (spec.robot) {
    out << "\n[robot]\n";
    out << "type = \"" << to_string(spec.robot->type) << "\"\n";
    out << "position = " << vec_text(spec.robot->position) << "\n";
    out << "velocity = " << vec_text(spec.robot->velocity) << "\n";
  }
  for (const auto & a : spec.agents) {
    out << "\n[[agent]]\n";
    out << "id = " << a.id << "\n";
    out << "position = " << vec_text(a.position) << "\n";
    out << "velocity = " << vec_text(a.velocity) << "\n";
    out << "goal = " << vec_text(a.goal) << "\n";
    if (a.group) {
      out << "group = " << *a.group << "\n";
    }
    out << "behavior = \""
        << (a.behavior == BehaviorLabel::Attraction ? std::string_view("attraction") : to_string(a.behavior))
        << "\"\n";
  }
  for (const auto & s : spec.obstacles.segments) {
    out << "\n[[obstacle]]\n";
    out << "a = " << vec_text(s.a) << "\n";
    out << "b = " << vec_text(s.b) << "\n";
  }
}

World make_world(const ScenarioSpec & spec, double dt)
{
  spec.validate();
  World world;
  for (const auto & a : spec.agents) {
    PedestrianAgent agent;
    agent.id = a.id;
    agent.position = a.position;
    agent.velocity = a.velocity;
    agent.goal = a.goal;
    agent.group_id = a.group;
    agent.behavior_mode = spec.robot ? a.behavior : BehaviorLabel::Neutral;
    world.agents.push_back(agent);
  }
  if (spec.robot) {
    world.robot = straight_track(spec.robot->type, spec.robot->position, spec.robot->velocity, spec.horizon, dt);
  }
  world.obstacles = spec.obstacles;
  return world;
}

ScenarioSpec random_scenario(SceneKind kind, std::uint64_t seed, const ScenarioMix & mix)
{
  std::mt19937_64 gen(seed);
  const auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  const auto chance = [&](double p) { return uniform(0.0, 1.0) < p; };

  ScenarioSpec spec;
  spec.name = "random-" + std::to_string(seed);
  spec.horizon = mix.horizon;
  const bool walls = chance(mix.wall_probability);
  const double half_width = walls ? 3.4 : 4.5;
  if (walls) {
    spec.obstacles.segments.push_back({{-20.0, -4.0}, {20.0, -4.0}});
    spec.obstacles.segments.push_back({{-20.0, 4.0}, {20.0, 4.0}});
  }
  if (kind != SceneKind::NoRobot) {
    RobotSpec r;
    const std::array<RobotType, 3> types{RobotType::HSR, RobotType::Go1, RobotType::MPO700};
    r.type = types[static_cast<std::size_t>(uniform(0.0, 3.0)) % 3];
    if (kind == SceneKind::StationaryRobot) {
      r.position = {uniform(-2.0, 2.0), uniform(-1.5, 1.5)};
    } else {
      const double side = chance(0.5) ? 1.0 : -1.0;
      r.position = {side * uniform(6.0, 9.0), uniform(-2.0, 2.0)};
      r.velocity = {-side * uniform(0.3, 0.8), 0.0};
    }
    spec.robot = r;
  }

  const auto span = mix.max_agents - mix.min_agents + 1;
  const auto n = mix.min_agents + static_cast<std::size_t>(uniform(0.0, static_cast<double>(span))) % span;
  const auto disposition = [&] {
    const double u = uniform(0.0, mix.avoidance + mix.neutral + mix.attraction);
    if (u < mix.avoidance) {
      return BehaviorLabel::Avoidance;
    }
    return u < mix.avoidance + mix.neutral ? BehaviorLabel::Neutral : BehaviorLabel::Attraction;
  };
  const auto clear = [&](const Vec2 & p) {
    for (const auto & a : spec.agents) {
      if (distance(a.position, p) < 1.0) {
        return false;
      }
    }
    return !spec.robot || distance(spec.robot->position, p) > 1.5;
  };
  const auto heading_towards = [&](const Vec2 & from, const Vec2 & to) {
    const double speed = uniform(0.5, 1.6);
    return rotate(normalize(to - from) * speed, uniform(-0.35, 0.35));
  };

  const bool grouped = n >= 2 && chance(mix.group_probability);
  for (std::size_t i = 0; i < n; ++i) {
    AgentSpec a;
    a.id = static_cast<std::int64_t>(i + 1);
    a.behavior = spec.robot ? disposition() : BehaviorLabel::Neutral;
    if (grouped && i == 1) {
      const auto & leader = spec.agents.front();
      a.group = 1;
      spec.agents.front().group = 1;
      for (int attempt = 0; attempt < 100; ++attempt) {
        const Vec2 p = leader.position + rotate({uniform(3.0, 5.0), 0.0}, uniform(-std::numbers::pi, std::numbers::pi));
        if (std::abs(p.y) < half_width && clear(p)) {
          a.position = p;
          break;
        }
        a.position = {leader.position.x, -leader.position.y};
      }
      a.goal = leader.goal + Vec2{0.0, uniform(-1.0, 1.0)};
      a.goal.y = std::clamp(a.goal.y, -3.0, 3.0);
    } else {
      const double dir = chance(0.5) ? 1.0 : -1.0;
      for (int attempt = 0; attempt < 100; ++attempt) {
        a.position = {-dir * uniform(4.0, 8.0), uniform(-half_width, half_width)};
        if (clear(a.position)) {
          break;
        }
      }
      a.goal = {dir * uniform(14.0, 18.0), uniform(-3.0, 3.0)};
    }
    a.velocity = heading_towards(a.position, a.goal);
    spec.agents.push_back(a);
  }
  return spec;
}

SyntheticScene synthesize(
  const SfmParams & params, const ScenarioSpec & spec, std::uint64_t rng_seed, const ClassifierParams & classifier)
{
  ForceProvider provider;
  provider.tag = ProviderTag::Analytic;
  provider.params = params;
  provider.classifier = classifier;
  RolloutConfig cfg;
  cfg.horizon = spec.horizon;
  cfg.rng_seed = rng_seed;
  const auto world = make_world(spec, cfg.dt);
  auto result = rollout(world, provider, cfg);

  SyntheticScene out;
  out.trajectories = std::move(result.trajectories);
  out.scenes = std::move(result.scenes);
  std::sort(out.trajectories.begin(), out.trajectories.end(), [](const auto & a, const auto & b) {
    return a.pedestrian_id < b.pedestrian_id;
  });
  for (const auto & a : spec.agents) {
    out.goals[a.id] = a.goal;
    if (a.group) {
      out.groups[a.id] = *a.group;
    }
    if (spec.robot) {
      out.labels[a.id] = a.behavior;
    }
  }
  out.obstacles = spec.obstacles;
  return out;
}

std::vector<DatasetRecord> to_records(const SyntheticScene & scene)
{
  std::map<std::int64_t, RobotState> robot;
  for (const auto & s : scene.scenes) {
    if (s.robot) {
      robot[s.frame_index] = *s.robot;
    }
  }
  return to_records(scene.trajectories, robot, scene.labels);
}

SceneMeta meta_of(const SyntheticScene & scene) { return {scene.obstacles, scene.goals, scene.groups}; }

SceneMeta read_meta(std::istream & in)
{
  SceneMeta meta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = "meta line " + std::to_string(line_no);
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') {
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest = view;
    while (true) {
      const auto c = rest.find(',');
      f.push_back(trim(rest.substr(0, c)));
      if (c == std::string_view::npos) {
        break;
      }
      rest = rest.substr(c + 1);
    }
    if (f[0] == "obstacle" && f.size() == 5) {
      meta.obstacles.segments.push_back(
        {{parse_double(f[1], where), parse_double(f[2], where)}, {parse_double(f[3], where), parse_double(f[4], where)}});
    } else if (f[0] == "agent" && f.size() == 5) {
      const auto id = static_cast<std::int64_t>(parse_double(f[1], where));
      if (!meta.goals.emplace(id, Vec2{parse_double(f[2], where), parse_double(f[3], where)}).second) {
        throw Error(where + ": repeated agent " + std::to_string(id));
      }
      if (f[4] != "NA") {
        meta.groups[id] = static_cast<int>(parse_double(f[4], where));
      }
    } else {
      throw Error(where + ": expected 'obstacle,x1,y1,x2,y2' or 'agent,ped_id,goal_x,goal_y,group'");
    }
  }
  return meta;
}

void write_meta(std::ostream & out, const SceneMeta & meta)
{
  for (const auto & s : meta.obstacles.segments) {
    out << "obstacle," << format_double(s.a.x) << ',' << format_double(s.a.y) << ',' << format_double(s.b.x) << ','
        << format_double(s.b.y) << '\n';
  }
  for (const auto & [id, goal] : meta.goals) {
    out << "agent," << id << ',' << format_double(goal.x) << ',' << format_double(goal.y) << ',';
    if (const auto it = meta.groups.find(id); it != meta.groups.end()) {
      out << it->second;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

}  // namespace pedforce
