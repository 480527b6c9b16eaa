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

#include <sstream>

#include "doctest.h"
#include "pedforce/error.hpp"
#include "pedforce/preprocess.hpp"
#include "pedforce/scenario.hpp"

using namespace pedforce;

namespace
{

ScenarioSpec parse(const std::string & text)
{
  std::istringstream in(text);
  return parse_scenario(in);
}

AgentSpec agent(std::int64_t id, Vec2 position, Vec2 velocity, Vec2 goal)
{
  AgentSpec a;
  a.id = id;
  a.position = position;
  a.velocity = velocity;
  a.goal = goal;
  return a;
}

}  // namespace

TEST_CASE("scenario file")
{
  const auto spec = parse(R"(# two walkers and a robot
name = "crossing"
horizon = 45

[robot]
type = "mpo700"
position = [0.0, 0.5]
velocity = [0.2, 0.0]

[[agent]]
id = 1
position = [-5.0, 0.0]
velocity = [1.2, 0.0]
goal = [10.0, 0.0]
group = 3
behavior = "attraction"

[[agent]]
id = 2
position = [5, 0]
velocity = [-1.2, 0]
goal = [-10, 0]

[[obstacle]]
a = [-10.0, 3.0]
b = [10.0, 3.0]
)");
  CHECK(spec.name == "crossing");
  CHECK(spec.horizon == 45);
  REQUIRE(spec.robot.has_value());
  CHECK(spec.robot->type == RobotType::MPO700);
  CHECK(spec.robot->velocity == Vec2{0.2, 0});
  REQUIRE(spec.agents.size() == 2);
  CHECK(spec.agents[0].group == 3);
  CHECK(spec.agents[0].behavior == BehaviorLabel::Attraction);
  CHECK(spec.agents[1].behavior == BehaviorLabel::Neutral);
  CHECK_FALSE(spec.agents[1].group.has_value());
  REQUIRE(spec.obstacles.segments.size() == 1);
  CHECK(spec.obstacles.segments[0].b == Vec2{10, 3});

  std::ostringstream out;
  write_scenario(out, spec);
  const auto again = parse(out.str());
  std::ostringstream out2;
  write_scenario(out2, again);
  CHECK(out2.str() == out.str());
  CHECK(again.agents[0].goal == spec.agents[0].goal);
}

TEST_CASE("scenario errors")
{
  CHECK_THROWS_AS(parse("name = \"x\"\n"), Error);
  CHECK_THROWS_WITH_AS(parse("[[agent]]\nid = 1\nspeed = 3\n"), doctest::Contains("line 3"), Error);
  CHECK_THROWS_AS(parse("[[agent]]\nid = 1\n[[agent]]\nid = 1\n"), Error);
  CHECK_THROWS_AS(parse("[robot]\ntype = \"roomba\"\n[[agent]]\nid = 1\n"), Error);
  CHECK_THROWS_AS(parse("[[agent]]\nid = 1\nposition = [1, 2, 3]\n"), Error);
  CHECK_THROWS_AS(parse("[[agent]]\nid = 1\nbehavior = \"curious\"\n"), Error);
}

TEST_CASE("world of a scenario")
{
  ScenarioSpec spec;
  spec.horizon = 20;
  spec.agents = {agent(4, {0, 0}, {1, 0}, {9, 0})};
  spec.robot = RobotSpec{RobotType::Go1, {2, 2}, {0.5, 0}};
  const auto w = make_world(spec);
  REQUIRE(w.agents.size() == 1);
  CHECK(w.agents[0].id == 4);
  REQUIRE(w.robot.has_value());
  CHECK(w.robot->positions.size() == 21);
  CHECK(w.robot->position_at(20).x == doctest::Approx(2 + 0.5 * 20 * kFramePeriod));
  CHECK(w.robot->position_at(500) == w.robot->position_at(20));
}

TEST_CASE("head-on walkers avoid each other symmetrically")
{
  SfmParams p;
  p.noise_std = 0.0;
  ScenarioSpec spec;
  spec.horizon = 120;
  spec.agents = {agent(1, {-5, 0}, {1.2, 0}, {10, 0}), agent(2, {5, 0}, {-1.2, 0}, {-10, 0})};
  const auto syn = synthesize(p, spec, 1);
  const auto & a = syn.trajectories[0].frames;
  const auto & b = syn.trajectories[1].frames;
  double max_offset = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK((a[k].position + b[k].position).norm() < 1e-9);
    max_offset = std::max(max_offset, std::abs(a[k].position.y));
  }
  // Each passes on its own right.
  CHECK(max_offset > 0.1);
  CHECK(a[60].position.y < 0.0);
  CHECK(b[60].position.y > 0.0);
}

TEST_CASE("synthesis is deterministic and tagged")
{
  const SfmParams p;
  const auto spec = random_scenario(SceneKind::MovingRobot, 99);
  const auto a = synthesize(p, spec, 5);
  const auto b = synthesize(p, spec, 5);
  const auto c = synthesize(p, spec, 6);
  CHECK(a.synthetic);
  REQUIRE(a.trajectories.size() == spec.agents.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    CHECK(a.trajectories[i].size() == spec.horizon + 1);
    for (std::size_t k = 0; k < a.trajectories[i].size(); ++k) {
      CHECK(a.trajectories[i].frames[k].position == b.trajectories[i].frames[k].position);
      differs |= a.trajectories[i].frames[k].position != c.trajectories[i].frames[k].position;
    }
  }
  CHECK(differs);
  CHECK(a.labels.size() == spec.agents.size());
}

TEST_CASE("random scenarios")
{
  const auto a = random_scenario(SceneKind::StationaryRobot, 3);
  const auto b = random_scenario(SceneKind::StationaryRobot, 3);
  std::ostringstream sa;
  std::ostringstream sb;
  write_scenario(sa, a);
  write_scenario(sb, b);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.robot.has_value());
  CHECK(a.robot->velocity == Vec2{0, 0});
  CHECK_FALSE(random_scenario(SceneKind::NoRobot, 3).robot.has_value());
  const auto m = random_scenario(SceneKind::MovingRobot, 3);
  REQUIRE(m.robot.has_value());
  CHECK(m.robot->velocity.norm() > kRobotMovingThreshold);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto r = random_scenario(SceneKind::NoRobot, s);
    CHECK(r.agents.size() >= 2);
    CHECK(r.agents.size() <= 5);
    CHECK_NOTHROW(r.validate());
  }
}

TEST_CASE("synthetic avoidance trajectories pass the filters")
{
  const SfmParams p;
  std::vector<Trajectory> avoiders;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto spec = random_scenario(static_cast<SceneKind>(1 + s % 2), 4000 + s);
    for (auto & a : spec.agents) {
      a.behavior = BehaviorLabel::Avoidance;
    }
    const auto syn = synthesize(p, spec, s);
    avoiders.insert(avoiders.end(), syn.trajectories.begin(), syn.trajectories.end());
  }
  const auto out = run_pipeline(avoiders, {});
  CHECK(out.report.kept_count == avoiders.size());
}

TEST_CASE("scene side information round-trips")
{
  const SfmParams p;
  auto spec = random_scenario(SceneKind::StationaryRobot, 8);
  spec.horizon = 10;
  spec.obstacles.segments.push_back({{-1, -1}, {1, -1}});
  spec.agents[0].group = 2;
  const auto syn = synthesize(p, spec, 1);
  const auto meta = meta_of(syn);
  std::stringstream buf;
  write_meta(buf, meta);
  const auto back = read_meta(buf);
  CHECK(back.goals == meta.goals);
  CHECK(back.groups == meta.groups);
  REQUIRE(back.obstacles.segments.size() == meta.obstacles.segments.size());
  for (std::size_t i = 0; i < back.obstacles.segments.size(); ++i) {
    CHECK(back.obstacles.segments[i].a == meta.obstacles.segments[i].a);
    CHECK(back.obstacles.segments[i].b == meta.obstacles.segments[i].b);
  }
  std::istringstream bad("agent,1,2\n");
  CHECK_THROWS_AS(read_meta(bad), Error);

  const auto records = to_records(syn);
  std::size_t frames = 0;
  for (const auto & t : syn.trajectories) {
    frames += t.size();
  }
  CHECK(records.size() == frames);
  for (const auto & r : records) {
    CHECK(r.robot_present);
    CHECK(r.robot_influence.has_value());
  }
}
