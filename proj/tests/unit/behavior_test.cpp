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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pedforce/behavior.hpp"
#include "pedforce/error.hpp"
#include "pedforce/sim.hpp"
#include "support.hpp"

using namespace pedforce;

namespace
{

constexpr double kDeg = std::numbers::pi / 180.0;

/// Walks through `corners` at 1.2 m/s, one frame per 1/15 s.
Trajectory walk(std::vector<Vec2> corners)
{
  Trajectory t;
  t.pedestrian_id = 1;
  const double step = 1.2 * kFramePeriod;
  std::int64_t f = 0;
  Vec2 at = corners.front();
  t.frames.push_back({f, 0.0, at});
  for (std::size_t i = 1; i < corners.size(); ++i) {
    while (distance(at, corners[i]) > 1e-9) {
      const Vec2 d = corners[i] - at;
      at = d.norm() <= step ? corners[i] : at + normalize(d) * step;
      ++f;
      t.frames.push_back({f, static_cast<double>(f) * kFramePeriod, at});
    }
  }
  return t;
}

std::vector<std::optional<Vec2>> fixed_robot(const Trajectory & t, Vec2 robot)
{
  return std::vector<std::optional<Vec2>>(t.size(), robot);
}

}  // namespace

TEST_CASE("classify_step examples")
{
  const ClassifierParams cp;
  CHECK(classify_step({0, 0}, 0.0, 0.0, {2, 0}, cp) == BehaviorLabel::Attraction);
  CHECK(classify_step({0, 0}, 0.0, 0.0, {5, 0}, cp) == BehaviorLabel::Neutral);
  CHECK(classify_step({0, 0}, -15 * kDeg, 0.0, {0, 2}, cp) == BehaviorLabel::Avoidance);
  CHECK(classify_step({0, 0}, -5 * kDeg, 0.0, {0, 2}, cp) == BehaviorLabel::Neutral);
  CHECK(classify_step({0, 0}, std::nullopt, 0.0, {1, 0}, cp) == BehaviorLabel::Neutral);
  CHECK(classify_step({0, 0}, 80 * kDeg, std::nullopt, {0, 2}, cp) == BehaviorLabel::Attraction);
  CHECK(classify_step({0, 0}, 0.0, std::nullopt, {0, 2}, cp) == BehaviorLabel::Neutral);
}

TEST_CASE("classify_step is rotation invariant")
{
  const ClassifierParams cp;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 x = test::random_vec(rng, -3, 3);
    const Vec2 r = x + test::random_vec(rng, -3.5, 3.5);
    const double h = angle(rng);
    const double hp = angle(rng);
    const double th = angle(rng);
    const auto label = classify_step(x, h, hp, r, cp);
    // Skip configurations within rounding of a boundary.
    const Vec2 d = r - x;
    const double bearing = heading_of(d);
    const double now = std::abs(wrap_angle(h - bearing));
    const double past = std::abs(wrap_angle(hp - bearing));
    if (std::abs(d.norm() - cp.zone_radius) < 1e-9 || std::abs(now - cp.cone_half_angle) < 1e-9 ||
        std::abs(now - past - cp.deviation_threshold) < 1e-9) {
      continue;
    }
    ++checked;
    CHECK(classify_step(rotate(x, th), h + th, hp + th, rotate(r, th), cp) == label);
  }
  CHECK(checked > 1900);
}

TEST_CASE("outside the zone every step is neutral")
{
  const ClassifierParams cp;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> far(3.0 + 1e-9, 20.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 r = rotate({far(rng), 0}, angle(rng));
    CHECK(classify_step({0, 0}, angle(rng), angle(rng), r, cp) == BehaviorLabel::Neutral);
  }
}

TEST_CASE("trajectory bending towards the robot is attraction")
{
  const Vec2 robot{0, 2.5};
  const auto t = walk({{-7, 0}, {-2, 0}, {-0.3, 1.6}, {1, 1.6}, {7, 1.6}});
  const auto c = classify_trajectory(t, fixed_robot(t, robot), {});
  CHECK(c.interaction);
  CHECK(c.label == BehaviorLabel::Attraction);
  CHECK(c.longest_attraction_run >= 3);
}

TEST_CASE("straight pass is neutral")
{
  const Vec2 robot{0, 1.5};
  const auto t = walk({{-7, 0}, {7, 0}});
  const auto c = classify_trajectory(t, fixed_robot(t, robot), {});
  CHECK(c.interaction);
  CHECK(c.in_zone_steps > 0);
  CHECK(c.label == BehaviorLabel::Neutral);
}

TEST_CASE("lateral detour is avoidance")
{
  const Vec2 robot{0, 1.2};
  const auto t = walk({{-7, 0}, {-2.7, 0}, {-1.0, -1.0}, {1.0, -1.0}, {2.7, 0}, {7, 0}});
  const auto c = classify_trajectory(t, fixed_robot(t, robot), {});
  CHECK(c.label == BehaviorLabel::Avoidance);
}

TEST_CASE("simulated evasion is avoidance")
{
  World w;
  PedestrianAgent a;
  a.id = 1;
  a.position = {-6, 0};
  a.velocity = {1.3, 0};
  a.goal = {10, 0};
  a.behavior_mode = BehaviorLabel::Avoidance;
  w.agents.push_back(a);
  w.robot = straight_track(RobotType::Go1, {0, 1.1}, {0, 0}, 150, kFramePeriod);
  ForceProvider prov;
  prov.tag = ProviderTag::SRFM;
  prov.params.noise_std = 0.0;
  prov.params.robot_amplitude_stationary = 12.0;
  prov.params.robot_amplitude_moving = 18.0;
  RolloutConfig rc;
  rc.horizon = 150;
  const auto out = rollout(w, prov, rc);
  const auto & t = out.trajectories[0];
  const auto c = classify_trajectory(t, fixed_robot(t, {0, 1.1}), {});
  CHECK(c.label == BehaviorLabel::Avoidance);
}

TEST_CASE("no robot means no interaction")
{
  const auto t = walk({{-7, 0}, {7, 0}});
  const std::vector<std::optional<Vec2>> none(t.size());
  const auto c = classify_trajectory(t, none, {});
  CHECK_FALSE(c.interaction);
  CHECK(c.label == BehaviorLabel::Neutral);
  CHECK_THROWS_AS(classify_trajectory(t, std::vector<std::optional<Vec2>>(3), {}), Error);
}

TEST_CASE("goal switch")
{
  const ClassifierParams cp;
  PedestrianAgent a;
  a.goal = {10, 0};
  a.behavior_mode = BehaviorLabel::Attraction;

  const auto fresh = update_goal_switch(a, Vec2{2, 1}, BehaviorLabel::Attraction, kFramePeriod, cp);
  CHECK(fresh.goal_switch_remaining == 5.0);
  CHECK(fresh.goal == Vec2{2, 1});
  REQUIRE(fresh.saved_goal.has_value());
  CHECK(*fresh.saved_goal == a.goal);

  auto ending = fresh;
  ending.goal_switch_remaining = 0.05;
  const auto done = update_goal_switch(ending, Vec2{2, 1}, BehaviorLabel::Attraction, kFramePeriod, cp);
  CHECK(done.goal_switch_remaining == 0.0);
  CHECK(done.goal == a.goal);
  CHECK_FALSE(done.saved_goal.has_value());
  // Spent: no second switch.
  CHECK(update_goal_switch(done, Vec2{2, 1}, BehaviorLabel::Attraction, kFramePeriod, cp).goal == a.goal);

  PedestrianAgent n = a;
  n.behavior_mode = BehaviorLabel::Neutral;
  const auto same = update_goal_switch(n, Vec2{2, 1}, BehaviorLabel::Neutral, kFramePeriod, cp);
  CHECK(same.goal == n.goal);
  CHECK(same.goal_switch_remaining == 0.0);
  CHECK_FALSE(same.saved_goal.has_value());
  CHECK_FALSE(same.goal_switch_spent);

  CHECK_THROWS_AS(update_goal_switch(a, std::nullopt, BehaviorLabel::Neutral, 0.0, cp), Error);
}

TEST_CASE("goal is restored bit for bit")
{
  const ClassifierParams cp;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    PedestrianAgent a;
    a.goal = test::random_vec(rng, -100, 100);
    a.behavior_mode = BehaviorLabel::Attraction;
    a = update_goal_switch(a, test::random_vec(rng, -5, 5), BehaviorLabel::Attraction, kFramePeriod, cp);
    const auto original = *a.saved_goal;
    int steps = 0;
    while (a.goal_switch_remaining > 0.0) {
      a = update_goal_switch(a, test::random_vec(rng, -5, 5), BehaviorLabel::Attraction, kFramePeriod, cp);
      ++steps;
    }
    CHECK(steps == 75);
    CHECK(a.goal == original);
  }
}

TEST_CASE("classifier parameter validation")
{
  ClassifierParams cp;
  cp.cone_half_angle = std::numbers::pi / 2;
  CHECK_THROWS_AS(cp.validate(), Error);
  cp = {};
  cp.zone_radius = 0.0;
  CHECK_THROWS_AS(cp.validate(), Error);
  CHECK_NOTHROW(ClassifierParams{}.validate());
}
