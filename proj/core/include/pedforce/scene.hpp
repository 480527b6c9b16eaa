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

#ifndef PEDFORCE_SCENE_HPP_
#define PEDFORCE_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pedforce/geometry.hpp"

namespace pedforce
{

enum class RobotType
{
  HSR,
  Go1,
  MPO700,
  NA,
};

std::string_view to_string(RobotType type);
std::optional<RobotType> parse_robot_type(std::string_view text);

/// Speeds above this count as a moving robot (sensor-noise floor).
inline constexpr double kRobotMovingThreshold = 0.05;

struct RobotState
{
  RobotType type = RobotType::NA;
  Vec2 position;
  Vec2 velocity;
  bool moving = false;
};

/// Builds a RobotState with `moving` derived from the velocity.
RobotState make_robot_state(RobotType type, const Vec2 & position, const Vec2 & velocity);

struct PedestrianState
{
  std::int64_t id = 0;
  Vec2 position;
  Vec2 velocity;
  std::optional<int> group_id;
};

/// Snapshot of every pedestrian, the robot (if any) and walls at one instant.
struct SceneFrame
{
  std::int64_t frame_index = 0;
  double timestamp = 0.0;
  std::vector<PedestrianState> pedestrians;
  std::optional<RobotState> robot;
  ObstacleSet obstacles;

  const PedestrianState * find(std::int64_t id) const;
};

}  // namespace pedforce

#endif  // PEDFORCE_SCENE_HPP_
