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

#ifndef PEDFORCE_TRAJECTORY_HPP_
#define PEDFORCE_TRAJECTORY_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pedforce/geometry.hpp"

namespace pedforce
{

/// Nominal capture rate of the recordings.
inline constexpr double kFrameRate = 15.0;
inline constexpr double kFramePeriod = 1.0 / kFrameRate;

struct TrajectoryFrame
{
  std::int64_t frame_index = 0;
  double timestamp = 0.0;  // seconds since recording start
  Vec2 position;
};

/// One continuous track. Frames are ordered with strictly increasing
/// frame_index and timestamp.
struct Trajectory
{
  std::int64_t pedestrian_id = 0;
  std::vector<TrajectoryFrame> frames;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  const TrajectoryFrame & front() const { return frames.front(); }
  const TrajectoryFrame & back() const { return frames.back(); }
};

/// Throws pedforce::Error if the trajectory is empty or not strictly ordered.
void validate(const Trajectory & traj);

/// Forward differences v_t = (x_{t+1} - x_t) / (t_{t+1} - t_t). The last
/// entry repeats the previous one so the output is aligned with the frames.
/// Throws "insufficient frames" for fewer than two frames.
std::vector<Vec2> finite_difference_velocity(const Trajectory & traj);

/// Sum of consecutive displacements; 0 for a single frame.
double arc_length(const Trajectory & traj);

/// Distance between first and last positions.
double net_displacement(const Trajectory & traj);

/// Categorical pedestrian response to a robot.
enum class BehaviorLabel
{
  Attraction,
  Neutral,
  Avoidance,
};

std::string_view to_string(BehaviorLabel label);
std::optional<BehaviorLabel> parse_behavior_label(std::string_view text);

}  // namespace pedforce

#endif  // PEDFORCE_TRAJECTORY_HPP_
