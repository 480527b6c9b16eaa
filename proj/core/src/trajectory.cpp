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

#include "pedforce/trajectory.hpp"

#include <string>

#include "pedforce/error.hpp"

namespace pedforce
{

void validate(const Trajectory & traj)
{
  if (traj.frames.empty()) {
    throw Error("trajectory " + std::to_string(traj.pedestrian_id) + " has no frames");
  }
  for (std::size_t i = 1; i < traj.frames.size(); ++i) {
    const auto & prev = traj.frames[i - 1];
    const auto & cur = traj.frames[i];
    if (cur.frame_index <= prev.frame_index || !(cur.timestamp > prev.timestamp)) {
      throw Error(
        "trajectory " + std::to_string(traj.pedestrian_id) + " is not strictly ordered at frame " +
        std::to_string(cur.frame_index));
    }
  }
}

std::vector<Vec2> finite_difference_velocity(const Trajectory & traj)
{
  const auto & f = traj.frames;
  if (f.size() < 2) {
    throw Error("insufficient frames");
  }
  std::vector<Vec2> v;
  v.reserve(f.size());
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    v.push_back((f[i + 1].position - f[i].position) / (f[i + 1].timestamp - f[i].timestamp));
  }
  v.push_back(v.back());
  return v;
}

double arc_length(const Trajectory & traj)
{
  double total = 0.0;
  for (std::size_t i = 1; i < traj.frames.size(); ++i) {
    total += distance(traj.frames[i].position, traj.frames[i - 1].position);
  }
  return total;
}

double net_displacement(const Trajectory & traj)
{
  if (traj.frames.empty()) {
    return 0.0;
  }
  return distance(traj.frames.back().position, traj.frames.front().position);
}

std::string_view to_string(BehaviorLabel label)
{
  switch (label) {
    case BehaviorLabel::Attraction:
      return "attractive";
    case BehaviorLabel::Neutral:
      return "neutral";
    case BehaviorLabel::Avoidance:
      return "avoidance";
  }
  return "neutral";
}

std::optional<BehaviorLabel> parse_behavior_label(std::string_view text)
{
  if (text == "attractive" || text == "attraction") {
    return BehaviorLabel::Attraction;
  }
  if (text == "neutral") {
    return BehaviorLabel::Neutral;
  }
  if (text == "avoidance") {
    return BehaviorLabel::Avoidance;
  }
  return std::nullopt;
}

}  // namespace pedforce
