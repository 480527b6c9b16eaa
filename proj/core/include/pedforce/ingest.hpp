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

#ifndef PEDFORCE_INGEST_HPP_
#define PEDFORCE_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "pedforce/scene.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

/// Exact header line of the interaction-log CSV.
inline constexpr std::string_view kRecordHeader =
  "frame,timestamp,ped_id,x,y,dist_inc,robot_present,robot_type,robot_influence,robot_x,robot_y";

/// One row of an interaction log: a pedestrian observation plus the robot
/// context of that frame. `robot_present == false` implies every robot field
/// is NA.
struct DatasetRecord
{
  std::int64_t frame_index = 0;
  double timestamp = 0.0;
  std::int64_t pedestrian_id = 0;
  Vec2 position;
  double distance_increment = 0.0;
  bool robot_present = false;
  RobotType robot_type = RobotType::NA;
  std::optional<BehaviorLabel> robot_influence;  // nullopt is NA
  std::optional<Vec2> robot_position;
};

/// Throws pedforce::Error if the record breaks the presence/NA coupling or has
/// a negative distance increment.
void validate(const DatasetRecord & record);

/// Parses the CSV layout (header line required unless the stream is empty).
/// Errors carry the 1-based line number.
std::vector<DatasetRecord> parse_records(std::istream & in);

/// Inverse of parse_records. Floats use fixed 6-decimal formatting.
void write_records(std::ostream & out, const std::vector<DatasetRecord> & records);

struct AssembledScenes
{
  std::vector<Trajectory> trajectories;      // sorted by pedestrian id
  std::vector<SceneFrame> scenes;            // sorted by frame index
  std::map<std::int64_t, BehaviorLabel> labels;
};

/// Groups records into per-pedestrian trajectories, per-frame scenes (robot
/// velocity from finite differences of its position) and a per-pedestrian
/// modal label. Throws "duplicate observation" on a repeated (id, frame).
AssembledScenes assemble(const std::vector<DatasetRecord> & records, const ObstacleSet & obstacles);

/// Modal label; ties resolve Attraction > Avoidance > Neutral.
std::optional<BehaviorLabel> modal_label(const std::vector<BehaviorLabel> & labels);

/// Per-frame robot position of each frame that has one, keyed by frame index.
std::map<std::int64_t, Vec2> robot_positions(const std::vector<DatasetRecord> & records);

/// Rebuilds records from trajectories: distance increments recomputed and
/// robot context looked up by frame index in `robot` (absent = no robot).
std::vector<DatasetRecord> to_records(
  const std::vector<Trajectory> & trajectories, const std::map<std::int64_t, RobotState> & robot,
  const std::map<std::int64_t, BehaviorLabel> & labels);

}  // namespace pedforce

#endif  // PEDFORCE_INGEST_HPP_
