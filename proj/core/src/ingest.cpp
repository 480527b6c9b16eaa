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

#include "pedforce/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "pedforce/error.hpp"
#include "pedforce/params.hpp"

namespace pedforce
{

std::string_view to_string(RobotType type)
{
  switch (type) {
    case RobotType::HSR:
      return "HSR";
    case RobotType::Go1:
      return "Go1";
    case RobotType::MPO700:
      return "MPO700";
    case RobotType::NA:
      return "NA";
  }
  return "NA";
}

std::optional<RobotType> parse_robot_type(std::string_view text)
{
  if (text == "HSR") {
    return RobotType::HSR;
  }
  if (text == "Go1") {
    return RobotType::Go1;
  }
  if (text == "MPO700") {
    return RobotType::MPO700;
  }
  if (text == "NA") {
    return RobotType::NA;
  }
  return std::nullopt;
}

RobotState make_robot_state(RobotType type, const Vec2 & position, const Vec2 & velocity)
{
  return {type, position, velocity, velocity.norm() > kRobotMovingThreshold};
}

const PedestrianState * SceneFrame::find(std::int64_t id) const
{
  for (const auto & p : pedestrians) {
    if (p.id == id) {
      return &p;
    }
  }
  return nullptr;
}

void validate(const DatasetRecord & r)
{
  if (!(r.distance_increment >= 0.0)) {
    throw Error("negative distance increment");
  }
  if (r.robot_present) {
    if (r.robot_type == RobotType::NA || !r.robot_position) {
      throw Error("inconsistent robot fields");
    }
  } else if (r.robot_type != RobotType::NA || r.robot_influence || r.robot_position) {
    throw Error("inconsistent robot fields");
  }
}

namespace
{

std::vector<std::string_view> split_csv(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view text, std::string_view what)
{
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("invalid integer '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

void append_fixed(std::string & out, double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  out += buf;
}

DatasetRecord parse_row(std::string_view line)
{
  const auto fields = split_csv(line);
  if (fields.size() != 11) {
    throw Error("expected 11 fields, found " + std::to_string(fields.size()));
  }
  DatasetRecord r;
  r.frame_index = parse_int(fields[0], "frame");
  r.timestamp = parse_double(fields[1], "timestamp");
  r.pedestrian_id = parse_int(fields[2], "ped_id");
  r.position = {parse_double(fields[3], "x"), parse_double(fields[4], "y")};
  r.distance_increment = parse_double(fields[5], "dist_inc");
  const auto present = fields[6];
  if (present == "1" || present == "true") {
    r.robot_present = true;
  } else if (present == "0" || present == "false") {
    r.robot_present = false;
  } else {
    throw Error("invalid robot_present '" + std::string(present) + "'");
  }
  const auto type = parse_robot_type(fields[7]);
  if (!type) {
    throw Error("invalid robot_type '" + std::string(fields[7]) + "'");
  }
  r.robot_type = *type;
  if (fields[8] != "NA") {
    r.robot_influence = parse_behavior_label(fields[8]);
    if (!r.robot_influence) {
      throw Error("invalid robot_influence '" + std::string(fields[8]) + "'");
    }
  }
  const bool x_na = fields[9] == "NA";
  const bool y_na = fields[10] == "NA";
  if (x_na != y_na) {
    throw Error("inconsistent robot fields");
  }
  if (!x_na) {
    r.robot_position = Vec2{parse_double(fields[9], "robot_x"), parse_double(fields[10], "robot_y")};
  }
  validate(r);
  return r;
}

}  // namespace

std::vector<DatasetRecord> parse_records(std::istream & in)
{
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!header_seen) {
      if (line != kRecordHeader) {
        throw Error("line 1: unexpected header");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    try {
      records.push_back(parse_row(line));
    } catch (const Error & e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_records(std::ostream & out, const std::vector<DatasetRecord> & records)
{
  std::string buf;
  buf += kRecordHeader;
  buf += '\n';
  for (const auto & r : records) {
    validate(r);
    buf += std::to_string(r.frame_index);
    buf += ',';
    append_fixed(buf, r.timestamp);
    buf += ',';
    buf += std::to_string(r.pedestrian_id);
    buf += ',';
    append_fixed(buf, r.position.x);
    buf += ',';
    append_fixed(buf, r.position.y);
    buf += ',';
    append_fixed(buf, r.distance_increment);
    buf += r.robot_present ? ",1," : ",0,";
    buf += to_string(r.robot_type);
    buf += ',';
    buf += r.robot_influence ? to_string(*r.robot_influence) : std::string_view("NA");
    if (r.robot_position) {
      buf += ',';
      append_fixed(buf, r.robot_position->x);
      buf += ',';
      append_fixed(buf, r.robot_position->y);
    } else {
      buf += ",NA,NA";
    }
    buf += '\n';
  }
  out << buf;
}

std::optional<BehaviorLabel> modal_label(const std::vector<BehaviorLabel> & labels)
{
  if (labels.empty()) {
    return std::nullopt;
  }
  std::size_t attraction = 0;
  std::size_t neutral = 0;
  std::size_t avoidance = 0;
  for (auto l : labels) {
    switch (l) {
      case BehaviorLabel::Attraction:
        ++attraction;
        break;
      case BehaviorLabel::Neutral:
        ++neutral;
        break;
      case BehaviorLabel::Avoidance:
        ++avoidance;
        break;
    }
  }
  if (attraction >= avoidance && attraction >= neutral) {
    return BehaviorLabel::Attraction;
  }
  if (avoidance >= neutral) {
    return BehaviorLabel::Avoidance;
  }
  return BehaviorLabel::Neutral;
}

std::map<std::int64_t, Vec2> robot_positions(const std::vector<DatasetRecord> & records)
{
  std::map<std::int64_t, Vec2> out;
  for (const auto & r : records) {
    if (r.robot_position) {
      out.emplace(r.frame_index, *r.robot_position);
    }
  }
  return out;
}

AssembledScenes assemble(const std::vector<DatasetRecord> & records, const ObstacleSet & obstacles)
{
  std::map<std::int64_t, std::vector<const DatasetRecord *>> by_ped;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto & r : records) {
    if (!seen.emplace(r.pedestrian_id, r.frame_index).second) {
      throw Error(
        "duplicate observation: ped " + std::to_string(r.pedestrian_id) + " frame " +
        std::to_string(r.frame_index));
    }
    by_ped[r.pedestrian_id].push_back(&r);
  }

  AssembledScenes out;
  struct Obs
  {
    std::int64_t id;
    Vec2 position;
    Vec2 velocity;
  };
  std::map<std::int64_t, std::vector<Obs>> per_frame;
  std::map<std::int64_t, double> frame_time;

  for (auto & [id, rows] : by_ped) {
    std::sort(rows.begin(), rows.end(), [](const auto * a, const auto * b) {
      return a->frame_index < b->frame_index;
    });
    Trajectory traj;
    traj.pedestrian_id = id;
    std::vector<BehaviorLabel> influences;
    for (const auto * r : rows) {
      traj.frames.push_back({r->frame_index, r->timestamp, r->position});
      if (r->robot_influence) {
        influences.push_back(*r->robot_influence);
      }
    }
    validate(traj);
    const auto velocities =
      traj.size() >= 2 ? finite_difference_velocity(traj) : std::vector<Vec2>(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto & f = traj.frames[i];
      per_frame[f.frame_index].push_back({id, f.position, velocities[i]});
      frame_time.emplace(f.frame_index, f.timestamp);
    }
    if (auto label = modal_label(influences)) {
      out.labels.emplace(id, *label);
    }
    out.trajectories.push_back(std::move(traj));
  }

  // Robot track: first robot observation in each frame.
  struct RobotObs
  {
    std::int64_t frame;
    double time;
    RobotType type;
    Vec2 position;
  };
  std::vector<RobotObs> robot;
  {
    std::map<std::int64_t, RobotObs> first;
    for (const auto & r : records) {
      if (r.robot_present) {
        first.try_emplace(r.frame_index, RobotObs{r.frame_index, r.timestamp, r.robot_type, *r.robot_position});
      }
    }
    for (auto & [f, obs] : first) {
      robot.push_back(obs);
    }
  }
  std::map<std::int64_t, RobotState> robot_by_frame;
  for (std::size_t i = 0; i < robot.size(); ++i) {
    Vec2 v;
    if (robot.size() >= 2) {
      const std::size_t a = i + 1 < robot.size() ? i : i - 1;
      v = (robot[a + 1].position - robot[a].position) / (robot[a + 1].time - robot[a].time);
    }
    robot_by_frame.emplace(robot[i].frame, make_robot_state(robot[i].type, robot[i].position, v));
  }

  for (auto & [frame, peds] : per_frame) {
    SceneFrame scene;
    scene.frame_index = frame;
    scene.timestamp = frame_time.at(frame);
    for (const auto & p : peds) {
      scene.pedestrians.push_back({p.id, p.position, p.velocity, std::nullopt});
    }
    if (auto it = robot_by_frame.find(frame); it != robot_by_frame.end()) {
      scene.robot = it->second;
    }
    scene.obstacles = obstacles;
    out.scenes.push_back(std::move(scene));
  }
  return out;
}

std::vector<DatasetRecord> to_records(
  const std::vector<Trajectory> & trajectories, const std::map<std::int64_t, RobotState> & robot,
  const std::map<std::int64_t, BehaviorLabel> & labels)
{
  std::vector<DatasetRecord> out;
  for (const auto & traj : trajectories) {
    const auto label_it = labels.find(traj.pedestrian_id);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto & f = traj.frames[i];
      DatasetRecord r;
      r.frame_index = f.frame_index;
      r.timestamp = f.timestamp;
      r.pedestrian_id = traj.pedestrian_id;
      r.position = f.position;
      r.distance_increment = i == 0 ? 0.0 : distance(f.position, traj.frames[i - 1].position);
      if (auto it = robot.find(f.frame_index); it != robot.end()) {
        r.robot_present = true;
        r.robot_type = it->second.type;
        r.robot_position = it->second.position;
        if (label_it != labels.end()) {
          r.robot_influence = label_it->second;
        }
      }
      out.push_back(r);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DatasetRecord & a, const DatasetRecord & b) {
    return a.frame_index != b.frame_index ? a.frame_index < b.frame_index
                                          : a.pedestrian_id < b.pedestrian_id;
  });
  return out;
}

}  // namespace pedforce
