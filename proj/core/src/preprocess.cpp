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

#include "pedforce/preprocess.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>

#include "pedforce/error.hpp"

namespace pedforce
{

void FilterConfig::validate() const
{
  if (min_frames == 0 || !(min_arc_length > 0) || !(max_speed > 0) || !(max_gap_displacement > 0) ||
      max_gap_frames == 0 || !(loop_net_ratio > 0) || !(stationary_radius > 0)) {
    throw Error("filter thresholds must be positive");
  }
}

std::span<const ParamField<FilterConfig>> filter_config_fields()
{
  static const std::array<ParamField<FilterConfig>, 7> fields{{
    {"min_frames", &FilterConfig::min_frames, "minimum frames per trajectory"},
    {"min_arc_length", &FilterConfig::min_arc_length, "minimum total arc length [m]"},
    {"max_speed", &FilterConfig::max_speed, "maximum instantaneous speed [m/s]"},
    {"max_gap_displacement", &FilterConfig::max_gap_displacement,
     "over-speed jumps longer than this are teleports [m]"},
    {"max_gap_frames", &FilterConfig::max_gap_frames, "longest repairable run of missing frames"},
    {"loop_net_ratio", &FilterConfig::loop_net_ratio, "minimum net displacement / arc length"},
    {"stationary_radius", &FilterConfig::stationary_radius, "minimum enclosing-disc radius [m]"},
  }};
  return fields;
}

std::string_view to_string(RejectionReason reason)
{
  switch (reason) {
    case RejectionReason::MinFrames:
      return "min_frames";
    case RejectionReason::Teleportation:
      return "teleportation";
    case RejectionReason::ArcLength:
      return "arc_length";
    case RejectionReason::Speed:
      return "speed";
    case RejectionReason::Loop:
      return "loop";
    case RejectionReason::Stationary:
      return "stationary";
  }
  return "unknown";
}

GapRepair repair_gaps(const Trajectory & traj, const FilterConfig & cfg)
{
  validate(traj);
  GapRepair out;
  Trajectory repaired;
  repaired.pedestrian_id = traj.pedestrian_id;
  repaired.frames.reserve(traj.size());
  repaired.frames.push_back(traj.frames.front());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const auto & a = traj.frames[i - 1];
    const auto & b = traj.frames[i];
    const double jump = distance(a.position, b.position);
    const double speed = jump / (b.timestamp - a.timestamp);
    if (speed > cfg.max_speed && jump > cfg.max_gap_displacement) {
      return {};
    }
    const auto missing = static_cast<std::size_t>(b.frame_index - a.frame_index - 1);
    if (missing > cfg.max_gap_frames) {
      return {};
    }
    const double steps = static_cast<double>(missing + 1);
    for (std::size_t k = 1; k <= missing; ++k) {
      const double s = static_cast<double>(k) / steps;
      repaired.frames.push_back(
        {a.frame_index + static_cast<std::int64_t>(k), a.timestamp + s * (b.timestamp - a.timestamp),
         a.position + (b.position - a.position) * s});
    }
    out.interpolated_frames += missing;
    repaired.frames.push_back(b);
  }
  out.trajectory = std::move(repaired);
  return out;
}

bool meets_min_frames(const Trajectory & traj, const FilterConfig & cfg)
{
  return traj.size() >= cfg.min_frames;
}

bool meets_arc_length(const Trajectory & traj, const FilterConfig & cfg)
{
  return arc_length(traj) >= cfg.min_arc_length;
}

bool meets_speed_limit(const Trajectory & traj, const FilterConfig & cfg)
{
  const auto & f = traj.frames;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double speed = distance(f[i].position, f[i - 1].position) / (f[i].timestamp - f[i - 1].timestamp);
    if (speed > cfg.max_speed) {
      return false;
    }
  }
  return true;
}

bool is_loop(const Trajectory & traj, const FilterConfig & cfg)
{
  const double arc = arc_length(traj);
  if (arc <= 0.0) {
    return false;
  }
  return net_displacement(traj) / arc < cfg.loop_net_ratio;
}

bool is_stationary(const Trajectory & traj, const FilterConfig & cfg)
{
  return enclosing_radius(traj) < cfg.stationary_radius;
}

namespace
{

struct Circle
{
  Vec2 center;
  double radius = 0.0;

  bool contains(const Vec2 & p) const { return distance(center, p) <= radius * (1.0 + 1e-12) + 1e-12; }
};

Circle circle_from(const Vec2 & a, const Vec2 & b) { return {(a + b) * 0.5, distance(a, b) * 0.5}; }

Circle circle_from(const Vec2 & a, const Vec2 & b, const Vec2 & c)
{
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  if (std::abs(d) < 1e-15) {
    // Collinear: the widest pair spans the circle.
    Circle best = circle_from(a, b);
    for (const auto & cand : {circle_from(a, c), circle_from(b, c)}) {
      if (cand.radius > best.radius) {
        best = cand;
      }
    }
    return best;
  }
  const double ab2 = ab.squared_norm();
  const double ac2 = ac.squared_norm();
  const Vec2 offset{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + offset, offset.norm()};
}

}  // namespace

double enclosing_radius(const Trajectory & traj)
{
  std::vector<Vec2> pts;
  pts.reserve(traj.size());
  for (const auto & f : traj.frames) {
    pts.push_back(f.position);
  }
  if (pts.empty()) {
    return 0.0;
  }
  // Incremental Welzl; the fixed shuffle keeps the expected cost linear.
  std::mt19937_64 rng(0x5eed);
  std::shuffle(pts.begin(), pts.end(), rng);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (c.contains(pts[i])) {
      continue;
    }
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(pts[j])) {
        continue;
      }
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!c.contains(pts[k])) {
          c = circle_from(pts[i], pts[j], pts[k]);
        }
      }
    }
  }
  return c.radius;
}

FilterVerdict passes_filters(const Trajectory & traj, const FilterConfig & cfg)
{
  const auto reject = [](RejectionReason r) { return FilterVerdict{false, r}; };
  if (!meets_min_frames(traj, cfg)) {
    return reject(RejectionReason::MinFrames);
  }
  if (!meets_arc_length(traj, cfg)) {
    return reject(RejectionReason::ArcLength);
  }
  if (!meets_speed_limit(traj, cfg)) {
    return reject(RejectionReason::Speed);
  }
  if (is_loop(traj, cfg)) {
    return reject(RejectionReason::Loop);
  }
  if (is_stationary(traj, cfg)) {
    return reject(RejectionReason::Stationary);
  }
  return {};
}

std::size_t FilterReport::total_rejected() const
{
  return rejected_min_frames + rejected_teleportation + rejected_arc_length + rejected_speed +
         rejected_behavioural;
}

PipelineResult run_pipeline(const std::vector<Trajectory> & trajectories, const FilterConfig & cfg)
{
  cfg.validate();
  PipelineResult out;
  auto & rep = out.report;
  rep.input_count = trajectories.size();
  for (const auto & traj : trajectories) {
    auto repair = repair_gaps(traj, cfg);
    if (!repair.trajectory) {
      ++rep.rejected_teleportation;
      continue;
    }
    const auto verdict = passes_filters(*repair.trajectory, cfg);
    if (!verdict.passed) {
      switch (*verdict.reason) {
        case RejectionReason::MinFrames:
          ++rep.rejected_min_frames;
          break;
        case RejectionReason::ArcLength:
          ++rep.rejected_arc_length;
          break;
        case RejectionReason::Speed:
          ++rep.rejected_speed;
          break;
        case RejectionReason::Teleportation:
          ++rep.rejected_teleportation;
          break;
        case RejectionReason::Loop:
        case RejectionReason::Stationary:
          ++rep.rejected_behavioural;
          break;
      }
      continue;
    }
    rep.interpolated_frame_count += repair.interpolated_frames;
    out.kept.push_back(std::move(*repair.trajectory));
  }
  rep.kept_count = out.kept.size();
  return out;
}

std::string format_report(const FilterReport & r)
{
  std::ostringstream os;
  os << "input_count = " << r.input_count << '\n'
     << "kept_count = " << r.kept_count << '\n'
     << "rejected_min_frames = " << r.rejected_min_frames << '\n'
     << "rejected_teleportation = " << r.rejected_teleportation << '\n'
     << "rejected_arc_length = " << r.rejected_arc_length << '\n'
     << "rejected_speed = " << r.rejected_speed << '\n'
     << "rejected_behavioural = " << r.rejected_behavioural << '\n'
     << "interpolated_frame_count = " << r.interpolated_frame_count << '\n';
  return os.str();
}

}  // namespace pedforce
