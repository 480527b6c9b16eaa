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

#ifndef PEDFORCE_PREPROCESS_HPP_
#define PEDFORCE_PREPROCESS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pedforce/params.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

/// Trajectory-quality thresholds. All must be positive.
struct FilterConfig
{
  std::size_t min_frames = 10;
  double min_arc_length = 3.5;        // m
  double max_speed = 2.7;             // m/s, instantaneous
  double max_gap_displacement = 0.3;  // m, larger over-speed jumps are teleports
  std::size_t max_gap_frames = 5;     // longest repairable run of missing frames
  double loop_net_ratio = 0.25;       // net displacement / arc length
  double stationary_radius = 1.0;     // m, minimal enclosing disc

  void validate() const;
};

std::span<const ParamField<FilterConfig>> filter_config_fields();

enum class RejectionReason
{
  MinFrames,
  Teleportation,
  ArcLength,
  Speed,
  Loop,
  Stationary,
};

std::string_view to_string(RejectionReason reason);

struct GapRepair
{
  std::optional<Trajectory> trajectory;  // empty when rejected
  std::size_t interpolated_frames = 0;
};

/// Fills missing frame indices by linear interpolation. Rejects (as
/// teleportation) any over-speed jump longer than max_gap_displacement and
/// any run of more than max_gap_frames missing frames. Observed positions are
/// never modified.
GapRepair repair_gaps(const Trajectory & traj, const FilterConfig & cfg);

struct FilterVerdict
{
  bool passed = true;
  std::optional<RejectionReason> reason;
};

/// Frame count, arc length, instantaneous speed, then loop and stationary
/// checks, in that order; the first failing rule is reported.
FilterVerdict passes_filters(const Trajectory & traj, const FilterConfig & cfg);

// Individual rules, exposed for diagnostics and threshold tests.
bool meets_min_frames(const Trajectory & traj, const FilterConfig & cfg);
bool meets_arc_length(const Trajectory & traj, const FilterConfig & cfg);
bool meets_speed_limit(const Trajectory & traj, const FilterConfig & cfg);
bool is_loop(const Trajectory & traj, const FilterConfig & cfg);
bool is_stationary(const Trajectory & traj, const FilterConfig & cfg);

/// Radius of the smallest disc containing every position.
double enclosing_radius(const Trajectory & traj);

struct FilterReport
{
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t rejected_min_frames = 0;
  std::size_t rejected_teleportation = 0;
  std::size_t rejected_arc_length = 0;
  std::size_t rejected_speed = 0;
  std::size_t rejected_behavioural = 0;  // loops and stationary tracks
  std::size_t interpolated_frame_count = 0;

  std::size_t total_rejected() const;
};

struct PipelineResult
{
  std::vector<Trajectory> kept;
  FilterReport report;
};

/// repair_gaps then passes_filters on every trajectory, input order preserved.
PipelineResult run_pipeline(const std::vector<Trajectory> & trajectories, const FilterConfig & cfg);

/// `key = value` summary, one counter per line.
std::string format_report(const FilterReport & report);

}  // namespace pedforce

#endif  // PEDFORCE_PREPROCESS_HPP_
