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

#ifndef PEDFORCE_CURATE_HPP_
#define PEDFORCE_CURATE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pedforce/forces.hpp"
#include "pedforce/params.hpp"
#include "pedforce/training.hpp"

namespace pedforce
{

struct CurationRules
{
  double straightness = 0.98;       // net / arc for Goal samples
  double goal_clearance = 3.0;      // m, no neighbour or robot closer for Goal samples
  double obstacle_distance = 2.0;   // m
  double pedestrian_distance = 3.0; // m
  double robot_distance = 3.0;      // m
  double speed_cap = 2.7;           // m/s, steps that hit the cap are skipped
  std::size_t max_samples_per_network = 0;  // 0 keeps all; otherwise evenly thinned

  void validate() const;
};

std::span<const ParamField<CurationRules>> curation_rules_fields();

struct CurationInput
{
  std::vector<Trajectory> trajectories;
  std::map<std::int64_t, BehaviorLabel> labels;  // missing = Neutral
  std::vector<SceneFrame> scenes;                // one per frame index
  std::map<std::int64_t, Vec2> goals;            // missing = final position
  std::map<std::int64_t, int> groups;
};

struct CurationResult
{
  std::vector<TrainingSample> samples;  // grouped by network, in network order
  std::array<std::size_t, kNetworkCount> counts{};
  std::size_t capped_steps = 0;             // skipped because the speed cap engaged
  std::size_t excluded_trajectories = 0;    // Attraction-labelled
};

/// Residual-attribution samples. At every interior step with contiguous
/// neighbours the observed acceleration is (v_{t+1} - v_t) / dt with
/// backward-difference velocities; the target of a network is that
/// acceleration minus the noise-free analytic estimate of every other force.
/// Obstacle and Pedestrian samples isolate the nearest wall segment and the
/// nearest in-view neighbour. Attraction-labelled trajectories are excluded.
/// With `require_every_network`, a network without samples is an error.
CurationResult curate(
  const CurationInput & input, const SfmParams & params, const CurationRules & rules,
  bool require_every_network = true);

}  // namespace pedforce

#endif  // PEDFORCE_CURATE_HPP_
