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

#ifndef PEDFORCE_NEURAL_FORCES_HPP_
#define PEDFORCE_NEURAL_FORCES_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "pedforce/forces.hpp"
#include "pedforce/network.hpp"
#include "pedforce/params.hpp"

namespace pedforce
{

/// Input scaling shared by every network.
inline constexpr double kDistanceScale = 3.0;  // m
inline constexpr double kSpeedScale = 2.7;     // m/s

// Input encoders. Directions point from the source of the force towards the
// agent (away from walls, neighbours and the robot) except for the goal and
// group nets, which point at the goal and the centroid.
std::vector<double> goal_input(const Vec2 & velocity, const Vec2 & position, const Vec2 & goal);
std::vector<double> obstacle_input(const Vec2 & position, const Vec2 & point);
std::vector<double> pedestrian_input(const Vec2 & velocity, const Vec2 & position, const Vec2 & other);
std::vector<double> robot_input(const Vec2 & position, const RobotState & robot);
/// Nullopt when the agent has no peers.
std::optional<std::vector<double>> group_input(
  const Vec2 & position, const Vec2 & velocity, const Vec2 & goal, std::span<const Vec2> peers);

/// Interaction ranges beyond which a network is not evaluated.
struct NeuralRanges
{
  double pedestrian = 3.0;  // m
  double obstacle = 2.0;    // m, per wall segment
  double robot = 3.0;       // m
};

std::span<const ParamField<NeuralRanges>> neural_range_fields();

/// One trained network per force term.
class NeuralForceSet
{
public:
  void set(NetworkWeights net);
  bool has(NetworkId id) const;
  /// Throws "missing network '<name>'" when absent.
  const NetworkWeights & get(NetworkId id) const;
  bool complete() const;

  /// Reads `<name>.nsw` for every network; a missing file is an error.
  static NeuralForceSet load(const std::filesystem::path & dir);
  /// Writes `<name>.nsw` for every network present.
  void save(const std::filesystem::path & dir) const;

private:
  std::array<std::optional<NetworkWeights>, kNetworkCount> nets_;
};

/// Neural composition with the same routing as total_force: the Robot net for
/// Avoidance, the robot as a point through the Obstacle net for Neutral (and
/// Attraction without an active switch), and the robot as goal with zero f_r
/// for an active attraction switch. The pedestrian term sums per-neighbour
/// outputs over in-view neighbours. Noise is drawn as in total_force.
ForceBreakdown compose_neural(
  const PedestrianAgent & agent, const SceneFrame & scene, const NeuralForceSet & nets, const NeuralRanges & ranges,
  double noise_std, std::uint64_t rng_seed, ForceTerms terms = ForceTerms::full(), const SfmParams & p = {});

}  // namespace pedforce

#endif  // PEDFORCE_NEURAL_FORCES_HPP_
