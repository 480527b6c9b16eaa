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

#ifndef PEDFORCE_EVAL_HPP_
#define PEDFORCE_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pedforce/sim.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce
{

/// Timestamps closer than this count as the same instant; record files carry
/// six decimals, so two independently rounded values can differ by 1e-6.
inline constexpr double kTimestampTolerance = 1e-5;  // s

/// Mean Euclidean distance over frames. Throws on a length mismatch or on
/// timestamps further apart than kTimestampTolerance.
double ade(const Trajectory & pred, const Trajectory & gt);

/// Distance between the final frames. Throws on an empty trajectory.
double fde(const Trajectory & pred, const Trajectory & gt);

struct PedestrianMetric
{
  std::size_t scene = 0;
  std::int64_t pedestrian_id = 0;
  double ade = 0.0;
  double fde = 0.0;
};

struct MetricResult
{
  double ade = 0.0;  // mean over trajectories
  double fde = 0.0;
  std::vector<PedestrianMetric> per_pedestrian;
  std::size_t count = 0;
};

/// Matches predictions to ground truth by pedestrian id and compares them on
/// the predicted frame indices. Throws when a prediction has no ground truth
/// covering its frames.
MetricResult evaluate(std::span<const Trajectory> predictions, std::span<const Trajectory> ground_truth);

struct SpeedHistogram
{
  double bin_width = 0.0;
  std::vector<std::size_t> counts;  // bins over [0, 2.7 + bin_width]
  double median = 0.0;
  std::size_t samples = 0;

  double bin_low(std::size_t i) const { return bin_width * static_cast<double>(i); }
  double bin_high(std::size_t i) const { return bin_width * static_cast<double>(i + 1); }
};

/// Instantaneous speeds from consecutive frames. Speeds past the last bin are
/// counted in it.
SpeedHistogram speed_histogram(std::span<const Trajectory> trajectories, double bin_width);
std::vector<double> instantaneous_speeds(std::span<const Trajectory> trajectories);

/// Large-effect threshold on |Cliff's delta|.
inline constexpr double kLargeEffect = 0.474;

struct StatResult
{
  double u_statistic = 0.0;  // U of the first sample
  double p_value = 1.0;      // two-sided, normal approximation with tie correction
  double cliffs_delta = 0.0;
  bool large_effect = false;
};

StatResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// (#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|).
double cliffs_delta(std::span<const double> a, std::span<const double> b);

/// A held-out scene: the initial world and the observed trajectories of its
/// agents (horizon + 1 frames each, aligned with the rollout).
struct EvaluationScene
{
  World initial;
  std::vector<Trajectory> ground_truth;
};

struct ProviderRow
{
  std::string provider;
  MetricResult metrics;
};

/// Rolls every scene out under each provider (horizon from the ground truth)
/// and scores the agents against the ground truth.
std::vector<ProviderRow> compare_providers(
  std::span<const EvaluationScene> scenes, std::span<const ForceProvider> providers, const RolloutConfig & cfg);

void write_table(std::ostream & out, std::span<const ProviderRow> rows);
void write_table_csv(std::ostream & out, std::span<const ProviderRow> rows);
void write_histogram_csv(std::ostream & out, const SpeedHistogram & hist);

}  // namespace pedforce

#endif  // PEDFORCE_EVAL_HPP_
