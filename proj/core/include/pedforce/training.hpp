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

#ifndef PEDFORCE_TRAINING_HPP_
#define PEDFORCE_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pedforce/network.hpp"
#include "pedforce/params.hpp"

namespace pedforce
{

struct TrainingSample
{
  NetworkId network = NetworkId::Goal;
  std::vector<double> input;  // layout_for(network)
  Vec2 target;                // m/s^2
};

/// Throws unless the input width matches the network and everything is finite.
void validate(const TrainingSample & sample);

struct TrainConfig
{
  double learning_rate = 1e-3;
  std::size_t epochs = 60;
  std::size_t batch_size = 64;
  std::size_t rng_seed = 42;
  double weight_init_scale = 1.0;
  double lr_decay = 1.0;       // multiplier applied after every epoch
  std::size_t hidden_width = 32;
  std::size_t hidden_layers = 2;

  void validate() const;
};

std::span<const ParamField<TrainConfig>> train_config_fields();

struct TrainResult
{
  NetworkWeights weights;
  double initial_loss = 0.0;
  std::vector<double> loss_history;  // mean loss over all samples after each epoch
};

/// Mean squared force error of `net` over `samples`.
double mean_loss(const NetworkWeights & net, std::span<const TrainingSample> samples);

/// Mini-batch Adam from a seeded uniform initialisation. Samples are shuffled
/// per epoch from rng_seed; within a batch, gradients accumulate in ascending
/// sample index so results are bit-reproducible. The returned weights are
/// those of the epoch with the lowest loss (never worse than the start).
/// Throws on empty or mismatched samples and on a non-finite loss.
TrainResult train(NetworkId id, std::span<const TrainingSample> samples, const TrainConfig & cfg);

/// Continues training from `initial`.
TrainResult train(NetworkWeights initial, std::span<const TrainingSample> samples, const TrainConfig & cfg);

/// Sample CSV: one `net_id,input...,target_x,target_y` row per sample, net_id
/// being the network name. Blank lines and `#` comments are skipped.
std::vector<TrainingSample> read_samples(std::istream & in);
void write_samples(std::ostream & out, std::span<const TrainingSample> samples);

}  // namespace pedforce

#endif  // PEDFORCE_TRAINING_HPP_
