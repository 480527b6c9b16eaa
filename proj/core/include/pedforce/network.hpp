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

#ifndef PEDFORCE_NETWORK_HPP_
#define PEDFORCE_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pedforce/geometry.hpp"

namespace pedforce
{

/// The five force networks. Values are the on-disk net_id.
enum class NetworkId : std::uint32_t
{
  Goal = 0,
  Obstacle = 1,
  Pedestrian = 2,
  Robot = 3,
  Group = 4,
};

inline constexpr std::size_t kNetworkCount = 5;

std::string_view to_string(NetworkId id);
std::optional<NetworkId> parse_network_id(std::string_view text);

enum class Activation : std::uint32_t
{
  Linear = 0,
  Tanh = 1,
};

/// Fully connected layer; `weights` is row-major outputs x inputs.
struct DenseLayer
{
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Activation activation = Activation::Linear;
  std::vector<double> weights;
  std::vector<double> bias;

  static DenseLayer zeros(std::size_t inputs, std::size_t outputs, Activation activation);
};

struct Mlp
{
  std::vector<DenseLayer> layers;

  std::size_t input_size() const { return layers.front().inputs; }
  std::size_t output_size() const { return layers.back().outputs; }

  /// `hidden` tanh layers of the given widths followed by a linear output.
  static Mlp zeros(std::size_t inputs, std::span<const std::size_t> hidden, std::size_t outputs);
};

/// How a network's stages combine.
///  - Single:   one MLP mapping the whole input to a force.
///  - TwinSum:  two branches over disjoint input slices [0, split) and
///              [split, n); their force outputs are summed.
///  - TwoStage: stage 0 maps the input slice [0, split) to a scalar; stage 1
///              maps (scalar, input[split..n)) to the force.
enum class Topology : std::uint32_t
{
  Single = 0,
  TwinSum = 1,
  TwoStage = 2,
};

struct NetworkWeights
{
  NetworkId id = NetworkId::Goal;
  Topology topology = Topology::Single;
  std::size_t split = 0;
  std::vector<Mlp> stages;

  std::size_t input_size() const;
  std::size_t layer_count() const;

  /// Throws pedforce::Error if stage dimensions do not compose into a
  /// 2-vector output.
  void validate() const;
};

/// Input layout of each force network: total width, topology and split.
struct NetworkLayout
{
  std::size_t inputs;
  Topology topology;
  std::size_t split;
};

NetworkLayout layout_for(NetworkId id);

/// Zero-initialised network of the fixed layout for `id`, every branch/stage
/// built from `hidden` tanh layers and a linear output.
NetworkWeights make_network(NetworkId id, std::span<const std::size_t> hidden);

/// Uniform(-s, s) weights with s = scale / sqrt(fan_in); zero biases.
void initialize(NetworkWeights & net, double scale, std::uint64_t seed);

/// Evaluates the network. Throws on input width mismatch.
Vec2 forward(const NetworkWeights & net, std::span<const double> input);

struct Backward
{
  double loss = 0.0;
  NetworkWeights gradient;  // same shape as the network
};

/// Squared-error loss ||forward(net, input) - target||^2 and its exact
/// gradient with respect to every weight and bias.
Backward backward(const NetworkWeights & net, std::span<const double> input, const Vec2 & target);

/// Adds d loss / d params for one sample into `gradient` (same shape as
/// `net`) and returns the loss. Scratch buffers live in `workspace`.
struct Workspace;
double accumulate_gradient(
  const NetworkWeights & net, std::span<const double> input, const Vec2 & target, NetworkWeights & gradient,
  Workspace & workspace);

struct Workspace
{
  std::vector<std::vector<double>> activations[2];
  std::vector<double> delta;
  std::vector<double> next_delta;
  std::vector<double> stage_input;
  std::vector<double> input_grad;
};

/// Parameter vector in file order: stage by stage, layer by layer, weights
/// then biases.
std::size_t parameter_count(const NetworkWeights & net);
std::vector<double> flatten(const NetworkWeights & net);
void unflatten(NetworkWeights & net, std::span<const double> params);

/// Same shape, every parameter zero.
NetworkWeights zeros_like(const NetworkWeights & net);

/// Binary weight file: 16-byte header (magic "PFNW", u32 version, u32 net_id,
/// u32 layer count) then, per layer, little-endian float64 values
/// [stage, inputs, outputs, activation, weights..., biases...].
void write_weights(std::ostream & out, const NetworkWeights & net);
NetworkWeights read_weights(std::istream & in);

}  // namespace pedforce

#endif  // PEDFORCE_NETWORK_HPP_
