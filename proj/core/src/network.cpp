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

#include "pedforce/network.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "pedforce/error.hpp"

namespace pedforce
{

std::string_view to_string(NetworkId id)
{
  switch (id) {
    case NetworkId::Goal:
      return "goal";
    case NetworkId::Obstacle:
      return "obstacle";
    case NetworkId::Pedestrian:
      return "pedestrian";
    case NetworkId::Robot:
      return "robot";
    case NetworkId::Group:
      return "group";
  }
  return "goal";
}

std::optional<NetworkId> parse_network_id(std::string_view text)
{
  for (std::uint32_t i = 0; i < kNetworkCount; ++i) {
    const auto id = static_cast<NetworkId>(i);
    if (to_string(id) == text) {
      return id;
    }
  }
  return std::nullopt;
}

DenseLayer DenseLayer::zeros(std::size_t inputs, std::size_t outputs, Activation activation)
{
  return {inputs, outputs, activation, std::vector<double>(inputs * outputs, 0.0), std::vector<double>(outputs, 0.0)};
}

Mlp Mlp::zeros(std::size_t inputs, std::span<const std::size_t> hidden, std::size_t outputs)
{
  Mlp m;
  std::size_t width = inputs;
  for (auto h : hidden) {
    m.layers.push_back(DenseLayer::zeros(width, h, Activation::Tanh));
    width = h;
  }
  m.layers.push_back(DenseLayer::zeros(width, outputs, Activation::Linear));
  return m;
}

std::size_t NetworkWeights::input_size() const
{
  switch (topology) {
    case Topology::Single:
      return stages.at(0).input_size();
    case Topology::TwinSum:
      return stages.at(0).input_size() + stages.at(1).input_size();
    case Topology::TwoStage:
      return stages.at(0).input_size() + stages.at(1).input_size() - stages.at(0).output_size();
  }
  return 0;
}

std::size_t NetworkWeights::layer_count() const
{
  std::size_t n = 0;
  for (const auto & s : stages) {
    n += s.layers.size();
  }
  return n;
}

void NetworkWeights::validate() const
{
  const std::size_t expected_stages = topology == Topology::Single ? 1 : 2;
  if (stages.size() != expected_stages) {
    throw Error("network has " + std::to_string(stages.size()) + " stages, expected " + std::to_string(expected_stages));
  }
  for (const auto & s : stages) {
    if (s.layers.empty()) {
      throw Error("network stage has no layers");
    }
    for (std::size_t l = 0; l < s.layers.size(); ++l) {
      const auto & layer = s.layers[l];
      if (layer.weights.size() != layer.inputs * layer.outputs || layer.bias.size() != layer.outputs) {
        throw Error("layer parameter count does not match its dimensions");
      }
      if (l > 0 && s.layers[l - 1].outputs != layer.inputs) {
        throw Error("consecutive layer dimensions are incompatible");
      }
    }
  }
  switch (topology) {
    case Topology::Single:
      if (stages[0].output_size() != 2) {
        throw Error("network must output a 2-vector");
      }
      break;
    case Topology::TwinSum:
      if (stages[0].output_size() != 2 || stages[1].output_size() != 2 || stages[0].input_size() != split) {
        throw Error("twin-branch network must have 2-vector branches split at the declared column");
      }
      break;
    case Topology::TwoStage:
      if (stages[0].output_size() != 1 || stages[1].output_size() != 2 || stages[0].input_size() != split ||
          stages[1].input_size() < 1) {
        throw Error("two-stage network must map to a scalar and then to a 2-vector");
      }
      break;
  }
}

NetworkLayout layout_for(NetworkId id)
{
  switch (id) {
    case NetworkId::Goal:  // velocity | goal direction
      return {4, Topology::TwinSum, 2};
    case NetworkId::Obstacle:  // distance | direction
      return {3, Topology::TwoStage, 1};
    case NetworkId::Pedestrian:  // velocity | distance, direction
      return {5, Topology::TwinSum, 2};
    case NetworkId::Robot:  // distance, moving | direction
      return {4, Topology::TwoStage, 2};
    case NetworkId::Group:  // goal-aligned speed | centroid distance, direction
      return {4, Topology::TwinSum, 1};
  }
  throw Error("unknown network id");
}

NetworkWeights make_network(NetworkId id, std::span<const std::size_t> hidden)
{
  const auto layout = layout_for(id);
  NetworkWeights net;
  net.id = id;
  net.topology = layout.topology;
  net.split = layout.split;
  if (layout.topology == Topology::TwinSum) {
    net.stages.push_back(Mlp::zeros(layout.split, hidden, 2));
    net.stages.push_back(Mlp::zeros(layout.inputs - layout.split, hidden, 2));
  } else {
    net.stages.push_back(Mlp::zeros(layout.split, hidden, 1));
    net.stages.push_back(Mlp::zeros(1 + layout.inputs - layout.split, hidden, 2));
  }
  return net;
}

void initialize(NetworkWeights & net, double scale, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  for (auto & stage : net.stages) {
    for (auto & layer : stage.layers) {
      const double s = scale / std::sqrt(static_cast<double>(layer.inputs));
      std::uniform_real_distribution<double> dist(-s, s);
      for (auto & w : layer.weights) {
        w = dist(gen);
      }
      std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
    }
  }
}

namespace
{

/// acts[0] is the input; acts[l + 1] the output of layer l.
void run_mlp(const Mlp & m, std::span<const double> input, std::vector<std::vector<double>> & acts)
{
  acts.resize(m.layers.size() + 1);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto & layer = m.layers[l];
    const auto & in = acts[l];
    auto & out = acts[l + 1];
    out.resize(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double * row = layer.weights.data() + o * layer.inputs;
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        z += row[i] * in[i];
      }
      out[o] = layer.activation == Activation::Tanh ? std::tanh(z) : z;
    }
  }
}

/// Accumulates parameter gradients into `grad` given d loss / d output in
/// `delta` (consumed). Leaves d loss / d input in `input_grad`.
void backprop_mlp(
  const Mlp & m, const std::vector<std::vector<double>> & acts, std::vector<double> & delta, Mlp & grad,
  std::vector<double> & next_delta, std::vector<double> & input_grad)
{
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const auto & layer = m.layers[l];
    auto & g = grad.layers[l];
    const auto & in = acts[l];
    const auto & out = acts[l + 1];
    if (layer.activation == Activation::Tanh) {
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        delta[o] *= 1.0 - out[o] * out[o];
      }
    }
    next_delta.assign(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double d = delta[o];
      const double * row = layer.weights.data() + o * layer.inputs;
      double * grow = g.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        grow[i] += d * in[i];
        next_delta[i] += row[i] * d;
      }
      g.bias[o] += d;
    }
    delta.swap(next_delta);
  }
  input_grad = delta;
}

void check_input(const NetworkWeights & net, std::span<const double> input)
{
  if (input.size() != net.input_size()) {
    throw Error(
      "network " + std::string(to_string(net.id)) + " expects " + std::to_string(net.input_size()) +
      " inputs, got " + std::to_string(input.size()));
  }
}

Vec2 forward_traced(const NetworkWeights & net, std::span<const double> input, Workspace & ws)
{
  check_input(net, input);
  switch (net.topology) {
    case Topology::Single: {
      run_mlp(net.stages[0], input, ws.activations[0]);
      const auto & out = ws.activations[0].back();
      return {out[0], out[1]};
    }
    case Topology::TwinSum: {
      run_mlp(net.stages[0], input.subspan(0, net.split), ws.activations[0]);
      run_mlp(net.stages[1], input.subspan(net.split), ws.activations[1]);
      const auto & a = ws.activations[0].back();
      const auto & b = ws.activations[1].back();
      return {a[0] + b[0], a[1] + b[1]};
    }
    case Topology::TwoStage: {
      run_mlp(net.stages[0], input.subspan(0, net.split), ws.activations[0]);
      ws.stage_input.clear();
      ws.stage_input.push_back(ws.activations[0].back()[0]);
      ws.stage_input.insert(ws.stage_input.end(), input.begin() + static_cast<std::ptrdiff_t>(net.split), input.end());
      run_mlp(net.stages[1], ws.stage_input, ws.activations[1]);
      const auto & out = ws.activations[1].back();
      return {out[0], out[1]};
    }
  }
  return {};
}

}  // namespace

Vec2 forward(const NetworkWeights & net, std::span<const double> input)
{
  thread_local Workspace ws;
  return forward_traced(net, input, ws);
}

double accumulate_gradient(
  const NetworkWeights & net, std::span<const double> input, const Vec2 & target, NetworkWeights & gradient,
  Workspace & ws)
{
  const Vec2 out = forward_traced(net, input, ws);
  const Vec2 r = out - target;
  const double loss = r.squared_norm();
  switch (net.topology) {
    case Topology::Single:
      ws.delta = {2.0 * r.x, 2.0 * r.y};
      backprop_mlp(net.stages[0], ws.activations[0], ws.delta, gradient.stages[0], ws.next_delta, ws.input_grad);
      break;
    case Topology::TwinSum:
      for (std::size_t b = 0; b < 2; ++b) {
        ws.delta = {2.0 * r.x, 2.0 * r.y};
        backprop_mlp(net.stages[b], ws.activations[b], ws.delta, gradient.stages[b], ws.next_delta, ws.input_grad);
      }
      break;
    case Topology::TwoStage: {
      ws.delta = {2.0 * r.x, 2.0 * r.y};
      backprop_mlp(net.stages[1], ws.activations[1], ws.delta, gradient.stages[1], ws.next_delta, ws.input_grad);
      ws.delta = {ws.input_grad[0]};
      backprop_mlp(net.stages[0], ws.activations[0], ws.delta, gradient.stages[0], ws.next_delta, ws.input_grad);
      break;
    }
  }
  return loss;
}

NetworkWeights zeros_like(const NetworkWeights & net)
{
  NetworkWeights z = net;
  for (auto & s : z.stages) {
    for (auto & l : s.layers) {
      std::fill(l.weights.begin(), l.weights.end(), 0.0);
      std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
  }
  return z;
}

Backward backward(const NetworkWeights & net, std::span<const double> input, const Vec2 & target)
{
  Backward out;
  out.gradient = zeros_like(net);
  Workspace ws;
  out.loss = accumulate_gradient(net, input, target, out.gradient, ws);
  return out;
}

std::size_t parameter_count(const NetworkWeights & net)
{
  std::size_t n = 0;
  for (const auto & s : net.stages) {
    for (const auto & l : s.layers) {
      n += l.weights.size() + l.bias.size();
    }
  }
  return n;
}

std::vector<double> flatten(const NetworkWeights & net)
{
  std::vector<double> out;
  out.reserve(parameter_count(net));
  for (const auto & s : net.stages) {
    for (const auto & l : s.layers) {
      out.insert(out.end(), l.weights.begin(), l.weights.end());
      out.insert(out.end(), l.bias.begin(), l.bias.end());
    }
  }
  return out;
}

void unflatten(NetworkWeights & net, std::span<const double> params)
{
  if (params.size() != parameter_count(net)) {
    throw Error("parameter vector length does not match the network");
  }
  std::size_t k = 0;
  for (auto & s : net.stages) {
    for (auto & l : s.layers) {
      for (auto & w : l.weights) {
        w = params[k++];
      }
      for (auto & b : l.bias) {
        b = params[k++];
      }
    }
  }
}

namespace
{

constexpr char kMagic[4] = {'P', 'F', 'N', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream & out, std::uint32_t v)
{
  char b[4];
  for (int i = 0; i < 4; ++i) {
    b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  }
  out.write(b, 4);
}

void put_f64(std::ostream & out, double v)
{
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  }
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream & in)
{
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char *>(b), 4)) {
    throw Error("weight file truncated");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  }
  return v;
}

double get_f64(std::istream & in)
{
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char *>(b), 8)) {
    throw Error("weight file truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  }
  return std::bit_cast<double>(v);
}

std::size_t get_dim(std::istream & in)
{
  const double v = get_f64(in);
  if (!(v >= 0.0 && v < 1e6) || v != std::floor(v)) {
    throw Error("weight file has an invalid layer descriptor");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_weights(std::ostream & out, const NetworkWeights & net)
{
  net.validate();
  const auto layout = layout_for(net.id);
  if (layout.topology != net.topology || layout.split != net.split || layout.inputs != net.input_size()) {
    throw Error("network does not match the layout of '" + std::string(to_string(net.id)) + "'");
  }
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(net.id));
  put_u32(out, static_cast<std::uint32_t>(net.layer_count()));
  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    for (const auto & l : net.stages[s].layers) {
      put_f64(out, static_cast<double>(s));
      put_f64(out, static_cast<double>(l.inputs));
      put_f64(out, static_cast<double>(l.outputs));
      put_f64(out, static_cast<double>(l.activation));
      for (double w : l.weights) {
        put_f64(out, w);
      }
      for (double b : l.bias) {
        put_f64(out, b);
      }
    }
  }
}

NetworkWeights read_weights(std::istream & in)
{
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw Error("not a weight file (bad magic)");
  }
  if (get_u32(in) != kVersion) {
    throw Error("unsupported weight file version");
  }
  const auto raw_id = get_u32(in);
  if (raw_id >= kNetworkCount) {
    throw Error("weight file has an unknown net_id");
  }
  const auto layers = get_u32(in);
  NetworkWeights net;
  net.id = static_cast<NetworkId>(raw_id);
  const auto layout = layout_for(net.id);
  net.topology = layout.topology;
  net.split = layout.split;
  net.stages.resize(layout.topology == Topology::Single ? 1 : 2);
  for (std::uint32_t k = 0; k < layers; ++k) {
    const auto stage = get_dim(in);
    if (stage >= net.stages.size()) {
      throw Error("weight file references an unknown stage");
    }
    DenseLayer l;
    l.inputs = get_dim(in);
    l.outputs = get_dim(in);
    const auto act = get_dim(in);
    if (act > 1) {
      throw Error("weight file has an unknown activation");
    }
    l.activation = static_cast<Activation>(act);
    l.weights.resize(l.inputs * l.outputs);
    l.bias.resize(l.outputs);
    for (auto & w : l.weights) {
      w = get_f64(in);
    }
    for (auto & b : l.bias) {
      b = get_f64(in);
    }
    net.stages[stage].layers.push_back(std::move(l));
  }
  net.validate();
  if (net.input_size() != layout.inputs) {
    throw Error("weight file input width does not match its net_id");
  }
  return net;
}

}  // namespace pedforce
