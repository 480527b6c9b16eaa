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

#include "pedforce/training.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "pedforce/error.hpp"

namespace pedforce
{

void validate(const TrainingSample & sample)
{
  if (sample.input.size() != layout_for(sample.network).inputs) {
    throw Error("sample input width does not match network '" + std::string(to_string(sample.network)) + "'");
  }
  for (double v : sample.input) {
    if (!std::isfinite(v)) {
      throw Error("sample input is not finite");
    }
  }
  if (!is_finite(sample.target)) {
    throw Error("sample target is not finite");
  }
}

void TrainConfig::validate() const
{
  if (!(learning_rate > 0.0)) {
    throw Error("learning_rate must be positive");
  }
  if (epochs < 1) {
    throw Error("epochs must be at least 1");
  }
  if (batch_size < 1 || hidden_width < 1 || hidden_layers < 1) {
    throw Error("batch_size, hidden_width and hidden_layers must be positive");
  }
  if (!(weight_init_scale > 0.0) || !(lr_decay > 0.0 && lr_decay <= 1.0)) {
    throw Error("weight_init_scale must be positive and lr_decay in (0, 1]");
  }
}

std::span<const ParamField<TrainConfig>> train_config_fields()
{
  static const std::array<ParamField<TrainConfig>, 7> fields{{
    {"learning_rate", &TrainConfig::learning_rate, "Adam step size"},
    {"epochs", &TrainConfig::epochs, "passes over the training set"},
    {"batch_size", &TrainConfig::batch_size, "samples per gradient step"},
    {"weight_init_scale", &TrainConfig::weight_init_scale, "uniform init half-width times sqrt(fan_in)"},
    {"lr_decay", &TrainConfig::lr_decay, "per-epoch learning-rate multiplier"},
    {"hidden_width", &TrainConfig::hidden_width, "units per hidden layer"},
    {"hidden_layers", &TrainConfig::hidden_layers, "hidden layers per branch"},
  }};
  return fields;
}

double mean_loss(const NetworkWeights & net, std::span<const TrainingSample> samples)
{
  if (samples.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (const auto & s : samples) {
    total += (forward(net, s.input) - s.target).squared_norm();
  }
  return total / static_cast<double>(samples.size());
}

TrainResult train(NetworkId id, std::span<const TrainingSample> samples, const TrainConfig & cfg)
{
  cfg.validate();
  const std::vector<std::size_t> hidden(cfg.hidden_layers, cfg.hidden_width);
  auto net = make_network(id, hidden);
  initialize(net, cfg.weight_init_scale, cfg.rng_seed);
  return train(std::move(net), samples, cfg);
}

TrainResult train(NetworkWeights net, std::span<const TrainingSample> samples, const TrainConfig & cfg)
{
  cfg.validate();
  net.validate();
  if (samples.empty()) {
    throw Error("no training samples for network '" + std::string(to_string(net.id)) + "'");
  }
  for (const auto & s : samples) {
    if (s.network != net.id) {
      throw Error(
        "sample for network '" + std::string(to_string(s.network)) + "' given to '" +
        std::string(to_string(net.id)) + "'");
    }
    validate(s);
  }

  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;

  TrainResult result;
  result.initial_loss = mean_loss(net, samples);
  result.weights = net;
  double best = result.initial_loss;

  auto params = flatten(net);
  std::vector<double> m(params.size(), 0.0);
  std::vector<double> v(params.size(), 0.0);
  auto grad = zeros_like(net);
  Workspace ws;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 gen(cfg.rng_seed ^ 0x9e3779b97f4a7c15ull);
  double lr = cfg.learning_rate;
  std::uint64_t t = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), gen);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto end = std::min(order.size(), start + cfg.batch_size);
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      for (auto & stage : grad.stages) {
        for (auto & layer : stage.layers) {
          std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
          std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
        }
      }
      for (std::size_t k = start; k < end; ++k) {
        const auto & s = samples[order[k]];
        accumulate_gradient(net, s.input, s.target, grad, ws);
      }
      const auto g = flatten(grad);
      const double scale = 1.0 / static_cast<double>(end - start);
      ++t;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double gi = g[i] * scale;
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
        params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
      }
      unflatten(net, params);
    }
    const double loss = mean_loss(net, samples);
    if (!std::isfinite(loss)) {
      throw Error(
        "training of '" + std::string(to_string(net.id)) + "' diverged at epoch " + std::to_string(epoch + 1) +
        "; try a smaller learning_rate");
    }
    result.loss_history.push_back(loss);
    if (loss <= best) {
      best = loss;
      result.weights = net;
    }
    lr *= cfg.lr_decay;
  }
  return result;
}

std::vector<TrainingSample> read_samples(std::istream & in)
{
  std::vector<TrainingSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) {
        break;
      }
      rest = rest.substr(comma + 1);
    }
    const auto where = "line " + std::to_string(line_no);
    const auto id = parse_network_id(fields.front());
    if (!id) {
      throw Error(where + ": unknown network '" + std::string(fields.front()) + "'");
    }
    const auto width = layout_for(*id).inputs;
    if (fields.size() != width + 3) {
      throw Error(
        where + ": expected " + std::to_string(width + 3) + " fields for network '" + std::string(fields.front()) +
        "'");
    }
    TrainingSample s;
    s.network = *id;
    for (std::size_t i = 0; i < width; ++i) {
      s.input.push_back(parse_double(fields[1 + i], where));
    }
    s.target = {parse_double(fields[width + 1], where), parse_double(fields[width + 2], where)};
    out.push_back(std::move(s));
  }
  return out;
}

void write_samples(std::ostream & out, std::span<const TrainingSample> samples)
{
  for (const auto & s : samples) {
    validate(s);
    out << to_string(s.network);
    for (double v : s.input) {
      out << ',' << format_double(v);
    }
    out << ',' << format_double(s.target.x) << ',' << format_double(s.target.y) << '\n';
  }
}

}  // namespace pedforce
