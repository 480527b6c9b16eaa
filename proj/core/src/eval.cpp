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

#include "pedforce/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "pedforce/error.hpp"

namespace pedforce
{

double ade(const Trajectory & pred, const Trajectory & gt)
{
  if (pred.size() != gt.size()) {
    throw Error(
      "ade: length mismatch (" + std::to_string(pred.size()) + " vs " + std::to_string(gt.size()) + " frames)");
  }
  if (pred.empty()) {
    throw Error("ade: empty trajectory");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(pred.frames[i].timestamp - gt.frames[i].timestamp) > kTimestampTolerance) {
      throw Error("ade: timestamps are not aligned at frame " + std::to_string(i));
    }
    total += distance(pred.frames[i].position, gt.frames[i].position);
  }
  return total / static_cast<double>(pred.size());
}

double fde(const Trajectory & pred, const Trajectory & gt)
{
  if (pred.empty() || gt.empty()) {
    throw Error("fde: empty trajectory");
  }
  return distance(pred.back().position, gt.back().position);
}

MetricResult evaluate(std::span<const Trajectory> predictions, std::span<const Trajectory> ground_truth)
{
  std::map<std::int64_t, const Trajectory *> truth;
  for (const auto & t : ground_truth) {
    truth[t.pedestrian_id] = &t;
  }
  std::vector<const Trajectory *> preds;
  for (const auto & p : predictions) {
    preds.push_back(&p);
  }
  std::sort(preds.begin(), preds.end(), [](auto * a, auto * b) { return a->pedestrian_id < b->pedestrian_id; });

  MetricResult out;
  for (const auto * p : preds) {
    const auto it = truth.find(p->pedestrian_id);
    if (it == truth.end()) {
      throw Error("no ground truth for pedestrian " + std::to_string(p->pedestrian_id));
    }
    Trajectory aligned;
    aligned.pedestrian_id = p->pedestrian_id;
    for (const auto & f : p->frames) {
      const auto & gf = it->second->frames;
      const auto g = std::find_if(gf.begin(), gf.end(), [&](const auto & x) { return x.frame_index == f.frame_index; });
      if (g == gf.end()) {
        throw Error(
          "ground truth of pedestrian " + std::to_string(p->pedestrian_id) + " lacks frame " +
          std::to_string(f.frame_index));
      }
      aligned.frames.push_back(*g);
    }
    out.per_pedestrian.push_back({0, p->pedestrian_id, ade(*p, aligned), fde(*p, aligned)});
  }
  out.count = out.per_pedestrian.size();
  for (const auto & m : out.per_pedestrian) {
    out.ade += m.ade;
    out.fde += m.fde;
  }
  if (out.count > 0) {
    out.ade /= static_cast<double>(out.count);
    out.fde /= static_cast<double>(out.count);
  }
  return out;
}

std::vector<double> instantaneous_speeds(std::span<const Trajectory> trajectories)
{
  std::vector<double> speeds;
  for (const auto & t : trajectories) {
    for (std::size_t i = 1; i < t.size(); ++i) {
      const auto & a = t.frames[i - 1];
      const auto & b = t.frames[i];
      speeds.push_back(distance(a.position, b.position) / (b.timestamp - a.timestamp));
    }
  }
  return speeds;
}

SpeedHistogram speed_histogram(std::span<const Trajectory> trajectories, double bin_width)
{
  if (!(bin_width > 0.0)) {
    throw Error("bin_width must be positive");
  }
  SpeedHistogram h;
  h.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil((2.7 + bin_width) / bin_width - 1e-9));
  h.counts.assign(bins, 0);
  auto speeds = instantaneous_speeds(trajectories);
  for (double s : speeds) {
    const auto bin = static_cast<std::size_t>(std::floor(s / bin_width));
    ++h.counts[std::min(bin, bins - 1)];
  }
  h.samples = speeds.size();
  if (!speeds.empty()) {
    std::sort(speeds.begin(), speeds.end());
    const auto n = speeds.size();
    h.median = n % 2 == 1 ? speeds[n / 2] : 0.5 * (speeds[n / 2 - 1] + speeds[n / 2]);
  }
  return h;
}

double cliffs_delta(std::span<const double> a, std::span<const double> b)
{
  if (a.empty() || b.empty()) {
    throw Error("cliffs_delta: empty sample");
  }
  long long greater = 0;
  long long less = 0;
  for (double x : a) {
    for (double y : b) {
      greater += x > y;
      less += x < y;
    }
  }
  return static_cast<double>(greater - less) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

StatResult mann_whitney_u(std::span<const double> a, std::span<const double> b)
{
  if (a.empty() || b.empty()) {
    throw Error("mann_whitney_u: empty sample");
  }
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::vector<std::pair<double, int>> pooled;
  for (double x : a) {
    pooled.emplace_back(x, 0);
  }
  for (double y : b) {
    pooled.emplace_back(y, 1);
  }
  std::sort(pooled.begin(), pooled.end());
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) {
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second == 0) {
        rank_sum_a += midrank;
      }
    }
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  StatResult r;
  r.u_statistic = rank_sum_a - na * (na + 1.0) / 2.0;
  const double n = na + nb;
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (variance > 0.0) {
    const double z = (r.u_statistic - na * nb / 2.0) / std::sqrt(variance);
    r.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  }
  r.cliffs_delta = na * nb <= 1e6 ? cliffs_delta(a, b) : 2.0 * r.u_statistic / (na * nb) - 1.0;
  r.large_effect = std::abs(r.cliffs_delta) > kLargeEffect;
  return r;
}

std::vector<ProviderRow> compare_providers(
  std::span<const EvaluationScene> scenes, std::span<const ForceProvider> providers, const RolloutConfig & cfg)
{
  std::vector<ProviderRow> rows;
  for (const auto & provider : providers) {
    ProviderRow row;
    row.provider = std::string(to_string(provider.tag));
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      const auto & scene = scenes[s];
      if (scene.ground_truth.empty()) {
        continue;
      }
      auto c = cfg;
      c.horizon = scene.ground_truth.front().size() - 1;
      const auto result = rollout(scene.initial, provider, c);
      auto metrics = evaluate(result.trajectories, scene.ground_truth);
      for (auto & m : metrics.per_pedestrian) {
        m.scene = s;
        row.metrics.per_pedestrian.push_back(m);
      }
    }
    auto & m = row.metrics;
    m.count = m.per_pedestrian.size();
    for (const auto & p : m.per_pedestrian) {
      m.ade += p.ade;
      m.fde += p.fde;
    }
    if (m.count > 0) {
      m.ade /= static_cast<double>(m.count);
      m.fde /= static_cast<double>(m.count);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace
{

std::string fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_table(std::ostream & out, std::span<const ProviderRow> rows)
{
  std::size_t width = 8;
  for (const auto & r : rows) {
    width = std::max(width, r.provider.size());
  }
  const auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  out << pad("provider", width) << "  " << pad("ade", 8) << "  " << pad("fde", 8) << "  count\n";
  for (const auto & r : rows) {
    out << pad(r.provider, width) << "  " << pad(fixed(r.metrics.ade, 4), 8) << "  "
        << pad(fixed(r.metrics.fde, 4), 8) << "  " << r.metrics.count << '\n';
  }
}

void write_table_csv(std::ostream & out, std::span<const ProviderRow> rows)
{
  out << "provider,ade,fde,count\n";
  for (const auto & r : rows) {
    out << r.provider << ',' << fixed(r.metrics.ade, 6) << ',' << fixed(r.metrics.fde, 6) << ',' << r.metrics.count
        << '\n';
  }
}

void write_histogram_csv(std::ostream & out, const SpeedHistogram & hist)
{
  out << "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << fixed(hist.bin_low(i), 6) << ',' << fixed(hist.bin_high(i), 6) << ',' << hist.counts[i] << '\n';
  }
}

}  // namespace pedforce
