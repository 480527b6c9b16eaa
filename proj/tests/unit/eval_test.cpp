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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pedforce/error.hpp"
#include "pedforce/eval.hpp"
#include "support.hpp"

using namespace pedforce;
using pedforce::test::make_traj;

namespace
{

Trajectory shifted(const Trajectory & t, Vec2 by)
{
  auto out = t;
  for (auto & f : out.frames) {
    f.position += by;
  }
  return out;
}

struct BruteStats
{
  double u = 0.0;
  double delta = 0.0;
};

BruteStats brute(const std::vector<double> & a, const std::vector<double> & b)
{
  BruteStats s;
  double gt = 0;
  double lt = 0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) {
        s.u += 1.0;
        gt += 1;
      } else if (x == y) {
        s.u += 0.5;
      } else {
        lt += 1;
      }
    }
  }
  s.delta = (gt - lt) / static_cast<double>(a.size() * b.size());
  return s;
}

/// Tie-corrected two-sided normal approximation, from the tie-group sizes.
double normal_p(const std::vector<double> & a, const std::vector<double> & b, double u)
{
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  double ties = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) {
      ++j;
    }
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double var = n1 * n2 / 12.0 * ((n + 1) - ties / (n * (n - 1)));
  if (var <= 0) {
    return 1.0;
  }
  const double z = std::abs(u - n1 * n2 / 2) / std::sqrt(var);
  return std::min(1.0, 2.0 * (1.0 - 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)))));
}

}  // namespace

TEST_CASE("ade")
{
  const auto gt = make_traj(1, {{0, 0}, {1, 0}, {2, 0}});
  CHECK(ade(gt, gt) == 0.0);
  CHECK(ade(shifted(gt, {0.3, 0.4}), gt) == doctest::Approx(0.5).epsilon(1e-15));
  const auto pred = make_traj(1, {{0, 0}, {2, 0}, {2, 2}});
  CHECK(ade(pred, gt) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(ade(make_traj(1, {{0, 0}}), gt), Error);
  auto late = gt;
  late.frames[1].timestamp += 2e-6;  // six-decimal rounding on both sides
  CHECK(ade(late, gt) == 0.0);
  late.frames[1].timestamp += 1e-3;
  CHECK_THROWS_AS(ade(late, gt), Error);
}

TEST_CASE("fde")
{
  const auto gt = make_traj(1, {{5, 5}, {0, 0}});
  CHECK(fde(gt, gt) == 0.0);
  CHECK(fde(make_traj(1, {{9, 9}, {1, 1}}), gt) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(fde(Trajectory{}, Trajectory{}), Error);

  std::mt19937_64 rng(1);
  const auto base = fde(make_traj(1, {{0, 0}, {0, 0}, {3, 4}}), make_traj(1, {{0, 0}, {0, 0}, {0, 0}}));
  for (int i = 0; i < 20; ++i) {
    const auto p = make_traj(1, {test::random_vec(rng, -9, 9), test::random_vec(rng, -9, 9), {3, 4}});
    CHECK(fde(p, make_traj(1, {test::random_vec(rng, -9, 9), test::random_vec(rng, -9, 9), {0, 0}})) == base);
  }
}

TEST_CASE("ade and fde match brute force and are rigid-invariant")
{
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    Trajectory p;
    Trajectory g;
    double sum = 0;
    for (int k = 0; k < n; ++k) {
      const Vec2 a = test::random_vec(rng, -10, 10);
      const Vec2 b = test::random_vec(rng, -10, 10);
      p.frames.push_back({k, k * kFramePeriod, a});
      g.frames.push_back({k, k * kFramePeriod, b});
      sum += std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    }
    const double want_ade = sum / n;
    const Vec2 d = p.back().position - g.back().position;
    const double want_fde = std::sqrt(d.x * d.x + d.y * d.y);
    CHECK(std::abs(ade(p, g) - want_ade) <= 1e-12);
    CHECK(std::abs(fde(p, g) - want_fde) <= 1e-12);
    CHECK(ade(p, g) >= 0.0);

    const double th = angle(rng);
    const Vec2 t = test::random_vec(rng, -50, 50);
    auto pr = p;
    auto gr = g;
    for (auto & f : pr.frames) {
      f.position = rotate(f.position, th) + t;
    }
    for (auto & f : gr.frames) {
      f.position = rotate(f.position, th) + t;
    }
    CHECK(ade(pr, gr) == doctest::Approx(ade(p, g)).epsilon(1e-12));
  }
}

TEST_CASE("cliffs delta and U examples")
{
  const std::vector<double> a{1, 2};
  const std::vector<double> b{2, 3};
  CHECK(cliffs_delta(a, b) == -0.75);
  CHECK(cliffs_delta(a, a) == 0.0);
  const std::vector<double> hi{10, 11, 12};
  CHECK(cliffs_delta(hi, b) == 1.0);
  const auto r = mann_whitney_u(a, b);
  CHECK(r.u_statistic == 0.5);
  CHECK(r.cliffs_delta == -0.75);
  CHECK(r.large_effect);
  const std::vector<double> same{4, 4, 4};
  CHECK(mann_whitney_u(same, same).p_value == 1.0);
  CHECK_THROWS_AS(mann_whitney_u(std::vector<double>{}, b), Error);
}

TEST_CASE("U and delta match brute force")
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_int_distribution<int> small(0, 6);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(len(rng)));
    std::vector<double> b(static_cast<std::size_t>(len(rng)));
    const bool tied = trial % 2 == 0;
    for (auto & x : a) {
      x = tied ? small(rng) : normal(rng);
    }
    for (auto & x : b) {
      x = tied ? small(rng) : normal(rng) + 0.5;
    }
    const auto want = brute(a, b);
    const auto got = mann_whitney_u(a, b);
    CHECK(got.u_statistic == want.u);
    CHECK(got.cliffs_delta == want.delta);
    CHECK(cliffs_delta(a, b) == want.delta);
    CHECK(cliffs_delta(b, a) == -want.delta);
    CHECK(std::abs(got.cliffs_delta) <= 1.0);
    CHECK(got.large_effect == (std::abs(got.cliffs_delta) > 0.474));
    CHECK(got.p_value >= 0.0);
    CHECK(got.p_value <= 1.0);
    CHECK(got.p_value == doctest::Approx(normal_p(a, b, want.u)).epsilon(1e-9));
  }
}

TEST_CASE("speed histogram")
{
  const std::vector<Trajectory> one{test::straight_walk(1, {0, 0}, {1, 0}, 1.23, 20)};
  const auto h = speed_histogram(one, 0.1);
  CHECK(h.samples == 19);
  CHECK(h.counts.size() == 28);
  std::size_t occupied = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (h.counts[i] > 0) {
      ++occupied;
      CHECK(h.bin_low(i) <= 1.23);
      CHECK(h.bin_high(i) > 1.23);
    }
  }
  CHECK(occupied == 1);
  CHECK(h.median == doctest::Approx(1.23));

  const std::vector<Trajectory> still{make_traj(1, {{1, 1}, {1, 1}, {1, 1}}), make_traj(2, {{0, 0}, {0, 0}})};
  const auto s = speed_histogram(still, 0.25);
  CHECK(s.counts[0] == 3);
  CHECK(s.median == 0.0);

  std::vector<Trajectory> slow;
  for (int i = 0; i < 7; ++i) {
    slow.push_back(test::straight_walk(i, {0, static_cast<double>(i)}, {1, 0}, 0.25, 12));
  }
  CHECK(speed_histogram(slow, 0.1).median == doctest::Approx(0.25));

  const std::vector<Trajectory> fast{test::straight_walk(1, {0, 0}, {1, 0}, 9.0, 4)};
  const auto f = speed_histogram(fast, 0.5);
  CHECK(f.counts.back() == 3);
  CHECK_THROWS_AS(speed_histogram(one, 0.0), Error);
}

TEST_CASE("evaluate matches by id and frame")
{
  const auto g1 = test::straight_walk(1, {0, 0}, {1, 0}, 1.0, 30);
  const auto g2 = test::straight_walk(2, {0, 5}, {1, 0}, 1.0, 30);
  Trajectory p1;
  p1.pedestrian_id = 1;
  for (std::size_t k = 10; k < 20; ++k) {
    auto f = g1.frames[k];
    f.position.y += 0.5;
    p1.frames.push_back(f);
  }
  auto p2 = shifted(g2, {0, 1});
  const std::vector<Trajectory> preds{p1, p2};
  const std::vector<Trajectory> gts{g2, g1};
  const auto m = evaluate(preds, gts);
  CHECK(m.count == 2);
  CHECK(m.ade == doctest::Approx(0.75));
  CHECK(m.fde == doctest::Approx(0.75));
  REQUIRE(m.per_pedestrian.size() == 2);
  CHECK(m.per_pedestrian[0].pedestrian_id == 1);
  CHECK(m.per_pedestrian[0].ade == doctest::Approx(0.5));

  auto orphan = p2;
  orphan.pedestrian_id = 9;
  const std::vector<Trajectory> bad{orphan};
  CHECK_THROWS_AS(evaluate(bad, gts), Error);
}

TEST_CASE("compare_providers on one trajectory")
{
  World w;
  PedestrianAgent a;
  a.id = 1;
  a.velocity = {1, 0};
  a.goal = {20, 0};
  w.agents.push_back(a);
  auto gt = test::straight_walk(1, {0, 0.2}, {1, 0}, 1.1, 31);
  const std::vector<EvaluationScene> scenes{{w, {gt}}};
  ForceProvider p;
  p.tag = ProviderTag::SFM;
  p.params.noise_std = 0.0;
  const std::vector<ForceProvider> providers{p};
  RolloutConfig rc;
  const auto rows = compare_providers(scenes, providers, rc);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].provider == "sfm");
  rc.horizon = 30;
  const auto pred = rollout(w, p, rc).trajectories[0];
  CHECK(rows[0].metrics.ade == ade(pred, gt));
  CHECK(rows[0].metrics.fde == fde(pred, gt));
  CHECK(rows[0].metrics.count == 1);
}

TEST_CASE("table writers")
{
  MetricResult m;
  m.ade = 0.123456789;
  m.fde = 1.5;
  m.count = 12;
  const std::vector<ProviderRow> rows{{"neurosfm-no-group", m}, {"sfm", {}}};
  std::ostringstream t;
  write_table(t, rows);
  CHECK(t.str() ==
        "provider           ade       fde       count\n"
        "neurosfm-no-group  0.1235    1.5000    12\n"
        "sfm                0.0000    0.0000    0\n");
  std::ostringstream c;
  write_table_csv(c, rows);
  CHECK(c.str() == "provider,ade,fde,count\nneurosfm-no-group,0.123457,1.500000,12\nsfm,0.000000,0.000000,0\n");

  SpeedHistogram h;
  h.bin_width = 0.5;
  h.counts = {2, 0, 1};
  std::ostringstream hc;
  write_histogram_csv(hc, h);
  CHECK(hc.str() == "bin_low,bin_high,count\n0.000000,0.500000,2\n0.500000,1.000000,0\n1.000000,1.500000,1\n");
}
