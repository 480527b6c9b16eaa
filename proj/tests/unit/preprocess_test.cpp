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
#include <random>

#include "doctest.h"
#include "pedforce/error.hpp"
#include "pedforce/preprocess.hpp"
#include "support.hpp"

using namespace pedforce;
using pedforce::test::make_traj;
using pedforce::test::straight_walk;

namespace
{

/// Walks the polyline `corners` in steps of `step` metres, one frame each.
Trajectory polyline(std::int64_t id, std::vector<Vec2> corners, double step)
{
  Trajectory t;
  t.pedestrian_id = id;
  std::int64_t f = 0;
  auto push = [&](Vec2 p) {
    t.frames.push_back({f, static_cast<double>(f) * kFramePeriod, p});
    ++f;
  };
  push(corners.front());
  for (std::size_t i = 1; i < corners.size(); ++i) {
    const Vec2 a = corners[i - 1];
    const Vec2 b = corners[i];
    const auto n = static_cast<int>(std::lround(distance(a, b) / step));
    for (int k = 1; k <= n; ++k) {
      push(a + (b - a) * (static_cast<double>(k) / n));
    }
  }
  return t;
}

Trajectory with_gap(Trajectory t, std::size_t first, std::size_t count)
{
  Trajectory out;
  out.pedestrian_id = t.pedestrian_id;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i < first || i >= first + count) {
      out.frames.push_back(t.frames[i]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gap midpoint")
{
  Trajectory t;
  t.pedestrian_id = 1;
  t.frames = {{0, 0.0, {0, 0}}, {2, 2 * kFramePeriod, {0.2, 0}}};
  const auto r = repair_gaps(t, {});
  REQUIRE(r.trajectory.has_value());
  REQUIRE(r.trajectory->size() == 3);
  CHECK(r.trajectory->frames[1].frame_index == 1);
  CHECK(r.trajectory->frames[1].position.x == doctest::Approx(0.1));
  CHECK(r.trajectory->frames[1].position.y == 0.0);
  CHECK(r.interpolated_frames == 1);
}

TEST_CASE("teleportation")
{
  const auto r = repair_gaps(make_traj(1, {{0, 0}, {0.5, 0}, {0.6, 0}}), {});
  CHECK_FALSE(r.trajectory.has_value());
}

TEST_CASE("gap repair leaves complete tracks and observed positions alone")
{
  const auto clean = straight_walk(1, {0, 0}, {1, 0}, 1.4, 43);
  const auto same = repair_gaps(clean, {});
  REQUIRE(same.trajectory.has_value());
  CHECK(same.interpolated_frames == 0);
  CHECK(same.trajectory->frames.size() == clean.frames.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    CHECK(same.trajectory->frames[i].position == clean.frames[i].position);
  }

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = straight_walk(1, test::random_vec(rng, -5, 5), normalize(test::random_vec(rng, -1, 1)), 1.2, 60);
    const std::size_t first = 1 + rng() % 50;
    const std::size_t count = 1 + rng() % 5;
    const auto gapped = with_gap(t, first, count);
    const auto r = repair_gaps(gapped, {});
    REQUIRE(r.trajectory.has_value());
    CHECK(r.interpolated_frames == count);
    CHECK(r.trajectory->size() == t.size());
    for (const auto & f : gapped.frames) {
      const auto & g = r.trajectory->frames[static_cast<std::size_t>(f.frame_index)];
      CHECK(g.position == f.position);
      CHECK(g.timestamp == f.timestamp);
    }
  }
}

TEST_CASE("long gaps are rejected")
{
  const auto t = straight_walk(1, {0, 0}, {1, 0}, 0.5, 40);
  CHECK(repair_gaps(with_gap(t, 10, 5), {}).trajectory.has_value());
  CHECK_FALSE(repair_gaps(with_gap(t, 10, 6), {}).trajectory.has_value());
}

TEST_CASE("min frames")
{
  auto v = passes_filters(straight_walk(1, {0, 0}, {1, 0}, 2.6, 9), {});
  CHECK_FALSE(v.passed);
  CHECK(v.reason == RejectionReason::MinFrames);
  CHECK(meets_min_frames(straight_walk(1, {0, 0}, {1, 0}, 2.6, 10), {}));
  CHECK_FALSE(meets_min_frames(straight_walk(1, {0, 0}, {1, 0}, 2.6, 9), {}));
}

TEST_CASE("clean straight walk passes")
{
  const auto t = straight_walk(1, {0, 0}, {1, 0}, 1.4, 43);
  CHECK(arc_length(t) == doctest::Approx(3.92));
  const auto v = passes_filters(t, {});
  CHECK(v.passed);
  CHECK_FALSE(v.reason.has_value());
}

TEST_CASE("arc length threshold")
{
  const auto shortish = polyline(1, {{0, 0}, {3.49, 0}}, 0.0997);
  const auto longish = polyline(1, {{0, 0}, {3.51, 0}}, 0.1003);
  CHECK(passes_filters(shortish, {}).reason == RejectionReason::ArcLength);
  CHECK(passes_filters(longish, {}).passed);
}

TEST_CASE("speed threshold")
{
  CHECK(meets_speed_limit(straight_walk(1, {0, 0}, {1, 0}, 2.69, 40), {}));
  CHECK_FALSE(meets_speed_limit(straight_walk(1, {0, 0}, {1, 0}, 2.71, 40), {}));
  auto t = polyline(1, {{0, 0}, {5, 0}}, 0.1);
  CHECK(meets_speed_limit(t, {}));
  t.frames[20].position.x += 0.09;
  CHECK_FALSE(meets_speed_limit(t, {}));
  CHECK(passes_filters(t, {}).reason == RejectionReason::Speed);
  FilterConfig loose;
  loose.max_speed = 3.0;
  CHECK(meets_speed_limit(t, loose));
}

TEST_CASE("closed square loop")
{
  const auto t = polyline(1, {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}}, 0.1);
  CHECK(arc_length(t) == doctest::Approx(8.0));
  CHECK(net_displacement(t) == doctest::Approx(0.0).epsilon(1e-12));
  const auto v = passes_filters(t, {});
  CHECK_FALSE(v.passed);
  CHECK(v.reason == RejectionReason::Loop);
}

TEST_CASE("pacing inside a small disc is stationary")
{
  const auto t = polyline(1, {{-0.95, 0}, {0.95, 0}, {-0.5, 0}, {0.95, 0}}, 0.05);
  CHECK(arc_length(t) >= 3.5);
  CHECK_FALSE(is_loop(t, {}));
  CHECK(enclosing_radius(t) == doctest::Approx(0.95));
  CHECK(passes_filters(t, {}).reason == RejectionReason::Stationary);
}

TEST_CASE("enclosing radius")
{
  CHECK(enclosing_radius(make_traj(1, {{0, 0}})) == 0.0);
  CHECK(enclosing_radius(make_traj(1, {{0, 0}, {2, 0}, {1, 0.5}})) == doctest::Approx(1.0));
  CHECK(enclosing_radius(make_traj(1, {{0, 0}, {2, 0}, {0, 2}, {2, 2}})) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pipeline counters")
{
  CHECK(run_pipeline({}, {}).kept.empty());
  CHECK(run_pipeline({}, {}).report.total_rejected() == 0);

  std::vector<Trajectory> fixture;
  fixture.push_back(straight_walk(1, {0, 0}, {1, 0}, 1.4, 9));
  fixture.push_back(make_traj(2, {{0, 0}, {0.1, 0}, {0.6, 0}, {0.7, 0}, {0.8, 0}, {0.9, 0}, {1, 0}, {1.1, 0},
                                  {1.2, 0}, {1.3, 0}, {1.4, 0}}));
  fixture.push_back(straight_walk(3, {0, 0}, {1, 0}, 1.0, 30));
  auto fast = polyline(4, {{0, 0}, {5, 0}}, 0.1);
  fast.frames[20].position.x += 0.09;
  fixture.push_back(fast);
  fixture.push_back(polyline(5, {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}}, 0.1));
  fixture.push_back(with_gap(straight_walk(6, {0, 0}, {0, 1}, 1.4, 43), 20, 2));
  for (auto & t : fixture) {
    t.pedestrian_id = static_cast<std::int64_t>(&t - fixture.data()) + 1;
  }

  const auto out = run_pipeline(fixture, {});
  REQUIRE(out.kept.size() == 1);
  CHECK(out.kept[0].pedestrian_id == 6);
  CHECK(out.kept[0].size() == 43);
  const auto & r = out.report;
  CHECK(r.input_count == 6);
  CHECK(r.kept_count == 1);
  CHECK(r.rejected_min_frames == 1);
  CHECK(r.rejected_teleportation == 1);
  CHECK(r.rejected_arc_length == 1);
  CHECK(r.rejected_speed == 1);
  CHECK(r.rejected_behavioural == 1);
  CHECK(r.interpolated_frame_count == 2);
  CHECK(r.input_count == r.kept_count + r.total_rejected());
}

TEST_CASE("pipeline is idempotent and kept tracks satisfy every rule")
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> speed(0.3, 3.2);
  std::uniform_int_distribution<int> len(5, 80);
  std::vector<Trajectory> input;
  for (int i = 0; i < 200; ++i) {
    auto t = straight_walk(i, test::random_vec(rng, -5, 5), normalize(test::random_vec(rng, -1, 1)), speed(rng),
                           static_cast<std::size_t>(len(rng)));
    if (i % 4 == 0 && t.size() > 20) {
      t = with_gap(t, 5, 1 + rng() % 7);
    }
    input.push_back(t);
  }
  const FilterConfig cfg;
  const auto first = run_pipeline(input, cfg);
  CHECK(first.report.input_count == first.report.kept_count + first.report.total_rejected());
  CHECK(first.report.kept_count > 0);
  CHECK(first.report.kept_count < input.size());
  for (const auto & t : first.kept) {
    CHECK(meets_min_frames(t, cfg));
    CHECK(meets_arc_length(t, cfg));
    CHECK(meets_speed_limit(t, cfg));
    CHECK_FALSE(is_loop(t, cfg));
    CHECK_FALSE(is_stationary(t, cfg));
  }
  const auto second = run_pipeline(first.kept, cfg);
  CHECK(second.kept.size() == first.kept.size());
  CHECK(second.report.interpolated_frame_count == 0);
}

TEST_CASE("report format and config validation")
{
  FilterReport r;
  r.input_count = 3;
  r.kept_count = 2;
  r.rejected_speed = 1;
  const auto text = format_report(r);
  CHECK(text.find("input_count = 3") != std::string::npos);
  CHECK(text.find("rejected_speed = 1") != std::string::npos);
  FilterConfig bad;
  bad.max_speed = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
