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

#ifndef PEDFORCE_TESTS_SUPPORT_HPP_
#define PEDFORCE_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pedforce/geometry.hpp"
#include "pedforce/trajectory.hpp"

namespace pedforce::test
{

/// Trajectory sampled at the nominal rate starting from frame 0.
inline Trajectory make_traj(std::int64_t id, std::initializer_list<Vec2> positions, std::int64_t first_frame = 0)
{
  Trajectory t;
  t.pedestrian_id = id;
  std::int64_t f = first_frame;
  for (const auto & p : positions) {
    t.frames.push_back({f, static_cast<double>(f) * kFramePeriod, p});
    ++f;
  }
  return t;
}

/// Straight walk of `n` frames at `speed` along `dir` from `start`.
inline Trajectory straight_walk(std::int64_t id, Vec2 start, Vec2 dir, double speed, std::size_t n)
{
  Trajectory t;
  t.pedestrian_id = id;
  for (std::size_t i = 0; i < n; ++i) {
    const double time = static_cast<double>(i) * kFramePeriod;
    t.frames.push_back({static_cast<std::int64_t>(i), time, start + dir * (speed * time)});
  }
  return t;
}

inline Vec2 random_vec(std::mt19937_64 & rng, double lo, double hi)
{
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng);
  return {x, u(rng)};
}

}  // namespace pedforce::test

#endif  // PEDFORCE_TESTS_SUPPORT_HPP_
