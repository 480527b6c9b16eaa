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

#include "pedforce/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "pedforce/error.hpp"

namespace pedforce
{

Vec2 normalize(const Vec2 & v)
{
  const double n = v.norm();
  if (!(n > kMinNormalizable)) {
    throw Error("normalize: vector norm too small");
  }
  return v / n;
}

Vec2 rotate(const Vec2 & v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a < 0.0) {
    a += two_pi;
  }
  return a - std::numbers::pi;
}

bool is_finite(const Vec2 & v) { return std::isfinite(v.x) && std::isfinite(v.y); }

Vec2 closest_point_on_segment(const Vec2 & p, const Segment & s)
{
  const Vec2 d = s.b - s.a;
  const double len2 = d.squared_norm();
  if (len2 <= 0.0) {
    return s.a;
  }
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return s.a + d * t;
}

ClosestPoint nearest_obstacle_point(const Vec2 & p, const ObstacleSet & obstacles)
{
  if (obstacles.empty()) {
    throw Error("no obstacles");
  }
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < obstacles.segments.size(); ++i) {
    const Vec2 q = closest_point_on_segment(p, obstacles.segments[i]);
    const double d = distance(p, q);
    if (d < best.distance) {
      best = {q, d, i};
    }
  }
  return best;
}

}  // namespace pedforce
