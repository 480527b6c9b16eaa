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

#ifndef PEDFORCE_GEOMETRY_HPP_
#define PEDFORCE_GEOMETRY_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

namespace pedforce
{

/// Planar vector. Positions are meters; the same type carries velocities (m/s)
/// and forces (m/s^2, unit pedestrian mass).
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 & operator-=(const Vec2 & o)
  {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 & operator*=(double s)
  {
    x *= s;
    y *= s;
    return *this;
  }

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }

  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2 & b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 & b) { return a -= b; }
constexpr Vec2 operator-(const Vec2 & a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator/(const Vec2 & a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

/// Smallest norm for which a direction is considered defined.
inline constexpr double kMinNormalizable = 1e-12;

/// Unit vector along v. Throws pedforce::Error when norm(v) <= 1e-12.
Vec2 normalize(const Vec2 & v);

/// Counter-clockwise rotation by `angle` radians.
Vec2 rotate(const Vec2 & v, double angle);

/// Heading angle atan2(y, x) in (-pi, pi].
inline double heading_of(const Vec2 & v) { return std::atan2(v.y, v.x); }

/// Wraps an angle to [-pi, pi).
double wrap_angle(double angle);

bool is_finite(const Vec2 & v);

struct Segment
{
  Vec2 a;
  Vec2 b;
};

/// Wall geometry as line segments in scene coordinates. Zero-length segments
/// behave as point obstacles.
struct ObstacleSet
{
  std::vector<Segment> segments;

  bool empty() const { return segments.empty(); }
};

struct ClosestPoint
{
  Vec2 point;
  double distance = 0.0;
  std::size_t segment = 0;
};

Vec2 closest_point_on_segment(const Vec2 & p, const Segment & s);

/// Closest point over all segments; ties go to the lowest segment index.
/// Throws pedforce::Error("no obstacles") on an empty set.
ClosestPoint nearest_obstacle_point(const Vec2 & p, const ObstacleSet & obstacles);

}  // namespace pedforce

#endif  // PEDFORCE_GEOMETRY_HPP_
