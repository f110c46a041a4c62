#pragma once

// 2D primitives and ray casting used by the lidar simulator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace connav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double px, double py) : x(px), y(py) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

  Vec2& operator+=(const Vec2& r) {
    x += r.x;
    y += r.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& r) {
    x -= r.x;
    y -= r.y;
    return *this;
  }

  constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
  constexpr double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::sqrt(squared_norm()); }

  /// Unit vector in the same direction; {0,0} when the norm is <= eps.
  Vec2 normalized(double eps = 1e-12) const {
    const double n = norm();
    if (n <= eps) return {0.0, 0.0};
    return {x / n, y / n};
  }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

struct Rect {
  Vec2 min;
  Vec2 max;

  constexpr bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  constexpr double width() const { return max.x - min.x; }
  constexpr double height() const { return max.y - min.y; }
};

using Obstacle = std::variant<Circle, Rect>;

/// Smallest nonnegative ray parameter hitting the circle boundary.
/// `dir` must be unit length. Returns 0 when the origin is inside.
inline std::optional<double> ray_circle(const Vec2& origin, const Vec2& dir,
                                        const Circle& c) {
  const Vec2 m = c.center - origin;
  if (m.squared_norm() <= c.radius * c.radius) return 0.0;
  const double b = m.dot(dir);
  const double disc = b * b - (m.squared_norm() - c.radius * c.radius);
  if (disc < 0.0) return std::nullopt;
  const double t = b - std::sqrt(disc);
  if (t < 0.0) return std::nullopt;
  return t;
}

/// Slab intersection against an axis-aligned rectangle. Unit `dir`;
/// 0 when the origin is inside, nullopt when the ray misses.
inline std::optional<double> ray_rect(const Vec2& origin, const Vec2& dir,
                                      const Rect& r) {
  constexpr double kParallelEps = 1e-12;
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();

  const double o[2] = {origin.x, origin.y};
  const double d[2] = {dir.x, dir.y};
  const double lo[2] = {r.min.x, r.min.y};
  const double hi[2] = {r.max.x, r.max.y};

  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < kParallelEps) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) return std::nullopt;
      continue;
    }
    double t1 = (lo[axis] - o[axis]) / d[axis];
    double t2 = (hi[axis] - o[axis]) / d[axis];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  if (tmin > tmax || tmax < 0.0) return std::nullopt;
  return std::max(tmin, 0.0);
}

inline std::optional<double> ray_hit(const Vec2& origin, const Vec2& dir,
                                     const Circle& c) {
  return ray_circle(origin, dir, c);
}

inline std::optional<double> ray_hit(const Vec2& origin, const Vec2& dir,
                                     const Rect& r) {
  return ray_rect(origin, dir, r);
}

inline double distance_to(const Circle& c, const Vec2& p) {
  return std::max(0.0, distance(c.center, p) - c.radius);
}

inline double distance_to(const Rect& r, const Vec2& p) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

inline double distance_to(const Obstacle& obs, const Vec2& p) {
  return std::visit([&](const auto& shape) { return distance_to(shape, p); }, obs);
}

/// Distance from `p` to the nearest obstacle surface; +inf when none exist.
inline double obstacle_clearance(const std::vector<Obstacle>& obstacles,
                                 const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obs : obstacles) best = std::min(best, distance_to(obs, p));
  return best;
}

}  // namespace connav
