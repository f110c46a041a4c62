#pragma once

// World geometry, raycast lidar sensing and randomized scenario generation.

#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "connav/connectivity.hpp"
#include "connav/geom.hpp"
#include "connav/rng.hpp"

namespace connav {

/// Raised when rejection sampling exhausts its retry budget, which signals
/// an over-constrained scenario configuration.
struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LidarScan {
  static constexpr int kBeams = 90;
  std::array<double, kBeams> ranges{};
  double max_range = 0.0;
};

struct WorldMap {
  Rect bounds;
  std::vector<Obstacle> obstacles;
  Vec2 goal;
  double goal_radius = 0.5;
  std::vector<Vec2> spawns;
};

struct ScenarioConfig {
  int n_robots = 3;
  int obstacle_count_min = 2;
  int obstacle_count_max = 6;
  double obstacle_size_min = 0.4;  // circle diameter / rectangle edge, meters
  double obstacle_size_max = 1.2;
  double map_side = 8.0;
  double goal_radius = 0.5;
  double clearance = 0.1;
  double robot_radius = 0.18;
  double comm_radius = 2.0;
  uint64_t seed = 0;
};

namespace detail {
inline constexpr int kRejectionBudget = 10000;  // draws per sampled element
inline constexpr double kGoalWallMargin = 1.0;
}  // namespace detail

/// One full 360-degree scan for robot `i`. Beam k points along angle
/// 2*pi*k/90 in the world frame (the robots are heading-less). Ranges are
/// the closest hit over obstacles, the four boundary walls and the other
/// robots modeled as discs of radius `robot_radius`, capped at `max_range`.
inline LidarScan lidar_scan(const WorldMap& map,
                            const std::vector<Vec2>& robot_positions, int i,
                            double max_range, double robot_radius) {
  LidarScan scan;
  scan.max_range = max_range;
  const Vec2 origin = robot_positions[i];
  for (int k = 0; k < LidarScan::kBeams; ++k) {
    const double angle = 2.0 * M_PI * k / LidarScan::kBeams;
    const Vec2 dir{std::cos(angle), std::sin(angle)};
    double best = max_range;

    // Boundary walls: distance at which the beam exits the bounds rectangle.
    {
      double t_exit = std::numeric_limits<double>::infinity();
      if (dir.x > 1e-12) t_exit = std::min(t_exit, (map.bounds.max.x - origin.x) / dir.x);
      if (dir.x < -1e-12) t_exit = std::min(t_exit, (map.bounds.min.x - origin.x) / dir.x);
      if (dir.y > 1e-12) t_exit = std::min(t_exit, (map.bounds.max.y - origin.y) / dir.y);
      if (dir.y < -1e-12) t_exit = std::min(t_exit, (map.bounds.min.y - origin.y) / dir.y);
      best = std::min(best, std::max(t_exit, 0.0));
    }

    for (const auto& obs : map.obstacles) {
      const auto hit = std::visit(
          [&](const auto& shape) { return ray_hit(origin, dir, shape); }, obs);
      if (hit) best = std::min(best, *hit);
    }

    for (int j = 0; j < static_cast<int>(robot_positions.size()); ++j) {
      if (j == i) continue;
      const auto hit =
          ray_circle(origin, dir, Circle{robot_positions[j], robot_radius});
      if (hit) best = std::min(best, *hit);
    }

    scan.ranges[k] = std::min(best, max_range);
  }
  return scan;
}

/// Invariant check shared by the generator and the test oracles: spawn
/// separation, obstacle-free spawn/goal discs, and a connected initial
/// communication graph.
inline bool map_satisfies_invariants(const WorldMap& map,
                                     const ScenarioConfig& cfg) {
  for (const auto& obs : map.obstacles) {
    const bool inside = std::visit(
        [&](const auto& shape) {
          if constexpr (std::is_same_v<std::decay_t<decltype(shape)>, Circle>) {
            return shape.radius > 0.0 &&
                   shape.center.x - shape.radius >= map.bounds.min.x &&
                   shape.center.x + shape.radius <= map.bounds.max.x &&
                   shape.center.y - shape.radius >= map.bounds.min.y &&
                   shape.center.y + shape.radius <= map.bounds.max.y;
          } else {
            return shape.width() > 0.0 && shape.height() > 0.0 &&
                   map.bounds.contains(shape.min) && map.bounds.contains(shape.max);
          }
        },
        obs);
    if (!inside) return false;
  }

  if (obstacle_clearance(map.obstacles, map.goal) < map.goal_radius) return false;

  const int n = static_cast<int>(map.spawns.size());
  for (int i = 0; i < n; ++i) {
    if (!map.bounds.contains(map.spawns[i])) return false;
    if (obstacle_clearance(map.obstacles, map.spawns[i]) <
        cfg.robot_radius + cfg.clearance)
      return false;
    for (int j = i + 1; j < n; ++j) {
      if (distance(map.spawns[i], map.spawns[j]) <
          2.0 * cfg.robot_radius + cfg.clearance)
        return false;
    }
  }

  if (n >= 2 &&
      lambda2(map.spawns, cfg.comm_radius) <= kConnectivityEps)
    return false;
  return true;
}

/// Rejection-samples obstacles, then the goal, then a spawn cluster until
/// the WorldMap invariants hold. Deterministic given the rng state.
inline WorldMap generate_scenario(const ScenarioConfig& cfg, Rng& rng) {
  if (cfg.n_robots < 1 || cfg.obstacle_count_min > cfg.obstacle_count_max ||
      cfg.obstacle_size_min <= 0.0 ||
      cfg.obstacle_size_min > cfg.obstacle_size_max || cfg.map_side <= 0.0)
    throw GenerationFailed("invalid scenario config");

  WorldMap map;
  map.bounds = Rect{{0.0, 0.0}, {cfg.map_side, cfg.map_side}};
  map.goal_radius = cfg.goal_radius;

  const int n_obstacles = rng.uniform_int(cfg.obstacle_count_min, cfg.obstacle_count_max);
  for (int k = 0; k < n_obstacles; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < detail::kRejectionBudget && !placed; ++attempt) {
      if (rng.uniform() < 0.5) {
        const double r = 0.5 * rng.uniform(cfg.obstacle_size_min, cfg.obstacle_size_max);
        const Vec2 c{rng.uniform(map.bounds.min.x + r, map.bounds.max.x - r),
                     rng.uniform(map.bounds.min.y + r, map.bounds.max.y - r)};
        map.obstacles.push_back(Circle{c, r});
      } else {
        const double w = rng.uniform(cfg.obstacle_size_min, cfg.obstacle_size_max);
        const double h = rng.uniform(cfg.obstacle_size_min, cfg.obstacle_size_max);
        const Vec2 lo{rng.uniform(map.bounds.min.x, map.bounds.max.x - w),
                      rng.uniform(map.bounds.min.y, map.bounds.max.y - h)};
        map.obstacles.push_back(Rect{lo, lo + Vec2{w, h}});
      }
      placed = true;
    }
  }

  // Goal disc: obstacle-free with room for a robot, and away from the walls
  // so the whole team can actually stand inside the zone.
  const double goal_margin =
      std::min(detail::kGoalWallMargin, 0.4 * cfg.map_side);
  bool goal_ok = false;
  for (int attempt = 0; attempt < detail::kRejectionBudget && !goal_ok; ++attempt) {
    map.goal = Vec2{rng.uniform(map.bounds.min.x + goal_margin, map.bounds.max.x - goal_margin),
                    rng.uniform(map.bounds.min.y + goal_margin, map.bounds.max.y - goal_margin)};
    goal_ok = obstacle_clearance(map.obstacles, map.goal) >=
              cfg.goal_radius + cfg.robot_radius;
  }
  if (!goal_ok) throw GenerationFailed("could not place goal disc");

  // Spawns: a cluster of radius comm_radius/2 keeps every pair within
  // comm_radius, so the initial graph is complete; the lambda2 check below
  // still validates the invariant independently.
  const double cluster_r = 0.5 * cfg.comm_radius;
  const double spawn_margin = cfg.robot_radius + cfg.clearance;
  for (int set_attempt = 0; set_attempt < 1000; ++set_attempt) {
    const Vec2 center{
        rng.uniform(map.bounds.min.x + spawn_margin, map.bounds.max.x - spawn_margin),
        rng.uniform(map.bounds.min.y + spawn_margin, map.bounds.max.y - spawn_margin)};
    if (distance(center, map.goal) < 2.0 * cfg.goal_radius) continue;

    map.spawns.clear();
    bool set_ok = true;
    for (int i = 0; i < cfg.n_robots && set_ok; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < detail::kRejectionBudget && !placed; ++attempt) {
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        const double rad = cluster_r * std::sqrt(rng.uniform());
        const Vec2 p = center + Vec2{rad * std::cos(ang), rad * std::sin(ang)};
        if (p.x < map.bounds.min.x + spawn_margin || p.x > map.bounds.max.x - spawn_margin ||
            p.y < map.bounds.min.y + spawn_margin || p.y > map.bounds.max.y - spawn_margin)
          continue;
        if (obstacle_clearance(map.obstacles, p) < spawn_margin) continue;
        if (distance(p, map.goal) < map.goal_radius) continue;
        bool separated = true;
        for (const auto& q : map.spawns) {
          if (distance(p, q) < 2.0 * cfg.robot_radius + cfg.clearance) {
            separated = false;
            break;
          }
        }
        if (!separated) continue;
        map.spawns.push_back(p);
        placed = true;
      }
      set_ok = placed;
    }
    if (set_ok && map_satisfies_invariants(map, cfg)) return map;
  }
  throw GenerationFailed("could not place a valid spawn set");
}

// --- JSON map files -------------------------------------------------------
// Schema: {bounds:{min,max}, obstacles:[...], goal, goal_radius, spawns},
// all lengths in meters. Doubles round-trip exactly through nlohmann::json.

inline nlohmann::json to_json(const Vec2& v) { return nlohmann::json{v.x, v.y}; }

inline Vec2 vec2_from_json(const nlohmann::json& j) {
  return Vec2{j.at(0).get<double>(), j.at(1).get<double>()};
}

inline nlohmann::json to_json(const WorldMap& map) {
  nlohmann::json j;
  j["bounds"] = {{"min", to_json(map.bounds.min)}, {"max", to_json(map.bounds.max)}};
  j["obstacles"] = nlohmann::json::array();
  for (const auto& obs : map.obstacles) {
    if (const auto* c = std::get_if<Circle>(&obs)) {
      j["obstacles"].push_back({{"type", "circle"},
                                {"center", to_json(c->center)},
                                {"radius", c->radius}});
    } else {
      const auto& r = std::get<Rect>(obs);
      j["obstacles"].push_back(
          {{"type", "rect"}, {"min", to_json(r.min)}, {"max", to_json(r.max)}});
    }
  }
  j["goal"] = to_json(map.goal);
  j["goal_radius"] = map.goal_radius;
  j["spawns"] = nlohmann::json::array();
  for (const auto& s : map.spawns) j["spawns"].push_back(to_json(s));
  return j;
}

inline WorldMap map_from_json(const nlohmann::json& j) {
  WorldMap map;
  map.bounds = Rect{vec2_from_json(j.at("bounds").at("min")),
                    vec2_from_json(j.at("bounds").at("max"))};
  for (const auto& o : j.at("obstacles")) {
    const std::string type = o.at("type").get<std::string>();
    if (type == "circle") {
      map.obstacles.push_back(
          Circle{vec2_from_json(o.at("center")), o.at("radius").get<double>()});
    } else if (type == "rect") {
      map.obstacles.push_back(
          Rect{vec2_from_json(o.at("min")), vec2_from_json(o.at("max"))});
    } else {
      throw std::runtime_error("unknown obstacle type: " + type);
    }
  }
  map.goal = vec2_from_json(j.at("goal"));
  map.goal_radius = j.at("goal_radius").get<double>();
  for (const auto& s : j.at("spawns")) map.spawns.push_back(vec2_from_json(s));
  return map;
}

inline void save_map(const WorldMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write map file: " + path);
  out << to_json(map).dump(2) << "\n";
}

inline WorldMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read map file: " + path);
  nlohmann::json j;
  in >> j;
  return map_from_json(j);
}

}  // namespace connav
