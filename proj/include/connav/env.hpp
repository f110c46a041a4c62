#pragma once

// Multi-robot navigation POMDP: holonomic dynamics, per-robot observations,
// shaped rewards and the shared binary disconnection cost.

#include <cassert>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "connav/connectivity.hpp"
#include "connav/geom.hpp"
#include "connav/world.hpp"

namespace connav {

struct StepAfterDone : std::logic_error {
  StepAfterDone() : std::logic_error("step() called on a finished episode") {}
};

struct EnvParams {
  double robot_radius = 0.18;
  double comm_radius = 2.0;
  double v_max = 0.7;
  double dt = 0.1;
  int t_max = 500;
  double max_range = 6.0;
  double r_coll = -100.0;
  double r_goal = 100.0;
  double w_g = 10.0;
};

/// Rescale a velocity command so its norm never exceeds v_max.
inline Vec2 clamp_action(const Vec2& a, double v_max) {
  const double n = a.norm();
  if (n <= v_max) return a;
  return a * (v_max / n);
}

struct Observation {
  std::vector<double> lidar;  // scan normalized by max_range, in [0,1]
  Vec2 velocity;              // m/s, world = local frame (heading-less)
  Vec2 goal;                  // goal position relative to the robot
  std::vector<Vec2> teammates;  // relative positions, ascending index, self skipped

  int dim() const {
    return static_cast<int>(lidar.size()) + 4 + 2 * static_cast<int>(teammates.size());
  }

  /// Flat layout consumed by the networks: [o_l, o_v, o_g, o_p].
  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd v(dim());
    int k = 0;
    for (const double r : lidar) v(k++) = r;
    v(k++) = velocity.x;
    v(k++) = velocity.y;
    v(k++) = goal.x;
    v(k++) = goal.y;
    for (const auto& p : teammates) {
      v(k++) = p.x;
      v(k++) = p.y;
    }
    return v;
  }
};

enum class DoneReason { none, success, collision, timeout };

inline const char* to_string(DoneReason r) {
  switch (r) {
    case DoneReason::none: return "none";
    case DoneReason::success: return "success";
    case DoneReason::collision: return "collision";
    case DoneReason::timeout: return "timeout";
  }
  return "none";
}

struct StepResult {
  std::vector<double> rewards;
  int cost = 0;  // shared binary disconnection signal
  bool done = false;
  DoneReason reason = DoneReason::none;
  std::vector<bool> collided;
};

inline bool robot_in_goal(const Vec2& p, const WorldMap& map, const EnvParams& prm) {
  return distance(p, map.goal) < map.goal_radius - prm.robot_radius;
}

inline bool team_in_goal(const std::vector<Vec2>& positions, const WorldMap& map,
                         const EnvParams& prm) {
  for (const auto& p : positions)
    if (!robot_in_goal(p, map, prm)) return false;
  return true;
}

inline bool robot_collides(int i, const std::vector<Vec2>& positions,
                           const WorldMap& map, const EnvParams& prm) {
  if (obstacle_clearance(map.obstacles, positions[i]) < prm.robot_radius)
    return true;
  for (int j = 0; j < static_cast<int>(positions.size()); ++j) {
    if (j != i && distance(positions[i], positions[j]) < 2.0 * prm.robot_radius)
      return true;
  }
  return false;
}

/// Per-robot reward r = r_g + r_c: the team-success bonus or the goal-progress
/// shaping term, plus the collision penalty.
inline double reward(int i, const std::vector<Vec2>& prev_positions,
                     const std::vector<Vec2>& positions, const WorldMap& map,
                     const EnvParams& prm) {
  double r_g;
  if (team_in_goal(positions, map, prm)) {
    r_g = prm.r_goal;
  } else {
    r_g = prm.w_g *
          (distance(prev_positions[i], map.goal) - distance(positions[i], map.goal));
  }
  const double r_c = robot_collides(i, positions, map, prm) ? prm.r_coll : 0.0;
  return r_g + r_c;
}

class MultiRobotEnv {
 public:
  MultiRobotEnv(WorldMap map, EnvParams params)
      : map_(std::move(map)), prm_(params) {
    assert(!map_.spawns.empty());
    reset();
  }

  void reset() {
    positions_ = map_.spawns;
    velocities_.assign(positions_.size(), Vec2{});
    t_ = 0;
    done_ = false;
    reason_ = DoneReason::none;
  }

  int n_robots() const { return static_cast<int>(positions_.size()); }
  int t() const { return t_; }
  bool done() const { return done_; }
  DoneReason reason() const { return reason_; }
  const WorldMap& map() const { return map_; }
  const EnvParams& params() const { return prm_; }
  const std::vector<Vec2>& positions() const { return positions_; }
  const std::vector<Vec2>& velocities() const { return velocities_; }

  double current_lambda2() const { return lambda2(positions_, prm_.comm_radius); }

  Observation observe(int i) const {
    Observation o;
    const LidarScan scan =
        lidar_scan(map_, positions_, i, prm_.max_range, prm_.robot_radius);
    o.lidar.resize(LidarScan::kBeams);
    for (int k = 0; k < LidarScan::kBeams; ++k)
      o.lidar[k] = scan.ranges[k] / prm_.max_range;
    o.velocity = velocities_[i];
    o.goal = map_.goal - positions_[i];
    for (int j = 0; j < n_robots(); ++j)
      if (j != i) o.teammates.push_back(positions_[j] - positions_[i]);
    return o;
  }

  /// Advances all robots simultaneously by one control period. Commands are
  /// speed-clamped; the boundary walls block motion (position clipped, zero
  /// normal velocity). Rewards are computed on the post-step positions; the
  /// cost signal is the team disconnection indicator after the step.
  StepResult step(const std::vector<Vec2>& actions) {
    if (done_) throw StepAfterDone{};
    assert(static_cast<int>(actions.size()) == n_robots());

    const std::vector<Vec2> prev = positions_;
    for (int i = 0; i < n_robots(); ++i) {
      const Vec2 cmd = clamp_action(actions[i], prm_.v_max);
      Vec2 p = positions_[i] + cmd * prm_.dt;
      p.x = std::clamp(p.x, map_.bounds.min.x + prm_.robot_radius,
                       map_.bounds.max.x - prm_.robot_radius);
      p.y = std::clamp(p.y, map_.bounds.min.y + prm_.robot_radius,
                       map_.bounds.max.y - prm_.robot_radius);
      velocities_[i] = (p - positions_[i]) * (1.0 / prm_.dt);
      positions_[i] = p;
    }
    ++t_;

    StepResult res;
    res.rewards.resize(n_robots());
    res.collided.resize(n_robots());
    bool any_collision = false;
    for (int i = 0; i < n_robots(); ++i) {
      res.rewards[i] = reward(i, prev, positions_, map_, prm_);
      res.collided[i] = robot_collides(i, positions_, map_, prm_);
      any_collision = any_collision || res.collided[i];
    }
    res.cost = connectivity_cost(positions_, prm_.comm_radius);

    if (team_in_goal(positions_, map_, prm_)) {
      done_ = true;
      reason_ = DoneReason::success;
    } else if (any_collision) {
      done_ = true;
      reason_ = DoneReason::collision;
    } else if (t_ >= prm_.t_max) {
      done_ = true;
      reason_ = DoneReason::timeout;
    }
    res.done = done_;
    res.reason = reason_;
    return res;
  }

 private:
  WorldMap map_;
  EnvParams prm_;
  std::vector<Vec2> positions_;
  std::vector<Vec2> velocities_;
  int t_ = 0;
  bool done_ = false;
  DoneReason reason_ = DoneReason::none;
};

/// One trajectory row per robot per step, written by the rollout tools.
struct TrajectoryRow {
  int t = 0;
  int robot = 0;
  double px = 0, py = 0, vx = 0, vy = 0, ax = 0, ay = 0;
  double reward = 0;
  int cost = 0;
  double lambda2 = 0;
};

inline void write_trajectory_csv(const std::vector<TrajectoryRow>& rows,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
  out << "t,robot,px,py,vx,vy,ax,ay,r,c,lambda2\n";
  char buf[320];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n",
                  r.t, r.robot, r.px, r.py, r.vx, r.vy, r.ax, r.ay, r.reward,
                  r.cost, r.lambda2);
    out << buf;
  }
}

}  // namespace connav
