#pragma once

// Communication graph, graph Laplacian and algebraic connectivity.
//
// The team's communication topology is the undirected graph with an edge
// between robots i and j whenever ||p_i - p_j|| <= comm_radius. The second
// smallest Laplacian eigenvalue (Fiedler value) is positive exactly when
// that graph is connected, which is what the binary disconnection cost
// monitors.

#include <cassert>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "connav/geom.hpp"

namespace connav {

/// lambda2 at or below this threshold counts as disconnected. The Laplacian
/// is PSD, so a strict "lambda2 < 0" test would never fire; the threshold
/// absorbs eigensolver round-off instead.
inline constexpr double kConnectivityEps = 1e-6;

struct CommGraph {
  int n = 0;
  Eigen::MatrixXd adj;  // binary, symmetric, zero diagonal
};

inline CommGraph adjacency(const std::vector<Vec2>& positions,
                           double comm_radius) {
  const int n = static_cast<int>(positions.size());
  assert(n >= 2 && comm_radius > 0.0);
  CommGraph g;
  g.n = n;
  g.adj = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (distance(positions[i], positions[j]) <= comm_radius) {
        g.adj(i, j) = 1.0;
        g.adj(j, i) = 1.0;
      }
    }
  }
  return g;
}

/// L = D - A with D the degree diagonal. Rows of L sum to zero.
inline Eigen::MatrixXd laplacian(const CommGraph& g) {
  Eigen::MatrixXd l = -g.adj;
  for (int i = 0; i < g.n; ++i) l(i, i) = g.adj.row(i).sum();
  return l;
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations. Dense and allocation-light; intended for the team-sized
/// matrices here (n <= 16), where it is accurate to machine precision.
inline std::vector<double> symmetric_eigenvalues(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  assert(a.rows() == a.cols());

  auto off_norm = [&a, n]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
  };

  const double tol = 1e-14 * (1.0 + a.norm());
  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {  // A <- G^T A G, column then row update
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

/// Second-smallest eigenvalue of a Laplacian (algebraic connectivity).
inline double lambda2(const Eigen::MatrixXd& lap) {
  assert(lap.rows() >= 2);
  return symmetric_eigenvalues(lap)[1];
}

inline double lambda2(const std::vector<Vec2>& positions, double comm_radius) {
  return lambda2(laplacian(adjacency(positions, comm_radius)));
}

/// Graph traversal oracle: true iff every vertex is reachable from vertex 0.
inline bool is_connected_bfs(const CommGraph& g) {
  if (g.n <= 1) return true;
  std::vector<char> visited(g.n, 0);
  std::vector<int> stack = {0};
  visited[0] = 1;
  int seen = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < g.n; ++w) {
      if (g.adj(v, w) > 0.5 && !visited[w]) {
        visited[w] = 1;
        ++seen;
        stack.push_back(w);
      }
    }
  }
  return seen == g.n;
}

/// Binary disconnection indicator: 1 iff the communication graph over the
/// given positions is disconnected.
inline int connectivity_cost(const std::vector<Vec2>& positions,
                             double comm_radius) {
  return lambda2(positions, comm_radius) <= kConnectivityEps ? 1 : 0;
}

}  // namespace connav
