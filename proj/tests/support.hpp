#pragma once

// Helpers and independent reference computations shared by the tests. The
// oracles here deliberately avoid the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/matrix.hpp"

namespace consensus::test {

inline const double kPi = std::acos(-1.0);

/// Triangle of the numerical section: path 1-2-3 in class 1, edge 1-3 in class 2.
inline AgentGraph triangle(double w12 = 1.0, double w23 = 1.0, double w13 = 1.0, std::size_t d = 2) {
  const std::vector<EdgeSpec> edges{{1, 2, w12, 1}, {2, 3, w23, 1}, {1, 3, w13, 2}};
  return build_graph(3, d, edges);
}

inline std::vector<double> triangle_initial() { return {2, 2, 2, -2, 1, 3}; }

/// Random connected graph: a random spanning tree plus extra edges, weights
/// in [0.5, 3], classes assigned round-robin so every class is used.
inline AgentGraph random_connected_graph(std::size_t n, std::size_t classes, std::mt19937_64& rng,
                                         double extra_edge_prob = 0.4) {
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<EdgeSpec> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    edges.push_back({u + 1, v + 1, weight(rng), 1});
    used[u][v] = used[v][u] = true;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!used[a][b] && coin(rng) < extra_edge_prob) edges.push_back({a + 1, b + 1, weight(rng), 1});
  std::shuffle(edges.begin(), edges.end(), rng);
  classes = std::min(classes, edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) edges[k].delay_class = k % classes + 1;
  return build_graph(n, 1, edges);
}

/// Number of eigenvalues of symmetric m strictly below x, by Sylvester's law
/// of inertia on the LDL^T factorisation of m - x I.
inline std::size_t eigenvalues_below(const Matrix& m, double x) {
  const std::size_t n = m.rows();
  std::vector<double> a(m.data().begin(), m.data().end());
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= x;
  std::size_t negative = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double pivot = a[k * n + k];
    if (pivot == 0.0) pivot = -1e-300;
    if (pivot < 0.0) ++negative;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return negative;
}

/// Eigenvalues of a symmetric matrix by bisection on the inertia count,
/// ascending. Slow and simple; meant for small matrices.
inline std::vector<double> inertia_eigenvalues(const Matrix& m) {
  const std::size_t n = m.rows();
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
    radius = std::max(radius, s);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = -radius - 1.0;
    double hi = radius + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + radius); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eigenvalues_below(m, mid) > k) hi = mid; else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Solution of x'(t) = a x(t - tau) with x = 1 on [-tau, 0], by the method
/// of steps: x(t) = sum_{k=0}^{m} a^k (t - (k-1) tau)^k / k! for
/// (m-1) tau <= t <= m tau.
inline double scalar_dde_solution(double a, double tau, double t) {
  const auto m = static_cast<long>(std::floor(t / tau)) + 1;
  double sum = 0.0;
  for (long k = 0; k <= m; ++k) {
    const double s = t - static_cast<double>(k - 1) * tau;
    if (s < 0.0) break;
    sum += std::pow(a * s, static_cast<double>(k)) / std::tgamma(static_cast<double>(k) + 1.0);
  }
  return sum;
}

}  // namespace consensus::test
