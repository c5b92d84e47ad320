#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

/// One undirected weighted edge as it appears in input files: agents and
/// delay classes are 1-based.
struct EdgeSpec {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
  std::size_t delay_class = 1;
};

/// Stored edge. Endpoints are 0-based with a < b, so each unordered pair
/// has exactly one representation and one weight. The delay class stays
/// 1-based.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 1.0;
  std::size_t delay_class = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Communication network: N agents with d-dimensional states, positive
/// symmetric weights and an onto assignment of edges to delay classes 1..r.
/// Immutable after construction.
class AgentGraph {
 public:
  std::size_t agents() const noexcept { return n_; }
  std::size_t state_dim() const noexcept { return d_; }
  std::size_t class_count() const noexcept { return r_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Edges belonging to delay class `cls` (1-based).
  std::vector<Edge> class_edges(std::size_t cls) const;

 private:
  friend AgentGraph build_graph(std::size_t, std::size_t, std::span<const EdgeSpec>);

  std::size_t n_ = 0;
  std::size_t d_ = 1;
  std::size_t r_ = 0;
  std::vector<Edge> edges_;
};

/// Laplacian L = A - V of a graph or subgraph. The operator acting on
/// d-dimensional agent states is L kron I_d; `multiplicity` records d.
struct LaplacianMatrix {
  Matrix entries;
  std::size_t multiplicity = 1;

  std::size_t order() const noexcept { return entries.rows(); }
};

/// Validates and canonicalises the edge list. Repeating a pair with the
/// same weight and class is accepted once; any disagreement is rejected.
AgentGraph build_graph(std::size_t n, std::size_t d, std::span<const EdgeSpec> edges);

LaplacianMatrix laplacian(const AgentGraph& g);

/// One Laplacian per delay class; element i holds class i + 1. They sum to
/// laplacian(g) entrywise.
std::vector<LaplacianMatrix> sub_laplacians(const AgentGraph& g);

bool is_connected(const AgentGraph& g);

enum class ClassLayout {
  single,    ///< every edge in class 1 (uniform delay)
  per_edge,  ///< one class per edge, numbered in canonical edge order
};

/// K_N with every weight equal to `delta`.
AgentGraph complete_graph(std::size_t n, double delta, ClassLayout layout,
                          std::size_t d = 1);

/// Cycle 1-2-...-N-1 with every weight equal to `delta`.
AgentGraph loop_graph(std::size_t n, double delta, ClassLayout layout,
                      std::size_t d = 1);

}  // namespace consensus
