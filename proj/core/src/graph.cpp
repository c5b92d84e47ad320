#include "consensus/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>
#include <utility>

#include "consensus/error.hpp"

namespace consensus {

namespace {

std::string pair_name(std::size_t u, std::size_t v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

void add_edge_entries(Matrix& m, const Edge& e) {
  m(e.a, e.b) += e.weight;
  m(e.b, e.a) += e.weight;
  m(e.a, e.a) -= e.weight;
  m(e.b, e.b) -= e.weight;
}

}  // namespace

std::vector<Edge> AgentGraph::class_edges(std::size_t cls) const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.delay_class == cls) out.push_back(e);
  return out;
}

AgentGraph build_graph(std::size_t n, std::size_t d, std::span<const EdgeSpec> edges) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a network needs at least 2 agents");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "state dimension must be at least 1");

  std::map<std::pair<std::size_t, std::size_t>, Edge> canonical;
  std::size_t max_class = 0;
  for (const auto& spec : edges) {
    if (spec.u < 1 || spec.u > n || spec.v < 1 || spec.v > n) {
      throw Error(ErrorCode::InvalidArgument,
                  "edge " + pair_name(spec.u, spec.v) + " references an agent outside 1.." +
                      std::to_string(n));
    }
    if (spec.u == spec.v) {
      throw Error(ErrorCode::SelfLoop, "self-loop at agent " + std::to_string(spec.u));
    }
    if (!(spec.weight > 0.0) || !std::isfinite(spec.weight)) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "edge " + pair_name(spec.u, spec.v) + " has non-positive weight");
    }
    if (spec.delay_class < 1) {
      throw Error(ErrorCode::ClassGap, "delay classes are numbered from 1");
    }
    Edge e{std::min(spec.u, spec.v) - 1, std::max(spec.u, spec.v) - 1, spec.weight,
           spec.delay_class};
    auto [it, inserted] = canonical.try_emplace({e.a, e.b}, e);
    if (!inserted && !(it->second == e)) {
      throw Error(ErrorCode::ConflictingDuplicateEdge,
                  "edge " + pair_name(spec.u, spec.v) + " given twice with different data");
    }
    max_class = std::max(max_class, spec.delay_class);
  }

  std::vector<bool> used(max_class + 1, false);
  for (const auto& [key, e] : canonical) used[e.delay_class] = true;
  for (std::size_t c = 1; c <= max_class; ++c) {
    if (!used[c]) {
      throw Error(ErrorCode::ClassGap, "delay class " + std::to_string(c) + " has no edge");
    }
  }
  if (max_class > n * (n - 1) / 2) {
    throw Error(ErrorCode::TooManyClasses,
                std::to_string(max_class) + " delay classes exceed N(N-1)/2");
  }

  AgentGraph g;
  g.n_ = n;
  g.d_ = d;
  g.r_ = max_class;
  g.edges_.reserve(canonical.size());
  for (const auto& [key, e] : canonical) g.edges_.push_back(e);
  return g;
}

LaplacianMatrix laplacian(const AgentGraph& g) {
  LaplacianMatrix l{Matrix(g.agents(), g.agents()), g.state_dim()};
  for (const auto& e : g.edges()) add_edge_entries(l.entries, e);
  return l;
}

std::vector<LaplacianMatrix> sub_laplacians(const AgentGraph& g) {
  std::vector<LaplacianMatrix> out(
      g.class_count(), LaplacianMatrix{Matrix(g.agents(), g.agents()), g.state_dim()});
  for (const auto& e : g.edges()) add_edge_entries(out[e.delay_class - 1].entries, e);
  return out;
}

bool is_connected(const AgentGraph& g) {
  const std::size_t n = g.agents();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t x = frontier.front();
    frontier.pop();
    for (std::size_t y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        ++reached;
        frontier.push(y);
      }
    }
  }
  return reached == n;
}

namespace {

AgentGraph from_pairs(std::size_t n, std::size_t d, double delta, ClassLayout layout,
                      std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<EdgeSpec> specs;
  specs.reserve(pairs.size());
  std::size_t cls = 0;
  for (auto [u, v] : pairs) {
    cls = layout == ClassLayout::per_edge ? cls + 1 : 1;
    specs.push_back({u, v, delta, cls});
  }
  return build_graph(n, d, specs);
}

}  // namespace

AgentGraph complete_graph(std::size_t n, double delta, ClassLayout layout, std::size_t d) {
  if (n < 2) throw Error(ErrorCode::BadSize, "complete graph needs N >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 1; x <= n; ++x)
    for (std::size_t y = x + 1; y <= n; ++y) pairs.emplace_back(x, y);
  return from_pairs(n, d, delta, layout, std::move(pairs));
}

AgentGraph loop_graph(std::size_t n, double delta, ClassLayout layout, std::size_t d) {
  if (n < 3) throw Error(ErrorCode::BadSize, "loop graph needs N >= 3");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 1; x < n; ++x) pairs.emplace_back(x, x + 1);
  pairs.emplace_back(1, n);
  return from_pairs(n, d, delta, layout, std::move(pairs));
}

}  // namespace consensus
