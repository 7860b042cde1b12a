#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairdiv/error.hpp"

namespace fairdiv {

using Vertex = int;
using Value = std::int64_t;
using Edge = std::pair<Vertex, Vertex>;

/// Largest vertex count accepted. Keeps every cut value and welfare sum
/// (bounded by m(m-1)) well inside 64-bit range and neighbour counters
/// inside 32-bit range.
inline constexpr Vertex kMaxVertices = 1 << 20;

/**
 * Simple undirected graph on vertices 0..m-1.
 *
 * Immutable after construction. Edges are stored normalized (u < v) and
 * sorted; adjacency lists are sorted.
 */
class Graph {
 public:
  Graph() = default;

  Graph(Vertex num_vertices, std::vector<Edge> edges) : adjacency_(check_size(num_vertices)) {
    for (auto& [u, v] : edges) {
      FAIRDIV_REQUIRE(u >= 0 && u < num_vertices && v >= 0 && v < num_vertices,
                      "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
      FAIRDIV_REQUIRE(u != v, "self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw InputError("duplicate edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");
    for (auto [u, v] : edges) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());
    edges_ = std::move(edges);
  }

  Vertex num_vertices() const { return static_cast<Vertex>(adjacency_.size()); }
  Value num_edges() const { return static_cast<Value>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex o) const {
    check_vertex(o);
    return adjacency_[o];
  }

  Value degree(Vertex o) const {
    check_vertex(o);
    return static_cast<Value>(adjacency_[o].size());
  }

  /// Maximum degree; 0 for the empty graph.
  Value max_degree() const {
    std::size_t best = 0;
    for (const auto& row : adjacency_) best = std::max(best, row.size());
    return static_cast<Value>(best);
  }

  bool has_edge(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
  }

  void check_vertex(Vertex o) const {
    FAIRDIV_REQUIRE(o >= 0 && o < num_vertices(), "vertex " + std::to_string(o) + " out of range");
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adjacency_ == b.adjacency_; }

 private:
  static std::size_t check_size(Vertex m) {
    FAIRDIV_REQUIRE(m >= 0 && m <= kMaxVertices, "vertex count out of range");
    return static_cast<std::size_t>(m);
  }

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
};

inline Value degree(const Graph& g, Vertex o) { return g.degree(o); }

/// Maximal connected vertex sets, each sorted, ordered by least vertex.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  const Vertex m = g.num_vertices();
  std::vector<bool> seen(m, false);
  std::vector<std::vector<Vertex>> out;
  for (Vertex s = 0; s < m; ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (Vertex w : g.neighbors(comp[head])) {
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// True iff g is acyclic: every component has exactly |V_c| - 1 edges.
inline bool is_forest(const Graph& g) {
  // A graph is a forest iff |E| = |V| - #components.
  const auto comps = connected_components(g);
  return g.num_edges() == static_cast<Value>(g.num_vertices()) - static_cast<Value>(comps.size());
}

/// Vertices of degree zero, ascending.
inline std::vector<Vertex> isolated_vertices(const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex o = 0; o < g.num_vertices(); ++o)
    if (g.degree(o) == 0) out.push_back(o);
  return out;
}

/**
 * A rooted forest together with the peeling state used by the forest
 * allocation procedure: which vertices are allocated and the frontier of
 * unallocated roots (vertices whose parent is allocated or absent).
 */
struct RootedForest {
  std::vector<std::optional<Vertex>> parent;
  std::vector<std::vector<Vertex>> children;
  std::vector<Vertex> tree_roots;
  std::vector<bool> allocated;
  std::set<Vertex> frontier;

  bool is_root(Vertex o) const { return frontier.count(o) != 0; }

  /// Marks a frontier vertex allocated; its children join the frontier.
  void allocate(Vertex o) {
    FAIRDIV_INVARIANT(frontier.erase(o) == 1, "allocated vertex " + std::to_string(o) + " is not a frontier root");
    allocated[o] = true;
    for (Vertex c : children[o]) frontier.insert(c);
  }

  std::vector<Vertex> unallocated_children(Vertex o) const {
    std::vector<Vertex> out;
    for (Vertex c : children[o])
      if (!allocated[c]) out.push_back(c);
    return out;
  }
};

/**
 * Roots each tree of a forest by BFS. Without explicit roots, the least
 * vertex of each component is used. Explicit roots must hit every
 * component exactly once.
 */
inline RootedForest root_forest(const Graph& g, std::optional<std::vector<Vertex>> roots = std::nullopt) {
  if (!is_forest(g)) throw InputError("graph is not a forest");
  const Vertex m = g.num_vertices();
  const auto comps = connected_components(g);
  std::vector<Vertex> chosen;
  if (roots) {
    std::vector<int> comp_of(m, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (Vertex v : comps[c]) comp_of[v] = static_cast<int>(c);
    std::vector<bool> hit(comps.size(), false);
    for (Vertex r : *roots) {
      g.check_vertex(r);
      FAIRDIV_REQUIRE(!hit[comp_of[r]], "two roots given for one tree");
      hit[comp_of[r]] = true;
    }
    FAIRDIV_REQUIRE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }), "a tree has no root");
    chosen = *roots;
    std::sort(chosen.begin(), chosen.end(),
              [&](Vertex a, Vertex b) { return comp_of[a] < comp_of[b]; });
  } else {
    for (const auto& comp : comps) chosen.push_back(comp.front());
  }

  RootedForest f;
  f.parent.assign(m, std::nullopt);
  f.children.assign(m, {});
  f.allocated.assign(m, false);
  f.tree_roots = chosen;
  std::vector<bool> seen(m, false);
  for (Vertex r : chosen) {
    std::deque<Vertex> queue{r};
    seen[r] = true;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(u)) {
        if (seen[w]) continue;
        seen[w] = true;
        f.parent[w] = u;
        f.children[u].push_back(w);
        queue.push_back(w);
      }
    }
    f.frontier.insert(r);
  }
  return f;
}

}  // namespace fairdiv
