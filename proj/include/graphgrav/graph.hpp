#pragma once

// Weighted graphs, geodesic tables, the per-vertex sums c_i / d_i and
// region/boundary extraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphgrav/error.hpp"

namespace graphgrav {

using Vertex = std::size_t;
using EdgeIndex = std::size_t;

// Comparison tolerance for real-valued quantities unless an operation says otherwise.
inline constexpr double kTolerance = 1e-9;

struct Edge {
  Vertex u;  // u < v always
  Vertex v;
  double length;

  Vertex other(Vertex w) const { return w == u ? v : u; }
};

struct Incidence {
  Vertex vertex;
  EdgeIndex edge;
};

// Input record for build_graph: endpoints by id.
struct WeightedEdge {
  std::string u;
  std::string v;
  double length;
};

// An edge-length assignment aligned with WeightedGraph::edges().
struct Setting {
  std::vector<double> lengths;
};

// Edge index -> length, for edges held fixed (boundary data).
using PartialSetting = std::unordered_map<EdgeIndex, double>;

class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Vertex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Vertex index_of(const std::string& id) const {
    auto v = find(id);
    if (!v) throw Error(Errc::UnknownVertex, "no vertex '" + id + "'");
    return *v;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  std::span<const Incidence> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

  std::optional<EdgeIndex> edge_between(Vertex a, Vertex b) const {
    auto it = edge_index_.find(key(a, b));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  EdgeIndex require_edge(Vertex a, Vertex b) const {
    auto e = edge_between(a, b);
    if (!e) {
      throw Error(Errc::NotAnEdge, "<" + name(a) + "," + name(b) + "> is not an edge");
    }
    return *e;
  }

  // Connected by construction, so a tree iff |E| = |V| - 1.
  bool is_tree() const { return edges_.size() + 1 == names_.size(); }

  Setting setting() const {
    Setting s;
    s.lengths.reserve(edges_.size());
    for (const auto& e : edges_) s.lengths.push_back(e.length);
    return s;
  }

  // Same topology, new lengths. Lengths must be positive and finite.
  WeightedGraph with_setting(const Setting& s) const {
    if (s.lengths.size() != edges_.size()) {
      throw Error(Errc::BadParams, "setting covers " + std::to_string(s.lengths.size()) +
                                       " edges, graph has " + std::to_string(edges_.size()));
    }
    WeightedGraph g = *this;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      check_length(s.lengths[k], k);
      g.edges_[k].length = s.lengths[k];
    }
    return g;
  }

  friend WeightedGraph build_graph(std::vector<std::string> vertex_ids,
                                   const std::vector<WeightedEdge>& weighted_edges);

 private:
  static std::uint64_t key(Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  void check_length(double len, EdgeIndex k) const {
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw Error(Errc::NonpositiveLength,
                  "edge <" + names_[edges_[k].u] + "," + names_[edges_[k].v] +
                      "> has length " + std::to_string(len));
    }
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeIndex> edge_index_;
};

inline WeightedGraph build_graph(std::vector<std::string> vertex_ids,
                                 const std::vector<WeightedEdge>& weighted_edges) {
  WeightedGraph g;
  g.names_ = std::move(vertex_ids);
  for (Vertex v = 0; v < g.names_.size(); ++v) {
    if (!g.index_.emplace(g.names_[v], v).second) {
      throw Error(Errc::BadParams, "duplicate vertex id '" + g.names_[v] + "'");
    }
  }
  if (g.names_.empty()) throw Error(Errc::BadParams, "graph has no vertices");
  g.adjacency_.assign(g.names_.size(), {});

  for (const auto& we : weighted_edges) {
    Vertex a = g.index_of(we.u);
    Vertex b = g.index_of(we.v);
    if (a == b) throw Error(Errc::SelfLoop, "self-loop at '" + we.u + "'");
    if (!(we.length > 0.0) || !std::isfinite(we.length)) {
      throw Error(Errc::NonpositiveLength,
                  "edge <" + we.u + "," + we.v + "> has length " + std::to_string(we.length));
    }
    auto k = WeightedGraph::key(a, b);
    if (g.edge_index_.contains(k)) {
      throw Error(Errc::DuplicateEdge, "edge <" + we.u + "," + we.v + "> given twice");
    }
    EdgeIndex e = g.edges_.size();
    g.edges_.push_back(Edge{std::min(a, b), std::max(a, b), we.length});
    g.edge_index_.emplace(k, e);
    g.adjacency_[a].push_back({b, e});
    g.adjacency_[b].push_back({a, e});
  }

  // connectivity
  std::vector<char> seen(g.names_.size(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const auto& inc : g.adjacency_[v]) {
      if (!seen[inc.vertex]) {
        seen[inc.vertex] = 1;
        ++reached;
        stack.push_back(inc.vertex);
      }
    }
  }
  if (reached != g.names_.size()) {
    throw Error(Errc::Disconnected, std::to_string(g.names_.size() - reached) +
                                        " vertices unreachable from '" + g.names_[0] + "'");
  }
  return g;
}

// All-pairs shortest-path lengths, one Dijkstra per source. Rebuild after any
// length change.
class GeodesicTable {
 public:
  explicit GeodesicTable(const WeightedGraph& g) : n_(g.vertex_count()), dist_(n_ * n_) {
    for (Vertex s = 0; s < n_; ++s) single_source(g, s);
  }

  double operator()(Vertex i, Vertex j) const { return dist_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  void single_source(const WeightedGraph& g, Vertex s) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double* row = dist_.data() + s * n_;
    std::fill(row, row + n_, inf);
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[s] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > row[v]) continue;
      for (const auto& inc : g.neighbors(v)) {
        double nd = d + g.edge(inc.edge).length;
        if (nd < row[inc.vertex]) {
          row[inc.vertex] = nd;
          heap.push({nd, inc.vertex});
        }
      }
    }
  }

  std::size_t n_;
  std::vector<double> dist_;
};

inline double geodesic(const WeightedGraph& g, Vertex i, Vertex j) {
  if (i >= g.vertex_count() || j >= g.vertex_count()) {
    throw Error(Errc::UnknownVertex, "vertex index out of range");
  }
  return GeodesicTable(g)(i, j);
}

struct LocalSums {
  double c = 0.0;  // sum of 1/P over neighbors
  double d = 0.0;  // sum of 1/P^2 over neighbors

  double ratio() const { return c * c / d; }  // c^2/d
  double mean_length() const { return c / d; }
};

inline LocalSums local_sums(const WeightedGraph& g, const GeodesicTable& geo, Vertex i) {
  if (i >= g.vertex_count()) throw Error(Errc::UnknownVertex, "vertex index out of range");
  LocalSums s;
  for (const auto& inc : g.neighbors(i)) {
    double p = geo(i, inc.vertex);
    s.c += 1.0 / p;
    s.d += 1.0 / (p * p);
  }
  return s;
}

struct Region {
  std::vector<char> in_sigma;          // membership mask over V(g)
  std::vector<Vertex> interior;        // V(Sigma) - V(dSigma)
  std::vector<Vertex> boundary_vertices;
  std::vector<EdgeIndex> boundary_edges;  // E(dSigma)
  std::vector<EdgeIndex> sigma_edges;     // E(Sigma): edges of the induced subgraph

  bool contains(Vertex v) const { return v < in_sigma.size() && in_sigma[v]; }
  bool is_boundary(Vertex v) const {
    return std::binary_search(boundary_vertices.begin(), boundary_vertices.end(), v);
  }
};

inline Region extract_region(const WeightedGraph& g, std::span<const Vertex> sigma_vertices) {
  if (sigma_vertices.empty()) throw Error(Errc::EmptyRegion, "region has no vertices");
  Region r;
  r.in_sigma.assign(g.vertex_count(), 0);
  for (Vertex v : sigma_vertices) {
    if (v >= g.vertex_count()) throw Error(Errc::UnknownVertex, "vertex index out of range");
    r.in_sigma[v] = 1;
  }

  // induced subgraph must be connected
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack{sigma_vertices.front()};
  seen[sigma_vertices.front()] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const auto& inc : g.neighbors(v)) {
      if (r.in_sigma[inc.vertex] && !seen[inc.vertex]) {
        seen[inc.vertex] = 1;
        stack.push_back(inc.vertex);
      }
    }
  }

  std::vector<char> on_boundary(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!r.in_sigma[v]) continue;
    if (!seen[v]) {
      throw Error(Errc::DisconnectedRegion, "'" + g.name(v) + "' is cut off inside the region");
    }
    for (const auto& inc : g.neighbors(v)) {
      if (!r.in_sigma[inc.vertex]) on_boundary[v] = 1;
    }
    (on_boundary[v] ? r.boundary_vertices : r.interior).push_back(v);
  }

  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    bool in_u = r.in_sigma[ed.u], in_v = r.in_sigma[ed.v];
    if (in_u && in_v) r.sigma_edges.push_back(e);
    bool both_bdy = on_boundary[ed.u] && on_boundary[ed.v];
    bool bdy_out = (on_boundary[ed.u] && !in_v) || (on_boundary[ed.v] && !in_u);
    if (both_bdy || bdy_out) r.boundary_edges.push_back(e);
  }
  return r;
}

// BFS layering of a tree from a chosen root.
struct RootedTree {
  Vertex root = 0;
  std::vector<int> depth;
  std::vector<Vertex> parent;          // parent[root] == root
  std::vector<EdgeIndex> parent_edge;  // undefined at root
  std::vector<std::vector<Incidence>> children;
  std::vector<Vertex> order;           // BFS order
};

inline RootedTree root_tree(const WeightedGraph& g, Vertex root) {
  if (!g.is_tree()) throw Error(Errc::NotATree, "graph has a cycle");
  RootedTree t;
  t.root = root;
  t.depth.assign(g.vertex_count(), -1);
  t.parent.assign(g.vertex_count(), root);
  t.parent_edge.assign(g.vertex_count(), 0);
  t.children.assign(g.vertex_count(), {});
  t.depth[root] = 0;
  t.order.push_back(root);
  for (std::size_t k = 0; k < t.order.size(); ++k) {
    Vertex v = t.order[k];
    for (const auto& inc : g.neighbors(v)) {
      if (t.depth[inc.vertex] >= 0) continue;
      t.depth[inc.vertex] = t.depth[v] + 1;
      t.parent[inc.vertex] = v;
      t.parent_edge[inc.vertex] = inc.edge;
      t.children[v].push_back(inc);
      t.order.push_back(inc.vertex);
    }
  }
  return t;
}

inline Region extract_region(const WeightedGraph& g, const std::vector<std::string>& sigma_ids) {
  std::vector<Vertex> vs;
  vs.reserve(sigma_ids.size());
  for (const auto& id : sigma_ids) vs.push_back(g.index_of(id));
  return extract_region(g, std::span<const Vertex>(vs));
}

}  // namespace graphgrav
