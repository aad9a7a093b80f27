#pragma once

// Graph families (tree truncations, paths, complete graphs, cycles, hexagonal
// patches) and the named length settings on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/tree_dynamics.hpp"

namespace graphgrav {

// Root "0" with q+1 children, every other non-leaf with q children, leaves at
// the given depth. Vertices are numbered in BFS order.
inline WeightedGraph gen_tree(int q, int depth) {
  if (q < 1 || depth < 1) {
    throw Error(Errc::BadParams, "gen_tree needs q >= 1 and depth >= 1");
  }
  std::vector<std::string> ids{"0"};
  std::vector<WeightedEdge> edges;
  std::vector<std::size_t> frontier{0};
  for (int level = 0; level < depth; ++level) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      int kids = level == 0 ? q + 1 : q;
      for (int k = 0; k < kids; ++k) {
        std::size_t c = ids.size();
        ids.push_back(std::to_string(c));
        edges.push_back({ids[v], ids[c], 1.0});
        next.push_back(c);
      }
    }
    if (ids.size() > 2000000) throw Error(Errc::TooLarge, "tree exceeds 2e6 vertices");
    frontier = std::move(next);
  }
  return build_graph(std::move(ids), edges);
}

// Path 0-1-...-n with n edges, edge k between k and k+1.
inline WeightedGraph gen_path(int n_edges) {
  if (n_edges < 1) throw Error(Errc::BadParams, "gen_path needs at least one edge");
  std::vector<std::string> ids;
  std::vector<WeightedEdge> edges;
  for (int k = 0; k <= n_edges; ++k) ids.push_back(std::to_string(k));
  for (int k = 0; k < n_edges; ++k) edges.push_back({ids[k], ids[k + 1], 1.0});
  return build_graph(std::move(ids), edges);
}

inline WeightedGraph gen_complete(int n) {
  if (n < 3) throw Error(Errc::BadParams, "gen_complete needs n >= 3");
  std::vector<std::string> ids;
  std::vector<WeightedEdge> edges;
  for (int k = 0; k < n; ++k) ids.push_back(std::to_string(k));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) edges.push_back({ids[a], ids[b], 1.0});
  }
  return build_graph(std::move(ids), edges);
}

// Edges in cyclic order: <0,1>, <1,2>, ..., <n-1,0>.
inline WeightedGraph gen_cycle(int n) {
  if (n < 3) throw Error(Errc::BadParams, "gen_cycle needs n >= 3");
  std::vector<std::string> ids;
  std::vector<WeightedEdge> edges;
  for (int k = 0; k < n; ++k) ids.push_back(std::to_string(k));
  for (int k = 0; k < n; ++k) edges.push_back({ids[k], ids[(k + 1) % n], 1.0});
  return build_graph(std::move(ids), edges);
}

struct HexRegionSpec {
  int radius = 1;
  int strong_margin = 2;
};

struct HexRegion {
  WeightedGraph graph;
  Region region;
  std::vector<Vertex> sigma;
  std::vector<Vertex> patch;              // corners of the patch hexagons
  std::vector<EdgeIndex> core_edges;      // both endpoints in the patch
};

inline int hex_distance(int q, int r) {
  int s = -q - r;
  return std::max({std::abs(q), std::abs(r), std::abs(s)});
}

// Hexagons at axial distance <= radius-1 form the patch. Sigma is the patch
// plus every outside vertex adjacent to it, so each boundary vertex hangs off
// the patch by a single edge; strong_margin further rings of unit hexagons
// surround it.
inline HexRegion gen_hex_region(const HexRegionSpec& spec) {
  if (spec.radius < 1) throw Error(Errc::BadParams, "hex radius must be >= 1");
  if (spec.strong_margin < 2) throw Error(Errc::BadParams, "strong margin must be >= 2");
  const int patch_r = spec.radius - 1;
  const int full_r = patch_r + spec.strong_margin + 2;
  static constexpr int dx[6] = {1, 0, -1, -1, 0, 1};
  static constexpr int dy[6] = {1, 2, 1, -1, -2, -1};

  std::map<std::pair<int, int>, std::size_t> index;
  std::vector<std::string> ids;
  std::vector<char> in_patch;
  std::map<std::pair<std::size_t, std::size_t>, char> edge_seen;
  std::vector<WeightedEdge> edges;

  auto vertex_at = [&](int x, int y) {
    auto [it, fresh] = index.try_emplace({x, y}, ids.size());
    if (fresh) {
      ids.push_back(std::to_string(x) + "," + std::to_string(y));
      in_patch.push_back(0);
    }
    return it->second;
  };

  for (int q = -full_r; q <= full_r; ++q) {
    for (int r = -full_r; r <= full_r; ++r) {
      int dist = hex_distance(q, r);
      if (dist > full_r) continue;
      int cx = 2 * q + r, cy = 3 * r;
      std::size_t corner[6];
      for (int k = 0; k < 6; ++k) {
        corner[k] = vertex_at(cx + dx[k], cy + dy[k]);
        if (dist <= patch_r) in_patch[corner[k]] = 1;
      }
      for (int k = 0; k < 6; ++k) {
        std::size_t a = corner[k], b = corner[(k + 1) % 6];
        if (edge_seen.try_emplace({std::min(a, b), std::max(a, b)}, 1).second) {
          edges.push_back({ids[a], ids[b], 1.0});
        }
      }
    }
  }

  HexRegion out;
  out.graph = build_graph(ids, edges);
  const auto& g = out.graph;
  std::vector<char> in_sigma(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!in_patch[v]) continue;
    out.patch.push_back(v);
    in_sigma[v] = 1;
    for (const auto& inc : g.neighbors(v)) in_sigma[inc.vertex] = 1;
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (in_sigma[v]) out.sigma.push_back(v);
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (in_patch[g.edge(e).u] && in_patch[g.edge(e).v]) out.core_edges.push_back(e);
  }
  out.region = extract_region(g, std::span<const Vertex>(out.sigma));
  return out;
}

inline Setting constant_setting(const WeightedGraph& g, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(Errc::NonpositiveLength, "constant length " + std::to_string(a));
  }
  return Setting{std::vector<double>(g.edge_count(), a)};
}

struct Matching {
  std::vector<EdgeIndex> edges;
  bool perfect = false;
};

inline bool is_perfect_matching(const WeightedGraph& g, const std::vector<EdgeIndex>& edges) {
  std::vector<int> cover(g.vertex_count(), 0);
  for (EdgeIndex e : edges) {
    if (e >= g.edge_count()) return false;
    ++cover[g.edge(e).u];
    ++cover[g.edge(e).v];
  }
  for (int c : cover) {
    if (c != 1) return false;
  }
  return true;
}

// Exhaustive: match the lowest free vertex against each free neighbor,
// memoizing dead masks.
inline std::optional<Matching> find_perfect_matching(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 24) throw Error(Errc::TooLarge, "perfect matching search limited to 24 vertices");
  if (n % 2 == 1) return std::nullopt;
  std::unordered_set<std::uint32_t> dead;
  std::vector<EdgeIndex> chosen;
  const std::uint32_t full = (1u << n) - 1u;

  auto solve = [&](auto&& self, std::uint32_t used) -> bool {
    if (used == full) return true;
    if (dead.contains(used)) return false;
    Vertex v = 0;
    while (used & (1u << v)) ++v;
    for (const auto& inc : g.neighbors(v)) {
      if (used & (1u << inc.vertex)) continue;
      chosen.push_back(inc.edge);
      if (self(self, used | (1u << v) | (1u << inc.vertex))) return true;
      chosen.pop_back();
    }
    dead.insert(used);
    return false;
  };
  if (!solve(solve, 0)) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  return Matching{chosen, true};
}

// Matched edges get eps, the rest keep off_lengths (unit when absent).
inline Setting matching_setting(const WeightedGraph& g, const Matching& m, double eps,
                                const std::optional<Setting>& off_lengths = std::nullopt) {
  if (!is_perfect_matching(g, m.edges)) {
    throw Error(Errc::NotPerfect, "edge set is not a perfect matching");
  }
  if (!(eps > 0.0)) throw Error(Errc::NonpositiveLength, "eps must be positive");
  Setting s = off_lengths ? *off_lengths : constant_setting(g, 1.0);
  if (s.lengths.size() != g.edge_count()) {
    throw Error(Errc::BadParams, "off_lengths does not cover the edge set");
  }
  for (EdgeIndex e : m.edges) s.lengths[e] = eps;
  return s;
}

// Setting on gen_path(ratios.size() + 1) with lengths l_0 = base,
// l_{k+1} = l_k / ratios[k]. No chain validation.
inline Setting t1_chain_setting(const std::vector<double>& ratios, double base = 1.0) {
  if (!(base > 0.0)) throw Error(Errc::NonpositiveLength, "base length must be positive");
  Setting s;
  s.lengths.push_back(base);
  for (double r : ratios) {
    if (!(r > 0.0)) throw Error(Errc::NonpositiveInput, "ratio must be positive");
    s.lengths.push_back(s.lengths.back() / r);
  }
  return s;
}

// Half-half setting on gen_tree(q, depth). level_ratios[k] is the ratio of
// the two incident lengths at every vertex of depth k; all ratios must lie in
// {r0, (r0+1)/(r0-1)} with r0 = level_ratios[0] > 1. The root sees (q+1)/2
// unit edges and (q+1)/2 edges of length r0. A child reached over an edge of
// length e continues the strictly monotonic paths through it: its other class
// is e*r if e was the longer class at the parent, e/r otherwise.
inline Setting half_half_setting(int q, int depth, const std::vector<double>& level_ratios) {
  if (q < 1 || q % 2 == 0) throw Error(Errc::QNotOdd, "q=" + std::to_string(q));
  if (static_cast<int>(level_ratios.size()) < depth) {
    throw Error(Errc::InvalidRatioChain, "need one ratio per non-leaf level");
  }
  const double r0 = level_ratios.front();
  if (!(r0 > 1.0)) {
    throw Error(Errc::InvalidRatioChain, "leading ratio must exceed 1 for a non-constant setting");
  }
  const auto allowed = t1_next_ratios(r0);
  for (double r : level_ratios) {
    bool ok = std::abs(r - allowed[0]) <= 1e-12 * r || std::abs(r - allowed[1]) <= 1e-12 * r;
    if (!ok) {
      throw Error(Errc::InvalidRatioChain,
                  "ratio " + std::to_string(r) + " not in {r0, (r0+1)/(r0-1)}");
    }
  }

  WeightedGraph g = gen_tree(q, depth);
  RootedTree rt = root_tree(g, 0);
  const int half = (q + 1) / 2;
  Setting s{std::vector<double>(g.edge_count(), 0.0)};
  // other-class length at each vertex (the class not containing the parent edge)
  std::vector<double> other(g.vertex_count(), 0.0);

  for (Vertex v : rt.order) {
    const auto& kids = rt.children[v];
    if (kids.empty()) continue;
    if (v == rt.root) {
      for (int k = 0; k < static_cast<int>(kids.size()); ++k) {
        s.lengths[kids[k].edge] = k < half ? 1.0 : r0;
      }
    } else {
      double e = s.lengths[rt.parent_edge[v]];
      // n-1 more edges of the parent class, n edges of the other class
      for (int k = 0; k < static_cast<int>(kids.size()); ++k) {
        s.lengths[kids[k].edge] = k < half - 1 ? e : other[v];
      }
    }
    // set up each child's other class from the ratio at its level
    double mine_hi = 0.0;
    for (const auto& inc : g.neighbors(v)) mine_hi = std::max(mine_hi, s.lengths[inc.edge]);
    for (const auto& inc : kids) {
      int level = rt.depth[inc.vertex];
      if (level >= depth) continue;
      double e = s.lengths[inc.edge];
      double r = level_ratios[level];
      other[inc.vertex] = e == mine_hi ? e * r : e / r;
    }
  }
  return s;
}

// Setting on gen_tree(q, depth) built from the two-progression rules: the
// root sees m edges of length 1, m of x, s of alpha and s of alpha*y; crossing
// a 1-, x-, alpha- or alpha*y-class edge scales the next vertex's lengths by
// 1/x, x, 1/y, y respectively.
inline Setting two_progression_setting(int q, int m, int s, double alpha, double x, double y,
                                       int depth) {
  if (q < 1 || q % 2 == 0 || m < 0 || s < 0 || 2 * (m + s) != q + 1) {
    throw Error(Errc::InconsistentParams, "need odd q with 2(m+s) = q+1");
  }
  if (!(alpha > 0.0) || !(x > 0.0) || !(y > 0.0)) {
    throw Error(Errc::InconsistentParams, "alpha, x, y must be positive");
  }
  enum Cls { A = 0, B = 1, C = 2, D = 3 };
  static constexpr Cls partner[4] = {B, A, D, C};  // class of the parent edge seen from the child
  const double base[4] = {1.0, x, alpha, alpha * y};
  const double step[4] = {1.0 / x, x, 1.0 / y, y};

  WeightedGraph g = gen_tree(q, depth);
  RootedTree rt = root_tree(g, 0);
  Setting out{std::vector<double>(g.edge_count(), 0.0)};
  std::vector<double> scale(g.vertex_count(), 1.0);
  std::vector<int> entered(g.vertex_count(), -1);

  for (Vertex v : rt.order) {
    if (rt.children[v].empty()) continue;
    int count[4] = {m, m, s, s};
    if (entered[v] >= 0) --count[partner[entered[v]]];
    std::size_t k = 0;
    for (int c = 0; c < 4; ++c) {
      for (int rep = 0; rep < count[c]; ++rep) {
        const auto& inc = rt.children[v].at(k++);
        out.lengths[inc.edge] = scale[v] * base[c];
        scale[inc.vertex] = scale[v] * step[c];
        entered[inc.vertex] = c;
      }
    }
    if (k != rt.children[v].size()) {
      throw Error(Errc::InconsistentParams, "child count mismatch");
    }
  }
  return out;
}

}  // namespace graphgrav
