#pragma once

// The action (sum of edge curvatures) and its closed forms on tree regions,
// the hexagon tree-action, upper bounds and the complete-graph partial cost.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "graphgrav/curvature.hpp"
#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/tree_dynamics.hpp"

namespace graphgrav {

enum class ActionVariant { Plain, Ghy, RegionPlain, TreeAction };

inline std::string_view variant_name(ActionVariant v) {
  switch (v) {
    case ActionVariant::Plain: return "plain";
    case ActionVariant::Ghy: return "ghy";
    case ActionVariant::RegionPlain: return "region_plain";
    case ActionVariant::TreeAction: return "tree_action";
  }
  return "?";
}

struct ActionReport {
  ActionVariant variant = ActionVariant::Plain;
  double total = 0.0;
  std::vector<std::pair<EdgeIndex, double>> per_edge;
  double bound_upper = 0.0;
  // independent evaluation of the same quantity (vertex-sum identity or the
  // direct edge sum), when the variant has one
  double identity_total = 0.0;
};

inline ActionReport action_plain(const WeightedGraph& g, const GeodesicTable& geo,
                                 const std::vector<EdgeIndex>& edge_set) {
  ActionReport rep;
  rep.variant = ActionVariant::Plain;
  for (EdgeIndex e : edge_set) {
    if (e >= g.edge_count()) throw Error(Errc::NotAnEdge, "edge index out of range");
    const auto& ed = g.edge(e);
    double k = kappa(g, geo, ed.u, ed.v);
    rep.per_edge.emplace_back(e, k);
    rep.total += k;
    rep.bound_upper += kappa_upper_bound(g, geo, ed.u, ed.v);
  }
  rep.identity_total = rep.total;
  return rep;
}

inline ActionReport action_plain(const WeightedGraph& g) {
  std::vector<EdgeIndex> all(g.edge_count());
  for (EdgeIndex e = 0; e < all.size(); ++e) all[e] = e;
  return action_plain(g, GeodesicTable(g), all);
}

namespace detail {

// Each boundary vertex must have exactly one neighbor in the region, and that
// neighbor must be interior. Returns that neighbor per boundary vertex.
inline std::vector<std::pair<Vertex, EdgeIndex>> inward_edges(const WeightedGraph& g,
                                                              const Region& region) {
  std::vector<std::pair<Vertex, EdgeIndex>> out;
  for (Vertex i : region.boundary_vertices) {
    std::size_t count = 0;
    std::pair<Vertex, EdgeIndex> found{i, 0};
    for (const auto& inc : g.neighbors(i)) {
      if (!region.contains(inc.vertex)) continue;
      ++count;
      found = {inc.vertex, inc.edge};
    }
    if (count != 1 || region.is_boundary(found.first)) {
      throw Error(Errc::NonUniqueInwardEdge,
                  "boundary vertex '" + g.name(i) + "' has " + std::to_string(count) +
                      " edges into the region");
    }
    out.push_back(found);
  }
  return out;
}

inline double vertex_bulk_term(const WeightedGraph& g, const GeodesicTable& geo, Vertex i) {
  auto s = local_sums(g, geo, i);
  return 2.0 - s.ratio();
}

}  // namespace detail

inline ActionReport action_ghy(const WeightedGraph& g, const Region& region) {
  detail::require_tree(g);
  detail::inward_edges(g, region);
  GeodesicTable geo(g);
  ActionReport rep;
  rep.variant = ActionVariant::Ghy;
  for (Vertex i : region.interior) rep.total += detail::vertex_bulk_term(g, geo, i);
  for (Vertex i : region.boundary_vertices) rep.total -= local_sums(g, geo, i).ratio();
  for (EdgeIndex e : region.sigma_edges) {
    const auto& ed = g.edge(e);
    rep.per_edge.emplace_back(e, kappa_tree_closed(g, geo, ed.u, ed.v));
  }
  // with the inward-edge structure every bulk vertex term is <= 2 - 1 and every
  // boundary term is <= -1
  rep.bound_upper = static_cast<double>(region.interior.size()) -
                    static_cast<double>(region.boundary_vertices.size());
  rep.identity_total = rep.total;
  return rep;
}

// (1 - C P)/(1 + D P^2): the boundary contribution of a vertex whose inward
// edge has length P and whose other edges give C = sum 1/P', D = sum 1/P'^2.
inline double boundary_term(double p, double c, double d) {
  return (1.0 - c * p) / (1.0 + d * p * p);
}

inline double boundary_minimizer(double c, double d) {
  if (!(c > 0.0) || !(d > 0.0)) {
    throw Error(Errc::NonpositiveInput, "C and D must be positive");
  }
  return 1.0 / c + std::sqrt(1.0 / (c * c) + 1.0 / d);
}

inline ActionReport action_region_plain(const WeightedGraph& g, const Region& region) {
  detail::require_tree(g);
  auto inward = detail::inward_edges(g, region);
  GeodesicTable geo(g);
  ActionReport rep;
  rep.variant = ActionVariant::RegionPlain;
  for (Vertex i : region.interior) rep.total += detail::vertex_bulk_term(g, geo, i);
  for (std::size_t k = 0; k < region.boundary_vertices.size(); ++k) {
    Vertex i = region.boundary_vertices[k];
    Vertex i0 = inward[k].first;
    double c = 0.0, d = 0.0;
    for (const auto& inc : g.neighbors(i)) {
      if (inc.vertex == i0) continue;
      double p = geo(i, inc.vertex);
      c += 1.0 / p;
      d += 1.0 / (p * p);
    }
    rep.total += boundary_term(geo(i, i0), c, d);
  }
  for (EdgeIndex e : region.sigma_edges) {
    const auto& ed = g.edge(e);
    double k = kappa_tree_closed(g, geo, ed.u, ed.v);
    rep.per_edge.emplace_back(e, k);
    rep.identity_total += k;
    rep.bound_upper += kappa_upper_bound(g, geo, ed.u, ed.v);
  }
  return rep;
}

// Sum of tree-curvatures over E(Sigma) on a hexagonal-lattice region.
// identity_total is the vertex form sum_int (2 - c^2/d) - n_bdy/3, which agrees
// when boundary vertices sit in constant-length surroundings.
inline ActionReport tree_action_hex(const WeightedGraph& g, const Region& region) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) > 3) throw Error(Errc::NotHexRegion, "'" + g.name(v) + "' has degree > 3");
  }
  for (Vertex v : region.interior) {
    if (g.degree(v) != 3) {
      throw Error(Errc::NotHexRegion, "interior vertex '" + g.name(v) + "' is not trivalent");
    }
  }
  detail::inward_edges(g, region);
  GeodesicTable geo(g);
  ActionReport rep;
  rep.variant = ActionVariant::TreeAction;
  for (EdgeIndex e : region.sigma_edges) {
    const auto& ed = g.edge(e);
    double k = kappa_tree_closed(g, geo, ed.u, ed.v);
    rep.per_edge.emplace_back(e, k);
    rep.total += k;
  }
  for (Vertex i : region.interior) rep.identity_total += detail::vertex_bulk_term(g, geo, i);
  rep.identity_total -= static_cast<double>(region.boundary_vertices.size()) / 3.0;
  rep.bound_upper = 2.0 * static_cast<double>(region.sigma_edges.size());
  return rep;
}

inline double bound_upper_global(const WeightedGraph& g) {
  return 2.0 * static_cast<double>(g.edge_count());
}

struct RatioBounds {
  double ratio = 0.0;  // c^2/d
  std::size_t degree = 0;
  bool lower_ok = false;
  bool upper_ok = false;
  bool all_equal = false;  // all incident geodesics equal
};

inline RatioBounds ratio_bounds(const WeightedGraph& g, const GeodesicTable& geo, Vertex i) {
  auto s = local_sums(g, geo, i);
  RatioBounds rb;
  rb.ratio = s.ratio();
  rb.degree = g.degree(i);
  double lo = 1e300, hi = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    double p = geo(i, inc.vertex);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  rb.all_equal = hi - lo <= kTolerance * hi;
  const double deg = static_cast<double>(rb.degree);
  rb.lower_ok = rb.degree == 1 ? std::abs(rb.ratio - 1.0) <= kTolerance : rb.ratio > 1.0;
  rb.upper_ok = rb.ratio <= deg + kTolerance;
  return rb;
}

inline bool is_complete(const WeightedGraph& g) {
  std::size_t n = g.vertex_count();
  return g.edge_count() == n * (n - 1) / 2;
}

// W^p_{i->j}(t) = (1 - t - t P^-2/d_i) P
inline double partial_cost(const WeightedGraph& g, const GeodesicTable& geo, Vertex i, Vertex j,
                           double t) {
  g.require_edge(i, j);
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(Errc::TOutOfRange, "t=" + std::to_string(t) + " outside (0,1)");
  }
  double p = geo(i, j);
  double d = local_sums(g, geo, i).d;
  return (1.0 - t - t / (p * p) / d) * p;
}

// Sum over ordered pairs of lim (1 - W^p_{i->j}/P)/(2t) = (1 + P^-2/d_i)/2.
inline double partial_action_complete(const WeightedGraph& g) {
  if (!is_complete(g)) throw Error(Errc::NotComplete, "graph is not complete");
  GeodesicTable geo(g);
  double total = 0.0;
  for (Vertex i = 0; i < g.vertex_count(); ++i) {
    double d = local_sums(g, geo, i).d;
    for (const auto& inc : g.neighbors(i)) {
      double p = geo(i, inc.vertex);
      total += 0.5 * (1.0 + 1.0 / (p * p) / d);
    }
  }
  return total;
}

}  // namespace graphgrav
