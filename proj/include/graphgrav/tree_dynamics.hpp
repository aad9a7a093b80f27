#pragma once

// Tree equations of motion (tEoM) and the solution theory around them:
// residuals, verification, rescaling, T1 ratio chains, the no-go indicator,
// geometric half-half statistics and the two-progression quadratic.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"

namespace graphgrav {

namespace detail {

inline LocalSums tree_sums(const WeightedGraph& g, const std::vector<double>& len, Vertex v) {
  LocalSums s;
  for (const auto& inc : g.neighbors(v)) {
    double p = len[inc.edge];
    s.c += 1.0 / p;
    s.d += 1.0 / (p * p);
  }
  return s;
}

inline void require_tree(const WeightedGraph& g) {
  if (!g.is_tree()) throw Error(Errc::NotATree, "graph has a cycle");
}

inline void require_cover(const WeightedGraph& g, const Setting& s) {
  if (s.lengths.size() != g.edge_count()) {
    throw Error(Errc::BadParams, "setting does not cover the edge set");
  }
  for (double x : s.lengths) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(Errc::NonpositiveLength, "setting has length " + std::to_string(x));
    }
  }
}

// Raw residual on edge e for lengths len; no validation.
inline double teom_raw(const WeightedGraph& g, const std::vector<double>& len, EdgeIndex e) {
  const auto& ed = g.edge(e);
  auto si = tree_sums(g, len, ed.u);
  auto sj = tree_sums(g, len, ed.v);
  double mi = si.c / si.d, mj = sj.c / sj.d;
  return (mi * mi + mj * mj) / len[e] - mi - mj;
}

// Residual divided by c_i/d_i + c_j/d_j: dimensionless, same zero set.
inline double teom_normalized(const WeightedGraph& g, const std::vector<double>& len,
                              EdgeIndex e) {
  const auto& ed = g.edge(e);
  auto si = tree_sums(g, len, ed.u);
  auto sj = tree_sums(g, len, ed.v);
  double mi = si.c / si.d, mj = sj.c / sj.d;
  return ((mi * mi + mj * mj) / len[e] - mi - mj) / (mi + mj);
}

}  // namespace detail

// Edges whose endpoints both carry full neighbor data, i.e. neither is a leaf.
inline std::vector<EdgeIndex> interior_edges(const WeightedGraph& g) {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (g.degree(ed.u) > 1 && g.degree(ed.v) > 1) out.push_back(e);
  }
  return out;
}

inline double teom_residual(const WeightedGraph& g, const Setting& s, Vertex i, Vertex j) {
  detail::require_tree(g);
  detail::require_cover(g, s);
  EdgeIndex e = g.require_edge(i, j);
  if (g.degree(i) < 2 || g.degree(j) < 2) {
    throw Error(Errc::BoundaryEdge,
                "<" + g.name(i) + "," + g.name(j) + "> touches a truncated vertex");
  }
  return detail::teom_raw(g, s.lengths, e);
}

struct EomReport {
  std::vector<EdgeIndex> edges;
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;  // scale-free version
  bool is_solution = false;
};

inline EomReport verify_solution(const WeightedGraph& g, const Setting& s, double tol = 1e-9) {
  detail::require_tree(g);
  detail::require_cover(g, s);
  EomReport rep;
  rep.edges = interior_edges(g);
  for (EdgeIndex e : rep.edges) {
    double r = detail::teom_raw(g, s.lengths, e);
    rep.residuals.push_back(r);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
    rep.max_rel_residual =
        std::max(rep.max_rel_residual, std::abs(detail::teom_normalized(g, s.lengths, e)));
  }
  rep.is_solution = rep.max_abs_residual < tol;
  return rep;
}

inline Setting scale_setting(const Setting& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(Errc::NonpositiveScale, "scale factor " + std::to_string(lambda));
  }
  Setting out = s;
  for (double& x : out.lengths) x /= lambda;
  return out;
}

inline std::array<double, 2> t1_next_ratios(double r) {
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw Error(Errc::RatioNotGreaterThanOne, "ratio " + std::to_string(r));
  }
  return {r, (r + 1.0) / (r - 1.0)};
}

// Sum over boundary vertices i and their neighbors j inside the region of
// (c_i/d_i)/P_ij - 1. Negative rules out bulk solutions.
inline double nogo_indicator(const WeightedGraph& g, const Region& region, const Setting& s) {
  detail::require_tree(g);
  detail::require_cover(g, s);
  double total = 0.0;
  for (Vertex i : region.boundary_vertices) {
    auto si = detail::tree_sums(g, s.lengths, i);
    double mean = si.c / si.d;
    for (const auto& inc : g.neighbors(i)) {
      if (!region.contains(inc.vertex)) continue;
      total += mean / s.lengths[inc.edge] - 1.0;
    }
  }
  return total;
}

struct HalfHalfStats {
  double kappa;
  double ratio;  // c^2/d
};

inline HalfHalfStats geometric_half_half_stats(int q, double r) {
  if (q < 1 || q % 2 == 0) throw Error(Errc::QNotOdd, "q=" + std::to_string(q));
  if (!(r > 0.0)) throw Error(Errc::NonpositiveInput, "r=" + std::to_string(r));
  double qd = q;
  double r2 = 1.0 + r * r;
  return {(3.0 - qd) / (1.0 + qd) - 2.0 * r / r2, (qd + 1.0) * (1.0 + r) * (1.0 + r) / (2.0 * r2)};
}

// Roots x of alpha*y*(y+1)*(x^2+1) = x*(x+1)*(y^2+1).
inline std::vector<double> two_progression_x(double alpha, double y) {
  if (!(alpha > 0.0) || !(y > 0.0)) {
    throw Error(Errc::NonpositiveInput, "alpha and y must be positive");
  }
  double s = y * y + 1.0;
  double c = alpha * y * (y + 1.0);
  double a = c - s;
  double disc = s * s - 4.0 * a * c;
  if (disc < 0.0) {
    throw Error(Errc::NegativeDiscriminant, "discriminant " + std::to_string(disc));
  }
  if (std::abs(a) < 1e-14 * s) return {c / s};
  // x = (s +- sqrt(disc)) / (2a); pair the larger-magnitude numerator with
  // the product form to avoid cancellation
  double big = 0.5 * (s + std::sqrt(disc));
  return {big / a, c / big};
}

}  // namespace graphgrav
