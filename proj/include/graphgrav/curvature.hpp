#pragma once

// Edge curvature K(t) = 1 - W(t)/P, its t -> 0 slope, and the closed form
// valid on trees.

#include <cmath>
#include <utility>
#include <vector>

#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/transport.hpp"

namespace graphgrav {

struct CurvatureReport {
  EdgeIndex edge = 0;
  double kappa = 0.0;
  double breakpoint_t = 0.0;  // largest sampled t with kappa_t(t) = t*kappa
  std::vector<std::pair<double, double>> samples;  // (t, kappa_t(t))
};

inline double kappa_t(const WeightedGraph& g, const GeodesicTable& geo, Vertex i, Vertex j,
                      double t) {
  g.require_edge(i, j);
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(Errc::TOutOfRange, "t=" + std::to_string(t) + " outside (0,1)");
  }
  double p = geo(i, j);
  return 1.0 - detail::neighbor_transport_affine(g, geo, i, j, t).at(t) / p;
}

inline CurvatureReport kappa_report(const WeightedGraph& g, const GeodesicTable& geo, Vertex i,
                                    Vertex j) {
  CurvatureReport rep;
  rep.edge = g.require_edge(i, j);
  const double p = geo(i, j);

  // slope of K(t) at t from the affine cost; P - W0 vanishes on the
  // small-t basis so the quotient stays well conditioned there
  auto slope_at = [&](double t) {
    auto w = detail::neighbor_transport_affine(g, geo, i, j, t);
    rep.samples.emplace_back(t, 1.0 - w.at(t) / p);
    return (p - w.w0) / (p * t) - w.w1 / p;
  };

  double t = 0.25;
  double prev = slope_at(t);
  for (int k = 0; k < 60; ++k) {
    double cur = slope_at(t / 2);
    if (std::abs(cur - prev) < 1e-10) {
      rep.kappa = cur;
      rep.breakpoint_t = t;
      return rep;
    }
    prev = cur;
    t /= 2;
  }
  throw Error(Errc::NoConvergence, "curvature slope did not stabilize on <" + g.name(i) + "," +
                                       g.name(j) + "> within 60 halvings");
}

inline double kappa(const WeightedGraph& g, const GeodesicTable& geo, Vertex i, Vertex j) {
  return kappa_report(g, geo, i, j).kappa;
}

inline double kappa_tree_closed(const WeightedGraph& g, const GeodesicTable& geo, Vertex i,
                                Vertex j) {
  g.require_edge(i, j);
  double p = geo(i, j);
  auto si = local_sums(g, geo, i);
  auto sj = local_sums(g, geo, j);
  return -(1.0 / p) * (si.c / si.d + sj.c / sj.d - (2.0 / p) * (1.0 / si.d + 1.0 / sj.d));
}

// Upper bound K(t) <= (t/P)(c_i/d_i + c_j/d_j).
inline double kappa_upper_bound(const WeightedGraph& g, const GeodesicTable& geo, Vertex i,
                                Vertex j) {
  double p = geo(i, j);
  auto si = local_sums(g, geo, i);
  auto sj = local_sums(g, geo, j);
  return (si.c / si.d + sj.c / sj.d) / p;
}

inline std::vector<double> edge_curvatures(const WeightedGraph& g, const GeodesicTable& geo) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(kappa(g, geo, e.u, e.v));
  return out;
}

inline std::vector<double> edge_curvatures(const WeightedGraph& g) {
  return edge_curvatures(g, GeodesicTable(g));
}

}  // namespace graphgrav
