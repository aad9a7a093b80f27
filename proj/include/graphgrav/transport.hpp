#pragma once

// Neighbor distributions D_{t,i} and exact transportation cost between
// finitely supported vertex distributions under geodesic ground cost.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"

namespace graphgrav {

struct Distribution {
  // sorted by vertex, no duplicates, masses > 0
  std::vector<std::pair<Vertex, double>> mass;

  double at(Vertex v) const {
    auto it = std::lower_bound(mass.begin(), mass.end(), v,
                               [](const auto& p, Vertex x) { return p.first < x; });
    return (it != mass.end() && it->first == v) ? it->second : 0.0;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [v, m] : mass) s += m;
    return s;
  }

  static Distribution from_pairs(std::vector<std::pair<Vertex, double>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    Distribution d;
    for (const auto& [v, m] : pairs) {
      if (m == 0.0) continue;
      if (!d.mass.empty() && d.mass.back().first == v) {
        d.mass.back().second += m;
      } else {
        d.mass.emplace_back(v, m);
      }
    }
    return d;
  }
};

struct Flow {
  Vertex from;
  Vertex to;
  double amount;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
  // 1-Lipschitz potential over all vertices with sum f*(mu - nu) = cost
  std::vector<double> potential;
};

inline Distribution delta(Vertex i) { return Distribution{{{i, 1.0}}}; }

// Weight of neighbor n in D_{t,i} per unit t: P^-2 / d_i.
inline std::vector<std::pair<Vertex, double>> neighbor_weights(const WeightedGraph& g,
                                                               const GeodesicTable& geo,
                                                               Vertex i) {
  auto s = local_sums(g, geo, i);
  std::vector<std::pair<Vertex, double>> w;
  for (const auto& inc : g.neighbors(i)) {
    double p = geo(i, inc.vertex);
    w.emplace_back(inc.vertex, 1.0 / (p * p) / s.d);
  }
  return w;
}

inline Distribution neighbor_distribution(const WeightedGraph& g, const GeodesicTable& geo,
                                          Vertex i, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(Errc::TOutOfRange, "t=" + std::to_string(t) + " outside (0,1)");
  }
  if (i >= g.vertex_count()) throw Error(Errc::UnknownVertex, "vertex index out of range");
  std::vector<std::pair<Vertex, double>> pairs{{i, 1.0 - t}};
  for (const auto& [v, w] : neighbor_weights(g, geo, i)) pairs.emplace_back(v, t * w);
  return Distribution::from_pairs(std::move(pairs));
}

namespace detail {

// c0 + t*c1, used to carry the t-dependence of masses exactly through the
// simplex so that W(t) comes out as W0 + t*W1.
struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;

  Affine& operator+=(const Affine& o) {
    c0 += o.c0;
    c1 += o.c1;
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    c0 -= o.c0;
    c1 -= o.c1;
    return *this;
  }
  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a, const Affine& b) { return a -= b; }
  friend Affine operator*(double k, const Affine& a) { return {k * a.c0, k * a.c1}; }
};

struct AffineOrder {
  double t;
  double tol0 = 1e-13;
  double tol1 = 1e-13;

  int sign(const Affine& a) const {
    double v = a.c0 + t * a.c1;
    if (std::abs(v) > tol0) return v > 0 ? 1 : -1;
    if (std::abs(a.c0) > tol0) return 0;
    if (std::abs(a.c1) > tol1) return a.c1 > 0 ? 1 : -1;
    return 0;
  }
  static Affine zero() { return {}; }
};

struct ScalarOrder {
  double tol = 1e-14;
  int sign(double v) const { return v > tol ? 1 : (v < -tol ? -1 : 0); }
  static double zero() { return 0.0; }
};

template <class M>
struct BasicCell {
  std::size_t i;
  std::size_t j;
  M x;
};

template <class M>
struct SimplexResult {
  std::vector<BasicCell<M>> basis;
  std::vector<double> u;  // row duals
  std::vector<double> v;  // column duals
  int pivots = 0;
};

// Transportation simplex: north-west corner start, Bland's rule for entering
// and leaving variables. cost is row-major m x n.
template <class M, class Order>
SimplexResult<M> transportation_simplex(const std::vector<double>& cost, std::size_t m,
                                        std::size_t n, const std::vector<M>& a,
                                        const std::vector<M>& b, const Order& ord) {
  SimplexResult<M> res;
  auto& cells = res.basis;
  std::vector<long> where(m * n, -1);

  {
    std::vector<M> ra = a, rb = b;
    std::size_t i = 0, j = 0;
    while (true) {
      M x = ord.sign(ra[i] - rb[j]) <= 0 ? ra[i] : rb[j];
      where[i * n + j] = static_cast<long>(cells.size());
      cells.push_back({i, j, x});
      ra[i] -= x;
      rb[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (ord.sign(ra[i]) == 0) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  res.u.assign(m, 0.0);
  res.v.assign(n, 0.0);
  const std::size_t nodes = m + n;  // rows 0..m-1, columns m..m+n-1
  constexpr int kMaxPivots = 100000;

  while (true) {
    // spanning-tree adjacency of the current basis
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      adj[cells[k].i].push_back(k);
      adj[m + cells[k].j].push_back(k);
    }

    std::vector<char> known(nodes, 0);
    std::deque<std::size_t> queue{0};
    known[0] = 1;
    res.u[0] = 0.0;
    while (!queue.empty()) {
      std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t k : adj[node]) {
        const auto& c = cells[k];
        std::size_t other = node < m ? m + c.j : c.i;
        if (known[other]) continue;
        known[other] = 1;
        double cij = cost[c.i * n + c.j];
        if (other >= m) {
          res.v[c.j] = cij - res.u[c.i];
        } else {
          res.u[c.i] = cij - res.v[c.j];
        }
        queue.push_back(other);
      }
    }

    std::size_t ei = m, ej = n;
    for (std::size_t i = 0; i < m && ei == m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (where[i * n + j] >= 0) continue;
        if (cost[i * n + j] - res.u[i] - res.v[j] < -1e-12) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei == m) break;
    if (++res.pivots > kMaxPivots) {
      throw Error(Errc::NoConvergence, "transportation simplex exceeded pivot limit");
    }

    // path in the basis tree from column ej to row ei
    std::vector<long> via(nodes, -1);  // cell used to reach node
    std::vector<char> seen(nodes, 0);
    std::deque<std::size_t> bfs{m + ej};
    seen[m + ej] = 1;
    while (!bfs.empty() && !seen[ei]) {
      std::size_t node = bfs.front();
      bfs.pop_front();
      for (std::size_t k : adj[node]) {
        const auto& c = cells[k];
        std::size_t other = node < m ? m + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = static_cast<long>(k);
        bfs.push_back(other);
      }
    }
    // walk back from row ei to column ej; cells alternate +, -, ... seen from
    // the entering cell, so the cell touching column ej is '-'
    std::vector<std::size_t> path;
    for (std::size_t node = ei; node != m + ej;) {
      std::size_t k = static_cast<std::size_t>(via[node]);
      path.push_back(k);
      const auto& c = cells[k];
      node = node < m ? m + c.j : c.i;
    }
    std::reverse(path.begin(), path.end());  // path[0] touches column ej

    long leave = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      std::size_t k = path[p];
      if (leave < 0) {
        leave = static_cast<long>(k);
        continue;
      }
      const auto& best = cells[static_cast<std::size_t>(leave)];
      int s = ord.sign(cells[k].x - best.x);
      bool lex_smaller = std::pair(cells[k].i, cells[k].j) < std::pair(best.i, best.j);
      if (s < 0 || (s == 0 && lex_smaller)) leave = static_cast<long>(k);
    }
    M theta = cells[static_cast<std::size_t>(leave)].x;
    for (std::size_t p = 0; p < path.size(); ++p) {
      auto& c = cells[path[p]];
      if (p % 2 == 0) {
        c.x -= theta;
      } else {
        c.x += theta;
      }
    }

    auto lk = static_cast<std::size_t>(leave);
    where[cells[lk].i * n + cells[lk].j] = -1;
    cells[lk] = {ei, ej, theta};
    where[ei * n + ej] = static_cast<long>(lk);
  }
  return res;
}

inline void check_distribution(const WeightedGraph& g, const Distribution& d, const char* which) {
  double s = 0.0;
  for (const auto& [v, m] : d.mass) {
    if (v >= g.vertex_count()) throw Error(Errc::UnknownVertex, "vertex index out of range");
    if (m < 0.0 || !std::isfinite(m)) {
      throw Error(Errc::UnbalancedMass, std::string(which) + " has a negative mass");
    }
    s += m;
  }
  if (std::abs(s - 1.0) > 1e-10) {
    throw Error(Errc::UnbalancedMass,
                std::string(which) + " sums to " + std::to_string(s) + ", not 1");
  }
}

struct AffineCost {
  double w0 = 0.0;
  double w1 = 0.0;
  double at(double t) const { return w0 + t * w1; }
};

// W(D_{t,i}, D_{t,j}) as W0 + t*W1 on the optimal basis at the given t.
inline AffineCost neighbor_transport_affine(const WeightedGraph& g, const GeodesicTable& geo,
                                            Vertex i, Vertex j, double t) {
  auto build = [&](Vertex c) {
    std::vector<std::pair<Vertex, Affine>> d{{c, Affine{1.0, -1.0}}};
    for (const auto& [v, w] : neighbor_weights(g, geo, c)) d.push_back({v, Affine{0.0, w}});
    std::sort(d.begin(), d.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return d;
  };
  auto mu = build(i);
  auto nu = build(j);
  std::vector<double> cost(mu.size() * nu.size());
  for (std::size_t r = 0; r < mu.size(); ++r) {
    for (std::size_t c = 0; c < nu.size(); ++c) {
      cost[r * nu.size() + c] = geo(mu[r].first, nu[c].first);
    }
  }
  std::vector<Affine> a, b;
  for (const auto& p : mu) a.push_back(p.second);
  for (const auto& p : nu) b.push_back(p.second);
  AffineOrder ord{t};
  auto res = transportation_simplex(cost, a.size(), b.size(), a, b, ord);
  AffineCost out;
  for (const auto& c : res.basis) {
    double cij = cost[c.i * nu.size() + c.j];
    out.w0 += c.x.c0 * cij;
    out.w1 += c.x.c1 * cij;
  }
  return out;
}

}  // namespace detail

inline TransportPlan wasserstein(const WeightedGraph& g, const GeodesicTable& geo,
                                 const Distribution& mu, const Distribution& nu) {
  detail::check_distribution(g, mu, "mu");
  detail::check_distribution(g, nu, "nu");

  std::vector<Vertex> xs, ys;
  std::vector<double> a, b;
  for (const auto& [v, m] : mu.mass) {
    if (m > 0.0) {
      xs.push_back(v);
      a.push_back(m);
    }
  }
  for (const auto& [v, m] : nu.mass) {
    if (m > 0.0) {
      ys.push_back(v);
      b.push_back(m);
    }
  }
  // rebalance the tiny normalization drift into the last column
  double sa = 0.0, sb = 0.0;
  for (double x : a) sa += x;
  for (double x : b) sb += x;
  b.back() += sa - sb;

  const std::size_t m = xs.size(), n = ys.size();
  std::vector<double> cost(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = geo(xs[i], ys[j]);
  }
  auto res = detail::transportation_simplex(cost, m, n, a, b, detail::ScalarOrder{});

  TransportPlan plan;
  for (const auto& c : res.basis) {
    double x = std::max(c.x, 0.0);
    plan.cost += x * cost[c.i * n + c.j];
    if (x > 0.0) plan.flows.push_back({xs[c.i], ys[c.j], x});
  }
  std::sort(plan.flows.begin(), plan.flows.end(), [](const Flow& p, const Flow& q) {
    return std::pair(p.from, p.to) < std::pair(q.from, q.to);
  });

  plan.potential.assign(g.vertex_count(), std::numeric_limits<double>::infinity());
  for (Vertex z = 0; z < g.vertex_count(); ++z) {
    for (std::size_t j = 0; j < n; ++j) {
      plan.potential[z] = std::min(plan.potential[z], geo(z, ys[j]) - res.v[j]);
    }
  }
  return plan;
}

// Successive shortest paths (Bellman-Ford) on the bipartite support network.
// Shares nothing with the simplex above.
inline double wasserstein_oracle(const WeightedGraph& g, const GeodesicTable& geo,
                                 const Distribution& mu, const Distribution& nu) {
  detail::check_distribution(g, mu, "mu");
  detail::check_distribution(g, nu, "nu");

  struct Arc {
    std::size_t to;
    double cap;
    double cost;
    std::size_t rev;
  };
  const std::size_t m = mu.mass.size(), n = nu.mass.size();
  const std::size_t source = m + n, sink = m + n + 1, nodes = m + n + 2;
  std::vector<std::vector<Arc>> net(nodes);
  auto add = [&](std::size_t u, std::size_t v, double cap, double c) {
    net[u].push_back({v, cap, c, net[v].size()});
    net[v].push_back({u, 0.0, -c, net[u].size() - 1});
  };
  constexpr double big = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < m; ++i) add(source, i, mu.mass[i].second, 0.0);
  for (std::size_t j = 0; j < n; ++j) add(m + j, sink, nu.mass[j].second, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      add(i, m + j, big, geo(mu.mass[i].first, nu.mass[j].first));
    }
  }

  constexpr double eps = 1e-15;
  double sent = 0.0, total_cost = 0.0;
  const double target = std::min(mu.total(), nu.total());
  for (int iter = 0; iter < 10000 && target - sent > eps; ++iter) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<std::pair<std::size_t, std::size_t>> prev(nodes, {nodes, 0});
    dist[source] = 0.0;
    for (std::size_t round = 0; round + 1 < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == std::numeric_limits<double>::infinity()) continue;
        for (std::size_t k = 0; k < net[u].size(); ++k) {
          const Arc& arc = net[u][k];
          if (arc.cap <= eps) continue;
          double nd = dist[u] + arc.cost;
          if (nd < dist[arc.to] - 1e-15) {
            dist[arc.to] = nd;
            prev[arc.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == std::numeric_limits<double>::infinity()) break;
    double push = target - sent;
    for (std::size_t v = sink; v != source; v = prev[v].first) {
      push = std::min(push, net[prev[v].first][prev[v].second].cap);
    }
    for (std::size_t v = sink; v != source; v = prev[v].first) {
      Arc& arc = net[prev[v].first][prev[v].second];
      arc.cap -= push;
      net[v][arc.rev].cap += push;
    }
    sent += push;
    total_cost += push * dist[sink];
  }
  return total_cost;
}

}  // namespace graphgrav
