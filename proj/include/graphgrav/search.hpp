#pragma once

// Damped Newton on the tree equations of motion and Nelder-Mead extremal
// action search, both in log-length coordinates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "graphgrav/action.hpp"
#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/tree_dynamics.hpp"

namespace graphgrav {

inline constexpr double kMinLength = 1e-6;
inline constexpr double kMaxLength = 1e3;

enum class SolveStatus { Converged, NoConvergence, SingularJacobian };

inline std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NoConvergence: return "no_convergence";
    case SolveStatus::SingularJacobian: return "singular_jacobian";
  }
  return "?";
}

struct SearchResult {
  Setting setting;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  SolveStatus status = SolveStatus::NoConvergence;
  bool at_box_boundary = false;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 200;
  std::vector<EdgeIndex> equations;  // empty: interior_edges(g)
};

namespace detail {

inline std::vector<EdgeIndex> free_edges(const WeightedGraph& g, const PartialSetting& fixed) {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (!fixed.contains(e)) out.push_back(e);
  }
  return out;
}

inline bool near_box(double len) {
  return len <= kMinLength * 1.001 || len >= kMaxLength / 1.001;
}

}  // namespace detail

// Unknowns are the log-lengths of edges not in `boundary`. The system is the
// tEoM residual divided by c_i/d_i + c_j/d_j (same zeros, no dependence on
// the overall scale); when equations outnumber unknowns the step is the
// least-squares one. Steps are capped at 0.5 in log space and halved until the
// residual norm drops.
inline SearchResult newton_solve_teom(const WeightedGraph& g, const PartialSetting& boundary,
                                      const Setting& init, const NewtonOptions& opt = {}) {
  detail::require_tree(g);
  detail::require_cover(g, init);
  for (const auto& [e, len] : boundary) {
    if (e >= g.edge_count()) throw Error(Errc::NotAnEdge, "boundary edge index out of range");
    if (!(len > 0.0)) throw Error(Errc::NonpositiveLength, "boundary length must be positive");
  }
  const auto eqs = opt.equations.empty() ? interior_edges(g) : opt.equations;
  const auto free = detail::free_edges(g, boundary);

  std::vector<double> len = init.lengths;
  for (const auto& [e, l] : boundary) len[e] = l;
  const double lo = std::log(kMinLength), hi = std::log(kMaxLength);

  auto apply = [&](const Eigen::VectorXd& x) {
    for (std::size_t k = 0; k < free.size(); ++k) {
      len[free[k]] = std::exp(std::clamp(x[static_cast<Eigen::Index>(k)], lo, hi));
    }
  };
  auto residual = [&](const Eigen::VectorXd& x) {
    apply(x);
    Eigen::VectorXd f(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      f[static_cast<Eigen::Index>(k)] = detail::teom_normalized(g, len, eqs[k]);
    }
    return f;
  };
  auto max_raw = [&]() {
    double m = 0.0;
    for (EdgeIndex e : eqs) m = std::max(m, std::abs(detail::teom_raw(g, len, e)));
    return m;
  };

  Eigen::VectorXd x(static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    x[static_cast<Eigen::Index>(k)] = std::clamp(std::log(len[free[k]]), lo, hi);
  }

  SearchResult res;
  res.restarts_used = 1;
  Eigen::VectorXd f = residual(x);
  for (res.iterations = 0;; ++res.iterations) {
    apply(x);
    double raw = max_raw();
    if (raw < opt.tol && f.lpNorm<Eigen::Infinity>() < opt.tol) {
      res.status = SolveStatus::Converged;
      break;
    }
    if (res.iterations >= opt.max_iter || free.empty()) break;

    const double h = 1e-6;
    Eigen::MatrixXd jac(f.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      jac.col(k) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    if (!jac.allFinite()) {
      res.status = SolveStatus::SingularJacobian;
      break;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    if (cod.rank() == 0) {
      res.status = SolveStatus::SingularJacobian;
      break;
    }
    Eigen::VectorXd step = cod.solve(-f);
    double biggest = step.lpNorm<Eigen::Infinity>();
    if (biggest > 0.5) step *= 0.5 / biggest;

    const double norm0 = f.norm();
    bool accepted = false;
    double lambda = 1.0;
    for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
      Eigen::VectorXd xn = (x + lambda * step).cwiseMax(lo).cwiseMin(hi);
      Eigen::VectorXd fn = residual(xn);
      if (fn.allFinite() && fn.norm() < norm0) {
        x = xn;
        f = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled at a least-squares floor
  }

  apply(x);
  res.setting.lengths = len;
  res.objective = max_raw();
  res.converged = res.status == SolveStatus::Converged;
  for (EdgeIndex e : free) res.at_box_boundary |= detail::near_box(len[e]);
  return res;
}

enum class Objective { Min, Max };

struct ExtremizeOptions {
  int restarts = 20;
  std::uint64_t seed = 42;
  int max_evals = 10000;
  double min_diameter = 1e-8;
  double init_spread = 1.0;    // random starts: log-length uniform in +-spread
  double simplex_step = 0.5;   // initial simplex edge, in log-length
  std::optional<Setting> init;  // restart 0 starts here when given
  // objective on the full graph; defaults to the plain action over all edges
  std::function<double(const WeightedGraph&)> action;
};

namespace detail {

struct NelderMeadRun {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
};

template <class F>
NelderMeadRun nelder_mead(F&& f, std::vector<double> x0, double step, int max_evals,
                          double min_diameter, double lo, double hi) {
  const std::size_t n = x0.size();
  auto clampv = [&](std::vector<double> v) {
    for (double& c : v) c = std::clamp(c, lo, hi);
    return v;
  };
  NelderMeadRun run;
  auto eval = [&](const std::vector<double>& v) {
    ++run.evals;
    return f(v);
  };

  std::vector<std::vector<double>> simplex{clampv(x0)};
  for (std::size_t k = 0; k < n; ++k) {
    auto v = x0;
    v[k] += (v[k] + step > hi) ? -step : step;
    simplex.push_back(clampv(v));
  }
  std::vector<double> fv;
  for (const auto& v : simplex) fv.push_back(eval(v));

  std::vector<std::size_t> idx(n + 1);
  while (run.evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (auto k : idx) {
      s2.push_back(simplex[k]);
      f2.push_back(fv[k]);
    }
    simplex = std::move(s2);
    fv = std::move(f2);

    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t c = 0; c < n; ++c) {
        diameter = std::max(diameter, std::abs(simplex[k][c] - simplex[0][c]));
      }
    }
    if (diameter < min_diameter) {
      run.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[k][c] / static_cast<double>(n);
    }
    auto along = [&](double coef) {
      std::vector<double> v(n);
      for (std::size_t c = 0; c < n; ++c) {
        v[c] = centroid[c] + coef * (simplex[n][c] - centroid[c]);
      }
      return clampv(v);
    };

    auto xr = along(-1.0);
    double fr = eval(xr);
    if (fr < fv[0]) {
      auto xe = along(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      bool outside = fr < fv[n];
      auto xc = along(outside ? -0.5 : 0.5);
      double fc = eval(xc);
      if (fc < (outside ? fr : fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t c = 0; c < n; ++c) {
            simplex[k][c] = simplex[0][c] + 0.5 * (simplex[k][c] - simplex[0][c]);
          }
          fv[k] = eval(simplex[k]);
        }
      }
    }
  }
  std::size_t best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  run.x = simplex[best];
  run.value = fv[best];
  return run;
}

}  // namespace detail

// Nelder-Mead over the log-lengths of edges not in `fixed`, clamped to
// [1e-6, 1e3]. Restarts run on separate threads, restart k seeded with
// seed + k. Without fixed edges the winner is rescaled to unit geometric mean.
inline SearchResult extremize_action(const WeightedGraph& g, const PartialSetting& fixed,
                                     Objective objective, const ExtremizeOptions& opt = {}) {
  const auto free = detail::free_edges(g, fixed);
  if (free.empty()) throw Error(Errc::NoFreeEdges, "every edge is fixed");
  if (opt.restarts < 1) throw Error(Errc::BadParams, "need at least one restart");

  std::function<double(const WeightedGraph&)> action = opt.action;
  if (!action) action = [](const WeightedGraph& h) { return action_plain(h).total; };
  const double sign = objective == Objective::Min ? 1.0 : -1.0;
  const double lo = std::log(kMinLength), hi = std::log(kMaxLength);

  Setting base = g.setting();
  for (const auto& [e, l] : fixed) base.lengths[e] = l;

  auto to_setting = [&](const std::vector<double>& x) {
    Setting s = base;
    for (std::size_t k = 0; k < free.size(); ++k) s.lengths[free[k]] = std::exp(x[k]);
    return s;
  };
  auto evaluate = [&](const std::vector<double>& x) {
    try {
      double v = action(g.with_setting(to_setting(x)));
      return std::isfinite(v) ? sign * v : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<detail::NelderMeadRun> runs(static_cast<std::size_t>(opt.restarts));
  auto work = [&](int k) {
    std::vector<double> x0(free.size());
    if (k == 0 && opt.init) {
      for (std::size_t c = 0; c < free.size(); ++c) {
        x0[c] = std::clamp(std::log(opt.init->lengths.at(free[c])), lo, hi);
      }
    } else {
      std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(k));
      std::uniform_real_distribution<double> u(-opt.init_spread, opt.init_spread);
      for (double& c : x0) c = u(rng);
    }
    runs[static_cast<std::size_t>(k)] =
        detail::nelder_mead(evaluate, x0, opt.simplex_step, opt.max_evals, opt.min_diameter, lo, hi);
  };

  unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                           static_cast<unsigned>(opt.restarts)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int k = static_cast<int>(w); k < opt.restarts; k += static_cast<int>(workers)) work(k);
    });
  }
  for (auto& t : pool) t.join();

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].value < runs[best].value) best = k;
  }

  SearchResult res;
  res.restarts_used = opt.restarts;
  res.iterations = runs[best].evals;
  res.converged = runs[best].converged;
  res.status = res.converged ? SolveStatus::Converged : SolveStatus::NoConvergence;
  res.setting = to_setting(runs[best].x);
  for (double c : runs[best].x) res.at_box_boundary |= (c <= lo + 1e-3 || c >= hi - 1e-3);
  if (fixed.empty()) {
    double mean_log = 0.0;
    for (double l : res.setting.lengths) mean_log += std::log(l);
    mean_log /= static_cast<double>(res.setting.lengths.size());
    res.setting = scale_setting(res.setting, std::exp(mean_log));
  }
  res.objective = action(g.with_setting(res.setting));
  return res;
}

}  // namespace graphgrav
