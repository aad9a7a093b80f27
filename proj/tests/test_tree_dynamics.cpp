#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphgrav/curvature.hpp"
#include "graphgrav/generators.hpp"
#include "graphgrav/search.hpp"
#include "graphgrav/tree_dynamics.hpp"
#include "oracles.hpp"

using namespace graphgrav;

namespace {

Setting random_setting(const WeightedGraph& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Setting s = g.setting();
  for (double& l : s.lengths) l = std::exp(u(rng));
  return s;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Parse;
}

}  // namespace

TEST(TeomResidual, ConstantTreesSolve) {
  for (int q : {1, 2, 3, 4}) {
    auto g = gen_tree(q, 3);
    auto s = constant_setting(g, 1.7);
    for (EdgeIndex e : interior_edges(g)) {
      EXPECT_NEAR(teom_residual(g, s, g.edge(e).u, g.edge(e).v), 0.0, 1e-14);
    }
  }
}

TEST(TeomResidual, AlternatingLineRatiosSolve) {
  std::vector<double> ratios{2, 3, 2, 3, 2, 3, 2};
  auto g = gen_path(static_cast<int>(ratios.size()) + 1);
  auto s = t1_chain_setting(ratios);
  for (EdgeIndex e : interior_edges(g)) {
    EXPECT_NEAR(teom_residual(g, s, g.edge(e).u, g.edge(e).v), 0.0, 1e-12);
  }
}

TEST(TeomResidual, LocalMaximumOnLine) {
  auto g = gen_path(3);
  Setting s{{1.0, 3.0, 1.5}};
  EXPECT_LT(teom_residual(g, s, 1, 2), -1e-3);
  Setting t{{1.0, 0.3, 1.5}};
  EXPECT_GT(teom_residual(g, t, 1, 2), 1e-3);
}

TEST(TeomResidual, MatchesDirectFormula) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = gen_tree(1 + trial % 3, 3);
    auto s = random_setting(g, rng, 0.2, 5.0);
    auto h = g.with_setting(s);
    for (EdgeIndex e : interior_edges(g)) {
      EXPECT_NEAR(teom_residual(g, s, g.edge(e).u, g.edge(e).v), oracle::teom(h, e),
                  1e-12 * (1 + std::abs(oracle::teom(h, e))));
    }
  }
}

TEST(TeomResidual, Errors) {
  auto cyc = gen_cycle(4);
  EXPECT_EQ(code_of([&] { teom_residual(cyc, cyc.setting(), 0, 1); }), Errc::NotATree);
  EXPECT_EQ(code_of([&] { verify_solution(cyc, cyc.setting()); }), Errc::NotATree);
  auto g = gen_path(3);
  EXPECT_EQ(code_of([&] { teom_residual(g, g.setting(), 0, 1); }), Errc::BoundaryEdge);
  EXPECT_EQ(code_of([&] { teom_residual(g, g.setting(), 0, 2); }), Errc::NotAnEdge);
  EXPECT_EQ(code_of([&] { teom_residual(g, Setting{{1.0, 1.0}}, 1, 2); }), Errc::BadParams);
}

TEST(VerifySolution, HalfHalfAndTwoProgression) {
  auto hh = gen_tree(3, 5);
  auto rep = verify_solution(hh, half_half_setting(3, 5, {2, 2, 2, 2, 2}));
  EXPECT_TRUE(rep.is_solution);
  EXPECT_EQ(rep.edges.size(), interior_edges(hh).size());

  double x = (std::sqrt(46.0) - 5.0) / 7.0;
  auto tp = gen_tree(3, 4);
  auto r2 = verify_solution(tp, two_progression_setting(3, 1, 1, 0.25, x, 3.0, 4));
  EXPECT_TRUE(r2.is_solution);
  EXPECT_LT(r2.max_abs_residual, 1e-9);
}

TEST(VerifySolution, PerturbedConstantIsNotASolution) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 0.05);
  auto g = gen_tree(2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Setting s = constant_setting(g, 1.0);
    for (double& l : s.lengths) l *= std::exp(n(rng));
    auto rep = verify_solution(g, s);
    EXPECT_FALSE(rep.is_solution);
    double mx = 0.0;
    for (double r : rep.residuals) mx = std::max(mx, std::abs(r));
    EXPECT_DOUBLE_EQ(mx, rep.max_abs_residual);
  }
}

TEST(ScaleSetting, Examples) {
  auto g = gen_tree(2, 2);
  auto half = scale_setting(constant_setting(g, 1.0), 2.0);
  for (double l : half.lengths) EXPECT_DOUBLE_EQ(l, 0.5);
  auto s = half_half_setting(3, 4, {2, 2, 2, 2});
  EXPECT_EQ(scale_setting(s, 1.0).lengths, s.lengths);
  EXPECT_EQ(code_of([&] { scale_setting(s, 0.0); }), Errc::NonpositiveScale);
  EXPECT_EQ(code_of([&] { scale_setting(s, -2.0); }), Errc::NonpositiveScale);
}

TEST(ScaleSetting, SolutionsStaySolutions) {
  auto g = gen_tree(3, 4);
  auto s = half_half_setting(3, 4, {2, 3, 2, 3});
  ASSERT_TRUE(verify_solution(g, s).is_solution);
  std::mt19937_64 rng(3);
  auto noisy = random_setting(g, rng, 0.5, 2.0);
  for (double lambda : {0.5, 2.0, 7.0}) {
    EXPECT_TRUE(verify_solution(g, scale_setting(s, lambda)).is_solution) << lambda;
    // residual is homogeneous of degree one in the lengths
    auto a = verify_solution(g, noisy), b = verify_solution(g, scale_setting(noisy, lambda));
    for (std::size_t k = 0; k < a.residuals.size(); ++k) {
      EXPECT_NEAR(b.residuals[k], a.residuals[k] / lambda, 1e-12);
    }
  }
}

TEST(T1NextRatios, Examples) {
  auto a = t1_next_ratios(2.0);
  EXPECT_DOUBLE_EQ(a[0], 2.0);
  EXPECT_DOUBLE_EQ(a[1], 3.0);
  auto b = t1_next_ratios(3.0);
  EXPECT_DOUBLE_EQ(b[1], 2.0);
  double fp = 1 + std::sqrt(2.0);
  auto c = t1_next_ratios(fp);
  EXPECT_NEAR(c[0], fp, 1e-15);
  EXPECT_NEAR(c[1], fp, 1e-14);
  EXPECT_EQ(code_of([] { t1_next_ratios(1.0); }), Errc::RatioNotGreaterThanOne);
  EXPECT_EQ(code_of([] { t1_next_ratios(0.5); }), Errc::RatioNotGreaterThanOne);
}

TEST(T1Chains, ValidChainsAreMonotoneSolutions) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> r0d(1.1, 6.0);
  for (int trial = 0; trial < 30; ++trial) {
    double r0 = r0d(rng);
    auto opts = t1_next_ratios(r0);
    std::vector<double> ratios;
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < 10; ++k) ratios.push_back(opts[coin(rng) ? 1 : 0]);
    auto g = gen_path(11);
    auto s = t1_chain_setting(ratios);
    auto rep = verify_solution(g, s);
    EXPECT_LT(rep.max_rel_residual, 1e-12);
    for (std::size_t k = 0; k + 1 < s.lengths.size(); ++k) {
      EXPECT_GT(s.lengths[k], s.lengths[k + 1]);
    }
  }
}

TEST(T1Chains, NewtonSolutionsOnLinesAreMonotone) {
  // boundary ends fixed; any converged non-constant interior is strictly monotone
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> end(0.05, 20.0);
  int nonconstant = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto g = gen_path(6);
    PartialSetting bdy{{0, 1.0}, {5, end(rng)}};
    auto init = random_setting(g, rng, 0.5, 2.0);
    auto res = newton_solve_teom(g, bdy, init);
    if (!res.converged) continue;
    const auto& l = res.setting.lengths;
    if (std::abs(l[0] - l[5]) < 1e-9) continue;
    ++nonconstant;
    bool dec = true, inc = true;
    for (std::size_t k = 0; k + 1 < l.size(); ++k) {
      dec &= l[k] > l[k + 1];
      inc &= l[k] < l[k + 1];
    }
    EXPECT_TRUE(dec || inc);
  }
  EXPECT_GT(nonconstant, 0);
}

TEST(NogoIndicator, Signs) {
  auto g = gen_tree(2, 3);
  auto rt = root_tree(g, 0);
  std::vector<Vertex> sigma;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (rt.depth[v] <= 2) sigma.push_back(v);
  }
  auto region = extract_region(g, std::span<const Vertex>(sigma));

  EXPECT_NEAR(nogo_indicator(g, region, constant_setting(g, 1.3)), 0.0, 1e-14);

  auto with_inward = [&](double inward) {
    Setting s = constant_setting(g, 1.0);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      if (std::max(rt.depth[ed.u], rt.depth[ed.v]) == 2) s.lengths[e] = inward;
    }
    return s;
  };
  EXPECT_LT(nogo_indicator(g, region, with_inward(2.0)), 0.0);
  EXPECT_GT(nogo_indicator(g, region, with_inward(0.5)), 0.0);
  auto cyc = gen_cycle(4);
  std::vector<Vertex> all{0, 1, 2, 3};
  EXPECT_EQ(code_of([&] {
              nogo_indicator(cyc, extract_region(cyc, std::span<const Vertex>(all)),
                             cyc.setting());
            }),
            Errc::NotATree);
}

TEST(HalfHalfStats, Examples) {
  auto a = geometric_half_half_stats(3, 1.0);
  EXPECT_NEAR(a.kappa, -1.0, 1e-15);
  EXPECT_NEAR(a.ratio, 4.0, 1e-15);
  EXPECT_NEAR(geometric_half_half_stats(1, 2.0).kappa, 0.2, 1e-15);
  auto c = geometric_half_half_stats(5, 1.0);
  EXPECT_NEAR(c.kappa, -4.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.ratio, 6.0, 1e-14);
  EXPECT_EQ(code_of([] { geometric_half_half_stats(2, 1.0); }), Errc::QNotOdd);
  // q = 1 is the line: 1 - 2r/(1+r^2) = (1-r)^2/(1+r^2), zero only at r = 1
  for (double r : {0.1, 0.5, 3.0, 40.0}) {
    EXPECT_GT(geometric_half_half_stats(1, r).kappa, 0.0);
  }
  EXPECT_NEAR(geometric_half_half_stats(1, 1.0).kappa, 0.0, 1e-15);
}

TEST(HalfHalfStats, MatchConstructedSettings) {
  for (int q : {1, 3, 5}) {
    for (double r : {1.5, 2.0, 3.0}) {
      int depth = q == 5 ? 3 : 4;
      auto g = gen_tree(q, depth);
      auto h = g.with_setting(half_half_setting(q, depth, std::vector<double>(depth, r)));
      GeodesicTable geo(h);
      auto want = geometric_half_half_stats(q, r);
      for (EdgeIndex e : interior_edges(h)) {
        EXPECT_NEAR(kappa_tree_closed(h, geo, h.edge(e).u, h.edge(e).v), want.kappa, 1e-9);
      }
      for (Vertex v = 0; v < h.vertex_count(); ++v) {
        if (h.degree(v) == static_cast<std::size_t>(q + 1)) {
          EXPECT_NEAR(local_sums(h, geo, v).ratio(), want.ratio, 1e-9);
        }
      }
    }
  }
}

TEST(TwoProgressionX, Examples) {
  double want = (std::sqrt(46.0) - 5.0) / 7.0;
  auto xs = two_progression_x(0.25, 3.0);
  bool found = false;
  for (double x : xs) found |= std::abs(x - want) < 1e-12;
  EXPECT_TRUE(found);

  auto ones = two_progression_x(1.0, 1.0);
  found = false;
  for (double x : ones) found |= std::abs(x - 1.0) < 1e-12;
  EXPECT_TRUE(found);

  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = u(rng), y = u(rng);
    std::vector<double> roots;
    try {
      roots = two_progression_x(a, y);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NegativeDiscriminant);
      continue;
    }
    for (double x : roots) {
      double lhs = a * y * (y + 1) * (x * x + 1), rhs = x * (x + 1) * (y * y + 1);
      EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(lhs)));
    }
  }
}

TEST(MaxMinExclusion, ExtremalInteriorEdgesHaveNonzeroResidual) {
  std::mt19937_64 rng(19);
  int maxima = 0, minima = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = gen_tree(1 + trial % 3, 3);
    auto s = random_setting(g, rng, 0.2, 5.0);
    for (EdgeIndex e : interior_edges(g)) {
      const auto& ed = g.edge(e);
      bool is_max = true, is_min = true;
      for (Vertex end : {ed.u, ed.v}) {
        for (const auto& inc : g.neighbors(end)) {
          if (inc.edge == e) continue;
          is_max &= s.lengths[e] > s.lengths[inc.edge];
          is_min &= s.lengths[e] < s.lengths[inc.edge];
        }
      }
      double r = teom_residual(g, s, ed.u, ed.v);
      if (is_max) {
        ++maxima;
        EXPECT_LT(r, 0.0);
      }
      if (is_min) {
        ++minima;
        EXPECT_GT(r, 0.0);
      }
    }
  }
  EXPECT_GT(maxima, 20);
  EXPECT_GT(minima, 20);
}

TEST(ConstantUniqueness, NewtonFindsOnlyTheConstantSetting) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  int runs = 0, converged = 0;
  for (int q : {2, 3}) {
    for (int depth : {2, 3, 4}) {
      if (q == 3 && depth == 4) continue;  // kept to desk-scale runtime
      auto g = gen_tree(q, depth);
      PartialSetting bdy;
      for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        if (g.degree(g.edge(e).u) == 1 || g.degree(g.edge(e).v) == 1) bdy[e] = 1.0;
      }
      for (int k = 0; k < 20; ++k) {
        Setting init = constant_setting(g, 1.0);
        for (double& l : init.lengths) l = std::exp(u(rng));
        auto res = newton_solve_teom(g, bdy, init);
        ++runs;
        if (!res.converged) continue;
        ++converged;
        for (double l : res.setting.lengths) EXPECT_NEAR(l, 1.0, 1e-8);
        EXPECT_TRUE(verify_solution(g, res.setting).is_solution);
      }
    }
  }
  EXPECT_EQ(runs, 100);
  EXPECT_GE(converged, 90);
}

TEST(HalfHalfEquivalence, ResidualsMatchLinePaths) {
  // geometric chains stay solutions under the power map, so only mixed ratios
  // give nonzero residuals to compare
  int compared = 0;
  for (const auto& ratios : std::vector<std::vector<double>>{
           {2, 2, 2, 2}, {2, 3, 2, 3}, {3, 3, 2, 2}, {1.5, 5, 5, 1.5}}) {
    auto g = gen_tree(3, 4);
    auto s = half_half_setting(3, 4, ratios);
    // l -> l^1.3 keeps the two-class structure at every vertex but breaks the solution
    for (double& l : s.lengths) l = std::pow(l, 1.3);
    for (EdgeIndex e : interior_edges(g)) {
      const auto& ed = g.edge(e);
      double p = s.lengths[e];
      auto other = [&](Vertex v) {
        double o = 0.0;
        int n_same = 0, n_other = 0;
        for (const auto& inc : g.neighbors(v)) {
          if (std::abs(s.lengths[inc.edge] - p) <= 1e-12 * p) {
            ++n_same;
          } else {
            o = s.lengths[inc.edge];
            ++n_other;
          }
        }
        return std::tuple(o, n_same, n_other);
      };
      auto [x, su, ou] = other(ed.u);
      auto [y, sv, ov] = other(ed.v);
      ASSERT_EQ(su, 2);
      ASSERT_EQ(ou, 2);
      ASSERT_EQ(sv, 2);
      ASSERT_EQ(ov, 2);
      auto line = gen_path(3);
      double want = teom_residual(line, Setting{{x, p, y}}, 1, 2);
      EXPECT_NEAR(teom_residual(g, s, ed.u, ed.v), want, 1e-12);
      compared += std::abs(want) > 1e-6;
    }
  }
  EXPECT_GT(compared, 0);
}
