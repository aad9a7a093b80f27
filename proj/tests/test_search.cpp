#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "graphgrav/generators.hpp"
#include "graphgrav/search.hpp"

using namespace graphgrav;

namespace {

PartialSetting leaf_edges(const WeightedGraph& g, const Setting& s) {
  PartialSetting out;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (g.degree(g.edge(e).u) == 1 || g.degree(g.edge(e).v) == 1) out[e] = s.lengths[e];
  }
  return out;
}

}  // namespace

TEST(Extremize, TriangleMaximumIsConstant) {
  auto g = gen_complete(3);
  ExtremizeOptions opt;
  opt.restarts = 4;
  auto res = extremize_action(g, {}, Objective::Max, opt);
  EXPECT_NEAR(res.objective, 4.5, 1e-6);
  for (double l : res.setting.lengths) EXPECT_NEAR(l, 1.0, 1e-2);
  EXPECT_NEAR(action_plain(g.with_setting(res.setting)).total, res.objective, 1e-8);
}

TEST(Extremize, TriangleMinimumIsOneOneTwo) {
  auto g = gen_complete(3);
  ExtremizeOptions opt;
  opt.restarts = 6;
  auto res = extremize_action(g, {}, Objective::Min, opt);
  EXPECT_NEAR(res.objective, 3.6, 1e-5);
  auto l = res.setting.lengths;
  std::sort(l.begin(), l.end());
  EXPECT_NEAR(l[1] / l[0], 1.0, 1e-2);
  // the long edge only matters through its geodesic, which saturates at l0 + l1
  EXPECT_GE(l[2] / l[0], 2.0 - 2e-2);
  auto h = g.with_setting(res.setting);
  GeodesicTable geo(h);
  double p_long = 0.0;
  for (EdgeIndex e = 0; e < 3; ++e) p_long = std::max(p_long, geo(h.edge(e).u, h.edge(e).v));
  EXPECT_NEAR(p_long / l[0], 2.0, 2e-2);
}

TEST(Extremize, SquareLocalMinimumNearKnownSetting) {
  auto g = gen_cycle(4);
  double a = 1 + std::sqrt(2.0);
  ExtremizeOptions opt;
  opt.restarts = 1;
  opt.simplex_step = 0.02;
  opt.init = Setting{{a * 1.02, a * 0.99, 1.01, 0.98}};
  auto res = extremize_action(g, {}, Objective::Min, opt);
  EXPECT_NEAR(res.objective, 6 - 2 * std::sqrt(2.0), 1e-6);
  auto l = res.setting.lengths;
  EXPECT_NEAR(l[0] / l[2], a, 1e-3);
  EXPECT_NEAR(l[1] / l[3], a, 1e-3);
}

TEST(Extremize, SquareSupremumRunsIntoTheBox) {
  auto g = gen_cycle(4);
  ExtremizeOptions opt;
  opt.restarts = 8;
  auto res = extremize_action(g, {}, Objective::Max, opt);
  EXPECT_GT(res.objective, 4.9);
  EXPECT_LE(res.objective, 5.0 + 1e-9);
  EXPECT_TRUE(res.at_box_boundary);
}

TEST(Extremize, DeterministicForFixedSeed) {
  auto g = gen_complete(4);
  ExtremizeOptions opt;
  opt.restarts = 3;
  opt.seed = 123;
  opt.max_evals = 400;
  auto a = extremize_action(g, {}, Objective::Min, opt);
  auto b = extremize_action(g, {}, Objective::Min, opt);
  EXPECT_EQ(a.setting.lengths, b.setting.lengths);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Extremize, FixedEdgesStayFixed) {
  auto g = gen_complete(3);
  PartialSetting fixed{{0, 2.0}};
  ExtremizeOptions opt;
  opt.restarts = 2;
  auto res = extremize_action(g, fixed, Objective::Max, opt);
  EXPECT_DOUBLE_EQ(res.setting.lengths[0], 2.0);
  EXPECT_NEAR(res.objective, 4.5, 1e-6);
  try {
    extremize_action(g, {{0, 1.0}, {1, 1.0}, {2, 1.0}}, Objective::Max);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoFreeEdges);
  }
}

TEST(Newton, ConstantBoundaryGivesConstantInterior) {
  auto g = gen_tree(2, 3);
  auto bdy = leaf_edges(g, constant_setting(g, 2.5));
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  // starts well off the boundary scale can slide toward collapsed edges, where
  // the normalized residual decays without vanishing; keep them on scale
  for (int k = 0; k < 10; ++k) {
    Setting init = constant_setting(g, 1.0);
    for (double& l : init.lengths) l = 2.5 * std::exp(u(rng));
    auto res = newton_solve_teom(g, bdy, init);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.status, SolveStatus::Converged);
    for (double l : res.setting.lengths) EXPECT_NEAR(l, 2.5, 1e-8);
    EXPECT_TRUE(verify_solution(g, res.setting).is_solution);
  }
}

TEST(Newton, RecoversHalfHalfInterior) {
  auto g = gen_tree(3, 3);
  auto target = half_half_setting(3, 3, {2, 2, 2});
  auto bdy = leaf_edges(g, target);
  Setting init = target;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (double& l : init.lengths) l *= std::exp(u(rng));
  auto res = newton_solve_teom(g, bdy, init);
  ASSERT_TRUE(res.converged);
  EXPECT_TRUE(verify_solution(g, res.setting).is_solution);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    EXPECT_NEAR(res.setting.lengths[e], target.lengths[e], 1e-8 * target.lengths[e]);
  }
}

TEST(Newton, NoGoBoundaryDoesNotConverge) {
  auto g = gen_tree(2, 3);
  auto rt = root_tree(g, 0);
  PartialSetting bdy;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    int d = std::max(rt.depth[g.edge(e).u], rt.depth[g.edge(e).v]);
    if (d == 2) bdy[e] = 2.0;
    if (d == 3) bdy[e] = 1.0;
  }
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 10; ++k) {
    Setting init = constant_setting(g, 1.0);
    for (double& l : init.lengths) l = std::exp(u(rng));
    auto res = newton_solve_teom(g, bdy, init);
    EXPECT_FALSE(res.converged);
    EXPECT_NE(res.status, SolveStatus::Converged);
  }
}

TEST(Newton, RejectsBadInput) {
  auto cyc = gen_cycle(4);
  EXPECT_THROW(newton_solve_teom(cyc, {}, cyc.setting()), Error);
  auto g = gen_tree(2, 2);
  try {
    newton_solve_teom(g, {{0, -1.0}}, g.setting());
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonpositiveLength);
  }
}

TEST(Newton, ResultsAreScaleGauged) {
  // same boundary up to scale gives the same solution up to scale
  auto g = gen_tree(2, 3);
  auto bdy = leaf_edges(g, constant_setting(g, 1.0));
  auto res1 = newton_solve_teom(g, bdy, constant_setting(g, 1.3));
  PartialSetting bdy7;
  for (const auto& [e, l] : bdy) bdy7[e] = l * 7.0;
  auto res7 = newton_solve_teom(g, bdy7, constant_setting(g, 1.3 * 7.0));
  ASSERT_TRUE(res1.converged && res7.converged);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    EXPECT_NEAR(res7.setting.lengths[e], 7.0 * res1.setting.lengths[e], 1e-8);
  }
}
