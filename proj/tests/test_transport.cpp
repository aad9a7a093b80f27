#include <gtest/gtest.h>

#include <random>

#include "graphgrav/generators.hpp"
#include "graphgrav/transport.hpp"
#include "oracles.hpp"

using namespace graphgrav;

namespace {

WeightedGraph line3() { return build_graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}}); }

double dual_value(const TransportPlan& plan, const Distribution& mu, const Distribution& nu) {
  double s = 0.0;
  for (const auto& [v, m] : mu.mass) s += plan.potential[v] * m;
  for (const auto& [v, m] : nu.mass) s -= plan.potential[v] * m;
  return s;
}

}  // namespace

TEST(NeighborDistribution, Examples) {
  auto g = line3();
  GeodesicTable geo(g);
  auto d = neighbor_distribution(g, geo, 1, 0.5);
  EXPECT_DOUBLE_EQ(d.at(1), 0.5);
  EXPECT_DOUBLE_EQ(d.at(0), 0.25);
  EXPECT_DOUBLE_EQ(d.at(2), 0.25);

  auto leaf = neighbor_distribution(g, geo, 0, 0.37);
  EXPECT_DOUBLE_EQ(leaf.at(0), 0.63);
  EXPECT_DOUBLE_EQ(leaf.at(1), 0.37);
  EXPECT_EQ(leaf.mass.size(), 2u);

  auto h = build_graph({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 2}});
  GeodesicTable hg(h);
  auto e = neighbor_distribution(h, hg, 1, 0.3);
  EXPECT_NEAR(e.at(1), 0.7, 1e-15);
  EXPECT_NEAR(e.at(0), 0.24, 1e-15);
  EXPECT_NEAR(e.at(2), 0.06, 1e-15);
  EXPECT_NEAR(e.total(), 1.0, 1e-15);
}

TEST(NeighborDistribution, RejectsBadT) {
  auto g = line3();
  GeodesicTable geo(g);
  for (double t : {0.0, 1.0, -0.1, 1.5}) {
    try {
      neighbor_distribution(g, geo, 1, t);
      ADD_FAILURE() << "t=" << t;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::TOutOfRange);
    }
  }
}

TEST(Wasserstein, DeltaExamples) {
  auto g = gen_cycle(5);
  Setting s{{1.0, 2.0, 0.5, 3.0, 1.5}};
  g = g.with_setting(s);
  GeodesicTable geo(g);
  EXPECT_EQ(delta(3).mass.size(), 1u);
  EXPECT_DOUBLE_EQ(delta(3).at(3), 1.0);
  for (Vertex i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(wasserstein(g, geo, delta(i), delta(i)).cost, 0.0);
    for (Vertex j = 0; j < 5; ++j) {
      EXPECT_NEAR(wasserstein(g, geo, delta(i), delta(j)).cost, geo(i, j), 1e-14);
    }
  }
}

TEST(Wasserstein, LineNeighborDistributions) {
  auto g = line3();
  GeodesicTable geo(g);
  for (double t : {0.05, 0.2, 0.3, 0.45}) {
    auto mu = neighbor_distribution(g, geo, 0, t);
    auto nu = neighbor_distribution(g, geo, 1, t);
    EXPECT_NEAR(wasserstein(g, geo, mu, nu).cost, 1.0 - t, 1e-14) << t;
    EXPECT_NEAR(wasserstein_oracle(g, geo, mu, nu), 1.0 - t, 1e-14) << t;
  }
}

TEST(Wasserstein, IdenticalDistributionsCostNothing) {
  std::mt19937_64 rng(21);
  auto g = oracle::random_graph(6, 0.5, rng);
  GeodesicTable geo(g);
  auto mu = neighbor_distribution(g, geo, 2, 0.4);
  EXPECT_NEAR(wasserstein(g, geo, mu, mu).cost, 0.0, 1e-15);
  EXPECT_NEAR(wasserstein_oracle(g, geo, mu, mu), 0.0, 1e-15);
}

TEST(Wasserstein, TwoPointDistributions) {
  auto g = gen_path(4);
  GeodesicTable geo(g);
  auto mu = Distribution::from_pairs({{0, 0.25}, {1, 0.75}});
  auto nu = Distribution::from_pairs({{0, 0.25}, {4, 0.75}});
  EXPECT_NEAR(wasserstein(g, geo, mu, nu).cost, 0.75 * 3, 1e-14);
  EXPECT_NEAR(wasserstein_oracle(g, geo, mu, nu), 0.75 * 3, 1e-14);
}

TEST(Wasserstein, UnbalancedMassRejected) {
  auto g = line3();
  GeodesicTable geo(g);
  auto mu = Distribution::from_pairs({{0, 0.5}});
  try {
    wasserstein(g, geo, mu, delta(1));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnbalancedMass);
  }
  EXPECT_THROW(wasserstein_oracle(g, geo, mu, delta(1)), Error);
}

TEST(Wasserstein, AgreesWithOracleOnRandomGraphs) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ut(0.01, 0.99);
  for (int trial = 0; trial < 150; ++trial) {
    auto g = oracle::random_graph(3 + trial % 5, 0.45, rng);
    GeodesicTable geo(g);
    std::uniform_int_distribution<Vertex> pick(0, g.vertex_count() - 1);
    Vertex i = pick(rng), j = pick(rng);
    double t = ut(rng);
    auto mu = neighbor_distribution(g, geo, i, t);
    auto nu = neighbor_distribution(g, geo, j, t);
    auto plan = wasserstein(g, geo, mu, nu);
    EXPECT_NEAR(plan.cost, wasserstein_oracle(g, geo, mu, nu), 1e-8);
  }
}

TEST(Wasserstein, EqualsNeighborMoveRelaxation) {
  // moving mass only along edges at edge cost gives the same optimum
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ut(0.05, 0.95);
  for (int trial = 0; trial < 120; ++trial) {
    auto g = oracle::random_graph(2 + trial % 5, 0.5, rng);
    GeodesicTable geo(g);
    std::uniform_int_distribution<Vertex> pick(0, g.vertex_count() - 1);
    Vertex i = pick(rng), j = pick(rng);
    double t = ut(rng);
    auto mu = neighbor_distribution(g, geo, i, t);
    auto nu = neighbor_distribution(g, geo, j, t);
    EXPECT_NEAR(wasserstein(g, geo, mu, nu).cost, oracle::edge_flow_cost(g, mu, nu), 1e-9);
  }
}

TEST(Wasserstein, PlanMarginalsAndDualCertificate) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_graph(3 + trial % 6, 0.4, rng);
    GeodesicTable geo(g);
    std::uniform_int_distribution<Vertex> pick(0, g.vertex_count() - 1);
    Vertex i = pick(rng), j = pick(rng);
    double t = ut(rng);
    auto mu = neighbor_distribution(g, geo, i, t);
    auto nu = neighbor_distribution(g, geo, j, t);
    auto plan = wasserstein(g, geo, mu, nu);

    std::vector<double> out(g.vertex_count(), 0.0), in(g.vertex_count(), 0.0);
    double cost = 0.0;
    for (const auto& f : plan.flows) {
      EXPECT_GT(f.amount, 0.0);
      out[f.from] += f.amount;
      in[f.to] += f.amount;
      cost += f.amount * geo(f.from, f.to);
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      EXPECT_NEAR(out[v], mu.at(v), 1e-10);
      EXPECT_NEAR(in[v], nu.at(v), 1e-10);
    }
    EXPECT_NEAR(cost, plan.cost, 1e-12);

    ASSERT_EQ(plan.potential.size(), g.vertex_count());
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        EXPECT_LE(std::abs(plan.potential[u] - plan.potential[v]), geo(u, v) + 1e-9);
      }
    }
    EXPECT_NEAR(dual_value(plan, mu, nu), plan.cost, 1e-9);
  }
}

TEST(Wasserstein, Symmetric) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_graph(5, 0.5, rng);
    GeodesicTable geo(g);
    auto mu = neighbor_distribution(g, geo, 0, 0.3);
    auto nu = neighbor_distribution(g, geo, 4, 0.6);
    EXPECT_NEAR(wasserstein(g, geo, mu, nu).cost, wasserstein(g, geo, nu, mu).cost, 1e-12);
  }
}

TEST(Wasserstein, NeighborCostLowerBound) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ut(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_graph(3 + trial % 5, 0.5, rng);
    GeodesicTable geo(g);
    for (const auto& e : g.edges()) {
      double t = ut(rng);
      auto si = local_sums(g, geo, e.u), sj = local_sums(g, geo, e.v);
      double w = wasserstein(g, geo, neighbor_distribution(g, geo, e.u, t),
                             neighbor_distribution(g, geo, e.v, t))
                     .cost;
      EXPECT_GE(w, geo(e.u, e.v) - t * si.c / si.d - t * sj.c / sj.d - 1e-12);
    }
  }
}
