#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "mcbsg/pathfinder.hpp"

using namespace mcbsg;

TEST(Path, UnboundedTakesDirectEdge) {
  const auto p = find_optimal_path(oracle::case_study(), {"v1", "v5", std::nullopt});
  EXPECT_EQ(p.nodes, (std::vector<std::string>{"v1", "v5"}));
  EXPECT_EQ(p.cost, 1);
}

TEST(Path, ThresholdForcesDetour) {
  // objective 5 on v1->v5, 1 elsewhere; tau 2 leaves (v1,v2,v5) and (v1,v3,v5)
  std::vector<double> obj(9, 1.0);
  obj[5] = 5.0;
  const auto p = find_optimal_path(oracle::case_study({}, obj), {"v1", "v5", 2.0});
  EXPECT_EQ(p.nodes, (std::vector<std::string>{"v1", "v2", "v5"}));
  EXPECT_EQ(p.cost, 2);
  EXPECT_EQ(p.objective, 2);
}

TEST(Path, EnumerationCountsAndBackwardQuery) {
  EXPECT_EQ(enumerate_paths(oracle::case_study(), "v1", "v5").size(), 7u);
  EXPECT_TRUE(enumerate_paths(oracle::case_study(), "v5", "v1").empty());
  try {
    find_optimal_path(oracle::case_study(), {"v5", "v1", std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoFeasiblePath);
  }
}

TEST(Path, Errors) {
  const auto g = oracle::case_study();
  EXPECT_THROW(find_optimal_path(g, {"v1", "v9", std::nullopt}), Error);
  EXPECT_THROW(find_optimal_path(g, {"v1", "v5", -1.0}), Error);
}

TEST(Path, MatchesBruteForceOnRandomDags) {
  Rng rng(77);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = oracle::random_dag(rng, 2 + rng.below(7), 0.5);
    const std::string s = g.node(rng.below(g.node_count())).id;
    const std::string t = g.node(rng.below(g.node_count())).id;
    std::optional<double> tau;
    if (rng.bernoulli(0.7)) tau = static_cast<double>(rng.between(0, 12));
    const auto expect = oracle::path_brute_force(g, s, t, tau);
    if (!expect) {
      EXPECT_THROW(find_optimal_path(g, {s, t, tau}), Error);
      continue;
    }
    ++feasible;
    EXPECT_EQ(find_optimal_path(g, {s, t, tau}), *expect) << "trial " << trial;
  }
  EXPECT_GT(feasible, 100);
}

TEST(Path, UnboundedAgreesWithPlainShortestPath) {
  Rng rng(78);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_dag(rng, 8, 0.4);
    const auto order = validate_dag(g);
    // single-criterion DP in topological order
    std::map<std::string, double> dist;
    dist[order.front()] = 0;
    for (const auto& v : order) {
      if (!dist.count(v)) continue;
      for (const auto& e : g.edges())
        if (e.from == v && (!dist.count(e.to) || dist[v] + e.weight < dist[e.to]))
          dist[e.to] = dist[v] + e.weight;
    }
    for (const auto& [target, d] : dist) {
      if (target == order.front()) continue;
      EXPECT_EQ(find_optimal_path(g, {order.front(), target, std::nullopt}).cost, d);
    }
  }
}
