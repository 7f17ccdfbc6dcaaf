#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "mcbsg/allocator.hpp"

using namespace mcbsg;

namespace {

SkillsGraph nodes_only(const std::vector<SkillNode>& nodes) { return build_graph(nodes, {}); }

}  // namespace

TEST(Knapsack, HandInstance) {
  // values 6,10,12 costs 1,2,3 budget 5: best is {b,c} = 22
  const auto g = nodes_only({{"a", "", 6, 1, {}}, {"b", "", 10, 2, {}}, {"c", "", 12, 3, {}}});
  const auto s = select_knapsack(g, 5);
  EXPECT_EQ(s.chosen, (std::vector<std::string>{"b", "c"}));
  EXPECT_DOUBLE_EQ(s.objective, 22);
  EXPECT_DOUBLE_EQ(s.total_cost, 5);
}

TEST(Knapsack, TiesPreferFewerNodes) {
  const auto g = nodes_only({{"a", "", 1, 1, {}}, {"b", "", 1, 1, {}}, {"c", "", 2, 2, {}}});
  EXPECT_EQ(select_knapsack(g, 2).chosen, (std::vector<std::string>{"c"}));
}

TEST(Knapsack, MatchesBruteForce) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<SkillNode> nodes;
    std::vector<oracle::KnapsackItem> items;
    for (std::size_t i = 0; i < n; ++i) {
      const double value = static_cast<double>(rng.between(0, 20));
      const double cost = static_cast<double>(rng.between(0, 2000)) / 100.0;
      nodes.push_back({"x" + std::to_string(i), "", value, cost, {}});
      items.push_back({value, cost});
    }
    const double budget = static_cast<double>(rng.between(0, 6000)) / 100.0;
    const auto s = select_knapsack(nodes_only(nodes), budget);
    EXPECT_EQ(s.objective, oracle::knapsack_brute_force(items, budget)) << "trial " << trial;
    EXPECT_LE(s.total_cost, budget + 1e-9);
  }
}

TEST(Knapsack, RejectsBadBudgetAndPrecision) {
  const auto g = nodes_only({{"a", "", 1, 1.005, {}}});
  EXPECT_THROW(select_knapsack(g, -1), Error);
  try {
    select_knapsack(g, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ExcessCostPrecision);
  }
  const auto big = nodes_only({{"a", "", 1, 1000, {}}});
  try {
    select_knapsack(big, 1e9, {1000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CostResolutionExceeded);
  }
}

TEST(Fractional, GreedyHandInstance) {
  const auto g = nodes_only({{"a", "", 2, 1, 3.0}, {"b", "", 5, 1, 1.0}, {"c", "", 1, 1, {}}});
  const auto p = allocate_fractional(g, 6);
  EXPECT_DOUBLE_EQ(p.allocation[0].second, 3);
  EXPECT_DOUBLE_EQ(p.allocation[1].second, 1);
  EXPECT_DOUBLE_EQ(p.allocation[2].second, 2);
  EXPECT_DOUBLE_EQ(p.objective, 2 * 3 + 5 + 2);
  EXPECT_DOUBLE_EQ(objective_value(p, g), p.objective);
}

TEST(Fractional, DominatesGridPlans) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    std::vector<SkillNode> nodes;
    std::vector<oracle::FractionalItem> items;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = rng.uniform() * 3;
      const int cap = static_cast<int>(rng.between(0, 300));
      nodes.push_back({"x" + std::to_string(i), "", f, 1, cap / 100.0});
      items.push_back({f, cap});
    }
    const int budget = static_cast<int>(rng.between(0, 800));
    const auto plan = allocate_fractional(nodes_only(nodes), budget / 100.0);
    EXPECT_GE(plan.objective, oracle::fractional_grid_best(items, budget) - 1e-9);
    double spent = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(plan.allocation[i].second, 0);
      EXPECT_LE(plan.allocation[i].second, *nodes[i].capacity + 1e-12);
      spent += plan.allocation[i].second;
    }
    EXPECT_LE(spent, budget / 100.0 + 1e-9);
  }
}

TEST(Fractional, MonotoneInBudget) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SkillNode> nodes;
    for (int i = 0; i < 6; ++i)
      nodes.push_back({"x" + std::to_string(i), "", rng.uniform(), 1,
                       rng.bernoulli(0.2) ? std::nullopt : std::optional<double>(rng.uniform() * 5)});
    const auto g = nodes_only(nodes);
    const double b1 = rng.uniform() * 10, b2 = b1 + rng.uniform() * 10;
    EXPECT_LE(allocate_fractional(g, b1).objective, allocate_fractional(g, b2).objective + 1e-12);
  }
}

TEST(Allocate, DispatchesOnMode) {
  const auto g = oracle::case_study();
  EXPECT_TRUE(allocate(g, {3, AllocationMode::Select}).selection.has_value());
  EXPECT_TRUE(allocate(g, {3, AllocationMode::Fractional}).plan.has_value());
  EXPECT_EQ(parse_mode("select"), AllocationMode::Select);
  EXPECT_THROW(parse_mode("greedy"), Error);
}
