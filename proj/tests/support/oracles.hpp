#pragma once

// Fixtures and brute-force reference implementations shared by the unit
// tests and the acceptance runner. Nothing here calls the code under test
// except to build inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcbsg/graph.hpp"
#include "mcbsg/pathfinder.hpp"
#include "mcbsg/rng.hpp"

namespace oracle {

using mcbsg::DependencyEdge;
using mcbsg::Rng;
using mcbsg::SkillNode;
using mcbsg::SkillsGraph;

inline const std::vector<std::pair<std::string, std::string>>& case_study_edges() {
  static const std::vector<std::pair<std::string, std::string>> e{
      {"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}, {"v2", "v4"}, {"v3", "v4"},
      {"v1", "v5"}, {"v2", "v5"}, {"v3", "v5"}, {"v4", "v5"}};
  return e;
}

// Five-node case study; weights and objective costs default to 1 and 0.
inline SkillsGraph case_study(const std::vector<double>& weights = {},
                              const std::vector<double>& objective = {}) {
  std::vector<SkillNode> nodes;
  for (int i = 1; i <= 5; ++i)
    nodes.push_back({"v" + std::to_string(i), "", 1.0, 1.0, std::nullopt});
  std::vector<DependencyEdge> edges;
  const auto& pairs = case_study_edges();
  for (std::size_t k = 0; k < pairs.size(); ++k)
    edges.push_back({pairs[k].first, pairs[k].second, weights.empty() ? 1.0 : weights[k],
                     objective.empty() ? 0.0 : objective[k]});
  return mcbsg::build_graph(std::move(nodes), std::move(edges));
}

// Random DAG over n nodes named n0..; edges only go from lower to higher
// index before a shuffle of the insertion order. Weights and objective costs
// are small integers so path sums are exact.
inline SkillsGraph random_dag(Rng& rng, std::size_t n, double density) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);  // label permutation, so ids do not follow topological order
  std::vector<SkillNode> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back({"n" + std::to_string(perm[i]), "", 1.0, 1.0, std::nullopt});
  std::vector<DependencyEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(density))
        edges.push_back({nodes[i].id, nodes[j].id, static_cast<double>(rng.between(1, 9)),
                         static_cast<double>(rng.between(0, 5))});
  rng.shuffle(edges);
  rng.shuffle(nodes);
  return mcbsg::build_graph(std::move(nodes), std::move(edges));
}

// Quadratic Kahn elimination: among ready nodes, the earliest inserted goes
// first.
inline std::vector<std::string> topo_order_reference(const SkillsGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<int> indeg(n, 0);
  for (const auto& e : g.edges()) ++indeg[*g.index_of(e.to)];
  std::vector<bool> done(n, false);
  std::vector<std::string> out;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n && pick == n; ++i)
      if (!done[i] && indeg[i] == 0) pick = i;
    if (pick == n) return {};
    done[pick] = true;
    out.push_back(g.node(pick).id);
    for (const auto& e : g.edges())
      if (e.from == g.node(pick).id) --indeg[*g.index_of(e.to)];
  }
  return out;
}

struct KnapsackItem {
  double value;
  double cost;
};

// Best total value over all 2^n subsets.
inline double knapsack_brute_force(const std::vector<KnapsackItem>& items, double budget) {
  const std::size_t n = items.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double v = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        v += items[i].value;
        c += items[i].cost;
      }
    if (c <= budget + 1e-9) best = std::max(best, v);
  }
  return best;
}

struct FractionalItem {
  double value;  // per unit of budget
  int cap_hundredths;
};

// Best objective over every allocation on the 0.01 grid with per-node caps
// and total <= budget, by exact DP over hundredths.
inline double fractional_grid_best(const std::vector<FractionalItem>& items, int budget_hundredths) {
  const double neg = -std::numeric_limits<double>::infinity();
  std::vector<double> dp(budget_hundredths + 1, 0.0);
  for (const auto& it : items) {
    std::vector<double> next(budget_hundredths + 1, neg);
    for (int b = 0; b <= budget_hundredths; ++b)
      for (int k = 0; k <= std::min(b, it.cap_hundredths); ++k)
        next[b] = std::max(next[b], dp[b - k] + it.value * k / 100.0);
    dp = std::move(next);
  }
  return dp[budget_hundredths];
}

// Every simple path by plain recursion, then the cheapest with objective <= tau,
// ties to the lexicographically smallest id sequence.
inline std::optional<mcbsg::Path> path_brute_force(const SkillsGraph& g, const std::string& from,
                                                   const std::string& to,
                                                   std::optional<double> tau) {
  std::vector<mcbsg::Path> all;
  std::vector<std::string> stack{from};
  std::function<void(const std::string&, double, double)> walk = [&](const std::string& at,
                                                                     double cost, double obj) {
    if (at == to) {
      all.push_back({stack, cost, obj});
      return;
    }
    for (const auto& e : g.edges()) {
      if (e.from != at) continue;
      if (std::find(stack.begin(), stack.end(), e.to) != stack.end()) continue;
      stack.push_back(e.to);
      walk(e.to, cost + e.weight, obj + e.objective_cost);
      stack.pop_back();
    }
  };
  walk(from, 0.0, 0.0);
  std::optional<mcbsg::Path> best;
  for (const auto& p : all) {
    if (tau && p.objective > *tau) continue;
    if (!best || p.cost < best->cost || (p.cost == best->cost && p.nodes < best->nodes)) best = p;
  }
  return best;
}

inline double entropy_direct(const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double h = 0.0;
  for (auto c : counts)
    if (c > 0) h -= (c / total) * std::log2(c / total);
  return h;
}

inline double gini_direct(const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double s = 1.0;
  for (auto c : counts) s -= (c / total) * (c / total);
  return s;
}

}  // namespace oracle
