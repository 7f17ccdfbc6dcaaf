#pragma once

// Minimum-weight path subject to an additive objective budget
// (sum of edge objective_cost <= tau). Bi-criteria label setting with Pareto
// pruning; plain Dijkstra when tau is unbounded.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "mcbsg/error.hpp"
#include "mcbsg/graph.hpp"

namespace mcbsg {

struct PathQuery {
  std::string source;
  std::string target;
  std::optional<double> threshold;  // nullopt = unbounded
};

struct Path {
  std::vector<std::string> nodes;
  double cost = 0.0;       // sum of edge weights
  double objective = 0.0;  // sum of edge objective costs

  bool operator==(const Path&) const = default;
};

namespace detail {

struct Label {
  double cost;
  double objective;
  std::vector<std::size_t> seq;  // node indices, source first
};

inline bool seq_less(const SkillsGraph& g, const std::vector<std::size_t>& a,
                     const std::vector<std::size_t>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) continue;
    return g.node(a[i]).id < g.node(b[i]).id;
  }
  return a.size() < b.size();
}

inline bool seq_less_equal(const SkillsGraph& g, const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b) {
  return !seq_less(g, b, a);
}

inline Path to_path(const SkillsGraph& g, const Label& label) {
  Path p;
  p.cost = label.cost;
  p.objective = label.objective;
  for (std::size_t i : label.seq) p.nodes.push_back(g.node(i).id);
  return p;
}

inline void check_threshold(const std::optional<double>& tau) {
  if (tau && !(std::isfinite(*tau) && *tau >= 0.0))
    throw Error(ErrorKind::InvalidRequest, "threshold must be >= 0");
}

}  // namespace detail

/// Cheapest feasible path; equal-cost optima resolve to the lexicographically
/// smallest node sequence. Throws NoFeasiblePath or UnknownNode.
inline Path find_optimal_path(const SkillsGraph& graph, const PathQuery& query) {
  detail::check_threshold(query.threshold);
  const std::size_t source = graph.require_index(query.source);
  const std::size_t target = graph.require_index(query.target);
  const double tau = query.threshold.value_or(std::numeric_limits<double>::infinity());
  const bool constrained = query.threshold.has_value();

  using detail::Label;
  std::vector<Label> labels;
  auto worse = [&](std::size_t a, std::size_t b) {
    const Label& la = labels[a];
    const Label& lb = labels[b];
    if (la.cost != lb.cost) return la.cost > lb.cost;
    return detail::seq_less(graph, lb.seq, la.seq);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> queue(worse);

  // Labels kept per node for dominance checks. Unconstrained search keeps at
  // most one settled label per node.
  std::vector<std::vector<std::size_t>> at(graph.node_count());
  std::vector<bool> settled(graph.node_count(), false);

  labels.push_back({0.0, 0.0, {source}});
  at[source].push_back(0);
  queue.push(0);

  auto dominated = [&](const Label& cand, std::size_t node) {
    for (std::size_t id : at[node]) {
      const Label& l = labels[id];
      if (l.cost <= cand.cost &&
          (!constrained || l.objective <= cand.objective) &&
          detail::seq_less_equal(graph, l.seq, cand.seq))
        return true;
    }
    return false;
  };

  while (!queue.empty()) {
    const std::size_t current = queue.top();
    queue.pop();
    const std::size_t v = labels[current].seq.back();
    if (!constrained) {
      if (settled[v]) continue;
      settled[v] = true;
    }
    if (v == target) return detail::to_path(graph, labels[current]);

    for (std::size_t e : graph.out_edges(v)) {
      const std::size_t u = graph.target_of(e);
      const Label& base = labels[current];
      if (std::find(base.seq.begin(), base.seq.end(), u) != base.seq.end()) continue;
      if (!constrained && settled[u]) continue;
      const auto& edge = graph.edges()[e];
      Label next{base.cost + edge.weight, base.objective + edge.objective_cost, base.seq};
      next.seq.push_back(u);
      if (next.objective > tau) continue;
      if (dominated(next, u)) continue;
      labels.push_back(std::move(next));
      at[u].push_back(labels.size() - 1);
      queue.push(labels.size() - 1);
    }
  }
  throw Error(ErrorKind::NoFeasiblePath,
              "no path " + query.source + " -> " + query.target +
                  (constrained ? " within the objective threshold" : ""),
              {query.source, query.target});
}

/// All simple source -> target paths in depth-first order (out-edges in
/// insertion order). Used as the exhaustive reference for the search above.
inline std::vector<Path> enumerate_paths(const SkillsGraph& graph,
                                         const std::string& source,
                                         const std::string& target) {
  const std::size_t s = graph.require_index(source);
  const std::size_t t = graph.require_index(target);
  std::vector<Path> out;
  std::vector<std::size_t> stack{s};
  std::vector<bool> on_path(graph.node_count(), false);
  on_path[s] = true;

  auto dfs = [&](auto&& self, std::size_t v, double cost, double objective) -> void {
    if (v == t) {
      Path p{{}, cost, objective};
      for (std::size_t i : stack) p.nodes.push_back(graph.node(i).id);
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t e : graph.out_edges(v)) {
      const std::size_t u = graph.target_of(e);
      if (on_path[u]) continue;
      on_path[u] = true;
      stack.push_back(u);
      const auto& edge = graph.edges()[e];
      self(self, u, cost + edge.weight, objective + edge.objective_cost);
      stack.pop_back();
      on_path[u] = false;
    }
  };
  dfs(dfs, s, 0.0, 0.0);
  return out;
}

}  // namespace mcbsg
