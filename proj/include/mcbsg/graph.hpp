#pragma once

// Capacity-building skills graph: nodes carry effectiveness/cost/capacity,
// directed edges carry a dependency weight and a per-edge objective cost.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcbsg/error.hpp"

namespace mcbsg {

struct SkillNode {
  std::string id;
  std::string label;
  double effectiveness = 0.0;
  double cost = 0.0;
  std::optional<double> capacity;  // nullopt = unbounded

  bool operator==(const SkillNode&) const = default;
};

struct DependencyEdge {
  std::string from;
  std::string to;
  double weight = 1.0;
  double objective_cost = 0.0;

  std::string key() const { return from + "->" + to; }
  bool operator==(const DependencyEdge&) const = default;
};

struct GraphOptions {
  // Cycles are only meaningful for Markov state graphs.
  bool allow_cycles = false;

  bool operator==(const GraphOptions&) const = default;
};

/// Ordered id -> score table. Entries follow node (or feature) order.
class Scores {
 public:
  Scores() = default;
  explicit Scores(std::vector<std::pair<std::string, double>> entries)
      : entries_(std::move(entries)) {}

  const std::vector<std::pair<std::string, double>>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<double> find(const std::string& id) const {
    for (const auto& [key, value] : entries_)
      if (key == id) return value;
    return std::nullopt;
  }
  double at(const std::string& id) const {
    if (auto v = find(id)) return *v;
    throw Error(ErrorKind::UnknownNode, "no score for '" + id + "'", {id});
  }
  double sum() const {
    double total = 0.0;
    for (const auto& e : entries_) total += e.second;
    return total;
  }

  bool operator==(const Scores&) const = default;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

using NodeScores = Scores;
using TopologicalOrder = std::vector<std::string>;

class SkillsGraph;
SkillsGraph build_graph(std::vector<SkillNode> nodes,
                        std::vector<DependencyEdge> edges,
                        GraphOptions options = {});

/// Immutable after construction; build a new graph to change it.
class SkillsGraph {
 public:
  SkillsGraph() = default;

  const std::vector<SkillNode>& nodes() const noexcept { return nodes_; }
  const std::vector<DependencyEdge>& edges() const noexcept { return edges_; }
  const GraphOptions& options() const noexcept { return options_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_index(const std::string& id) const {
    if (auto i = index_of(id)) return *i;
    throw Error(ErrorKind::UnknownNode, "unknown node '" + id + "'", {id});
  }
  const SkillNode& node(std::size_t i) const { return nodes_.at(i); }

  std::optional<std::size_t> edge_index(const std::string& from,
                                        const std::string& to) const {
    auto it = edge_index_.find(from + "->" + to);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  // Edge indices leaving / entering node i, in edge insertion order.
  const std::vector<std::size_t>& out_edges(std::size_t i) const {
    return out_.at(i);
  }
  const std::vector<std::size_t>& in_edges(std::size_t i) const {
    return in_.at(i);
  }
  std::size_t source_of(std::size_t e) const { return edge_from_.at(e); }
  std::size_t target_of(std::size_t e) const { return edge_to_.at(e); }

  bool operator==(const SkillsGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ &&
           options_ == other.options_;
  }

 private:
  friend SkillsGraph build_graph(std::vector<SkillNode>,
                                 std::vector<DependencyEdge>, GraphOptions);

  std::vector<SkillNode> nodes_;
  std::vector<DependencyEdge> edges_;
  GraphOptions options_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> edge_from_;
  std::vector<std::size_t> edge_to_;
};

namespace detail {

inline bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

// Kahn elimination, always releasing the lowest-insertion-index ready node.
// Returns the order and, when a cycle blocks elimination, the residual flags.
inline std::vector<std::size_t> kahn_order(const SkillsGraph& g,
                                           std::vector<bool>& residual) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) ++indegree[g.target_of(e)];

  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);

  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t e : g.out_edges(v))
      if (--indegree[g.target_of(e)] == 0) ready.push(g.target_of(e));
  }
  residual.assign(n, true);
  for (std::size_t v : order) residual[v] = false;
  return order;
}

// Every residual node keeps a residual predecessor, so walking predecessors
// must revisit a node; the revisited stretch reversed is a forward cycle.
inline std::vector<std::string> cycle_witness(const SkillsGraph& g,
                                              const std::vector<bool>& residual) {
  std::size_t start = 0;
  while (!residual[start]) ++start;

  std::vector<std::size_t> walk;
  std::vector<std::ptrdiff_t> seen_at(g.node_count(), -1);
  std::size_t v = start;
  while (seen_at[v] < 0) {
    seen_at[v] = static_cast<std::ptrdiff_t>(walk.size());
    walk.push_back(v);
    for (std::size_t e : g.in_edges(v)) {
      if (residual[g.source_of(e)]) {
        v = g.source_of(e);
        break;
      }
    }
  }
  std::vector<std::size_t> cycle(walk.begin() + seen_at[v], walk.end());
  std::reverse(cycle.begin(), cycle.end());
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());

  std::vector<std::string> ids;
  for (std::size_t i : cycle) ids.push_back(g.node(i).id);
  return ids;
}

}  // namespace detail

/// Topological order with ties broken by node insertion order.
/// Throws CycleDetected with one witness cycle as context.
inline TopologicalOrder validate_dag(const SkillsGraph& graph) {
  std::vector<bool> residual;
  auto order = detail::kahn_order(graph, residual);
  if (order.size() != graph.node_count()) {
    auto cycle = detail::cycle_witness(graph, residual);
    std::string text;
    for (const auto& id : cycle) text += (text.empty() ? "" : " -> ") + id;
    throw Error(ErrorKind::CycleDetected, "cycle " + text, std::move(cycle));
  }
  TopologicalOrder ids;
  ids.reserve(order.size());
  for (std::size_t i : order) ids.push_back(graph.node(i).id);
  return ids;
}

/// Validates every node/edge invariant and, unless cycles are allowed,
/// acyclicity. Insertion order of nodes and edges is preserved.
inline SkillsGraph build_graph(std::vector<SkillNode> nodes,
                               std::vector<DependencyEdge> edges,
                               GraphOptions options) {
  SkillsGraph g;
  g.options_ = options;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SkillNode& n = nodes[i];
    if (!detail::nonneg_finite(n.effectiveness) ||
        !detail::nonneg_finite(n.cost) ||
        (n.capacity && !detail::nonneg_finite(*n.capacity)))
      throw Error(ErrorKind::InvalidNode,
                  "node '" + n.id +
                      "' needs effectiveness, cost and capacity >= 0",
                  {n.id});
    if (!g.index_.emplace(n.id, i).second)
      throw Error(ErrorKind::DuplicateNodeId, "duplicate node id '" + n.id + "'",
                  {n.id});
  }
  g.out_.resize(nodes.size());
  g.in_.resize(nodes.size());

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const DependencyEdge& edge = edges[e];
    auto from = g.index_.find(edge.from);
    auto to = g.index_.find(edge.to);
    if (from == g.index_.end() || to == g.index_.end())
      throw Error(ErrorKind::UnknownEndpoint,
                  "edge " + edge.key() + " names a missing node",
                  {edge.from, edge.to});
    if (edge.from == edge.to)
      throw Error(ErrorKind::SelfLoop, "self-loop on '" + edge.from + "'",
                  {edge.from, edge.to});
    if (!(std::isfinite(edge.weight) && edge.weight > 0.0))
      throw Error(ErrorKind::NonPositiveWeight,
                  "edge " + edge.key() + " weight must be > 0",
                  {edge.from, edge.to});
    if (!detail::nonneg_finite(edge.objective_cost))
      throw Error(ErrorKind::NonPositiveWeight,
                  "edge " + edge.key() + " objective_cost must be >= 0",
                  {edge.from, edge.to});
    if (!g.edge_index_.emplace(edge.key(), e).second)
      throw Error(ErrorKind::DuplicateEdge, "duplicate edge " + edge.key(),
                  {edge.from, edge.to});
    g.edge_from_.push_back(from->second);
    g.edge_to_.push_back(to->second);
    g.out_[from->second].push_back(e);
    g.in_[to->second].push_back(e);
  }
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);

  if (!options.allow_cycles) validate_dag(g);
  return g;
}

/// Share of total edge weight carried by each node's outgoing edges.
inline NodeScores weighted_centrality(const SkillsGraph& graph) {
  if (graph.edge_count() == 0)
    throw Error(ErrorKind::EmptyGraph, "centrality needs at least one edge");
  double total = 0.0;
  for (const auto& e : graph.edges()) total += e.weight;

  std::vector<std::pair<std::string, double>> scores;
  scores.reserve(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    double out = 0.0;
    for (std::size_t e : graph.out_edges(i)) out += graph.edges()[e].weight;
    scores.emplace_back(graph.node(i).id, out / total);
  }
  return NodeScores(std::move(scores));
}

/// Same nodes and options, new edge list (used by weight updates).
inline SkillsGraph with_edges(const SkillsGraph& graph,
                              std::vector<DependencyEdge> edges) {
  return build_graph(graph.nodes(), std::move(edges), graph.options());
}

}  // namespace mcbsg
