#pragma once

// Plan execution scoring and the metric-driven weight update loop.
//
// Update rule: w' = clamp(w + eta * (m - w), w_min, w_max). The observed
// metric m is a fixed point, and between clamps the gap to a constant metric
// shrinks by a factor (1 - eta) per iteration.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcbsg/allocator.hpp"
#include "mcbsg/error.hpp"
#include "mcbsg/graph.hpp"

namespace mcbsg {

struct MetricsReport {
  // Keyed "from->to"; order is preserved.
  std::vector<std::pair<std::string, double>> edge_metrics;
  std::map<std::string, double> action_outcomes;
};

struct FeedbackConfig {
  double learning_rate = 0.5;
  double w_min = 0.01;
  double w_max = 10.0;
  std::size_t iterations = 0;
  double success_threshold = 0.5;

  void validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "learning rate must lie in (0, 1]");
    if (!(w_min > 0.0 && w_min < w_max && std::isfinite(w_max)))
      throw Error(ErrorKind::InvalidConfig, "need 0 < w_min < w_max");
    if (!(success_threshold >= 0.0 && success_threshold <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "success threshold must lie in [0, 1]");
  }
};

struct ExecutionReport {
  double success_rate = 0.0;
  std::vector<std::pair<std::string, double>> per_action;
};

/// Fraction of actions whose outcome reaches the threshold.
inline ExecutionReport execute_plan(const std::vector<std::string>& actions,
                                    const MetricsReport& metrics,
                                    double success_threshold = 0.5) {
  if (!(success_threshold >= 0.0 && success_threshold <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "success threshold must lie in [0, 1]");
  if (actions.empty()) throw Error(ErrorKind::EmptyPlan, "plan has no actions");

  ExecutionReport report;
  std::size_t successes = 0;
  for (const auto& action : actions) {
    auto it = metrics.action_outcomes.find(action);
    if (it == metrics.action_outcomes.end())
      throw Error(ErrorKind::MissingOutcome, "no outcome for action '" + action + "'",
                  {action});
    if (!(it->second >= 0.0 && it->second <= 1.0))
      throw Error(ErrorKind::InvalidMetric,
                  "outcome for '" + action + "' outside [0, 1]", {action});
    report.per_action.emplace_back(action, it->second);
    if (it->second >= success_threshold) ++successes;
  }
  report.success_rate =
      static_cast<double>(successes) / static_cast<double>(actions.size());
  return report;
}

/// Returns a new graph with metric-tracked weights; the input is untouched.
inline SkillsGraph update_weights(const SkillsGraph& graph, const MetricsReport& metrics,
                                  const FeedbackConfig& config) {
  config.validate();
  std::vector<DependencyEdge> edges = graph.edges();
  for (const auto& [key, m] : metrics.edge_metrics) {
    const auto arrow = key.find("->");
    std::optional<std::size_t> e;
    if (arrow != std::string::npos)
      e = graph.edge_index(key.substr(0, arrow), key.substr(arrow + 2));
    if (!e) throw Error(ErrorKind::UnknownEdge, "no edge '" + key + "'", {key});
    if (!(m >= 0.0 && m <= config.w_max))
      throw Error(ErrorKind::InvalidMetric, "metric for '" + key + "' outside [0, w_max]",
                  {key});
    double& w = edges[*e].weight;
    w = std::clamp(w + config.learning_rate * (m - w), config.w_min, config.w_max);
  }
  return with_edges(graph, std::move(edges));
}

struct CycleSnapshot {
  std::size_t iteration = 0;
  SkillsGraph graph;
  NodeScores centrality;
  AllocationPlan allocation;
  std::optional<double> success_rate;
};

using CycleHistory = std::vector<CycleSnapshot>;

/// Iteration k (1-based) consumes metrics_stream[min(k-1, size-1)], so a
/// single report acts as a constant stream. The initial state is snapshot 0.
inline CycleHistory run_feedback_cycle(const SkillsGraph& graph,
                                       std::span<const MetricsReport> metrics_stream,
                                       const FeedbackConfig& config, double budget) {
  config.validate();
  if (config.iterations > 0 && metrics_stream.empty())
    throw Error(ErrorKind::InvalidConfig, "feedback iterations need at least one metrics report");

  CycleHistory history;
  history.reserve(config.iterations + 1);
  history.push_back({0, graph, weighted_centrality(graph),
                     allocate_fractional(graph, budget), std::nullopt});

  for (std::size_t k = 1; k <= config.iterations; ++k) {
    const MetricsReport& report =
        metrics_stream[std::min(k - 1, metrics_stream.size() - 1)];
    SkillsGraph next = update_weights(history.back().graph, report, config);

    std::optional<double> success;
    if (!report.action_outcomes.empty()) {
      std::vector<std::string> actions;
      for (const auto& [id, outcome] : report.action_outcomes) actions.push_back(id);
      success = execute_plan(actions, report, config.success_threshold).success_rate;
    }
    NodeScores centrality = weighted_centrality(next);
    AllocationPlan plan = allocate_fractional(next, budget);
    history.push_back({k, std::move(next), std::move(centrality), std::move(plan), success});
  }
  return history;
}

}  // namespace mcbsg
