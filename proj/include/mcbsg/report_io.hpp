#pragma once

// JSON shapes for plans, paths, metrics files, feedback history and Markov
// results.

#include <string>
#include <vector>

#include "json.hpp"
#include "mcbsg/allocator.hpp"
#include "mcbsg/feedback.hpp"
#include "mcbsg/graph_io.hpp"
#include "mcbsg/markov.hpp"
#include "mcbsg/pathfinder.hpp"

namespace mcbsg {

inline Json allocation_to_json(const AllocationResult& result) {
  Json j;
  j["mode"] = std::string(mode_name(result.request.mode));
  j["budget"] = result.request.budget;
  if (result.plan) {
    Json alloc = Json::object();
    for (const auto& [id, r] : result.plan->allocation) alloc[id] = r;
    j["allocation"] = std::move(alloc);
  }
  if (result.selection) {
    j["chosen"] = result.selection->chosen;
    j["total_cost"] = result.selection->total_cost;
  }
  j["objective"] = result.objective();
  return j;
}

inline Json path_to_json(const Path& path) {
  return {{"nodes", path.nodes}, {"cost", path.cost}, {"objective", path.objective}};
}

/// {"iterations":[{"edge_metrics":{"a->b":m},"action_outcomes":{"x":o}}]}
inline std::vector<MetricsReport> metrics_from_json(const Json& doc) {
  io::require_object(doc, "metrics");
  io::reject_unknown_keys(doc, "metrics", {"iterations"});
  std::vector<MetricsReport> out;
  const Json& its = io::array(io::required(doc, "iterations", "metrics"), "iterations");
  for (std::size_t i = 0; i < its.size(); ++i) {
    const std::string where = "iterations[" + std::to_string(i) + "]";
    io::require_object(its[i], where);
    io::reject_unknown_keys(its[i], where, {"edge_metrics", "action_outcomes"});
    MetricsReport r;
    if (its[i].contains("edge_metrics")) {
      io::require_object(its[i]["edge_metrics"], where + ".edge_metrics");
      for (const auto& item : its[i]["edge_metrics"].items())
        r.edge_metrics.emplace_back(item.key(),
                                    io::number(item.value(), where + ".edge_metrics." + item.key()));
    }
    if (its[i].contains("action_outcomes")) {
      io::require_object(its[i]["action_outcomes"], where + ".action_outcomes");
      for (const auto& item : its[i]["action_outcomes"].items())
        r.action_outcomes[item.key()] =
            io::number(item.value(), where + ".action_outcomes." + item.key());
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<MetricsReport> load_metrics(const std::string& path) {
  return metrics_from_json(io::parse_json(io::read_file(path), path));
}

inline Json snapshot_to_json(const CycleSnapshot& s) {
  Json weights = Json::object();
  for (const auto& e : s.graph.edges()) weights[e.key()] = e.weight;
  Json alloc = Json::object();
  for (const auto& [id, r] : s.allocation.allocation) alloc[id] = r;
  Json j;
  j["iteration"] = s.iteration;
  j["weights"] = std::move(weights);
  j["centrality"] = scores_to_json(s.centrality);
  j["allocation"] = std::move(alloc);
  j["objective"] = s.allocation.objective;
  j["success_rate"] = s.success_rate ? Json(*s.success_rate) : Json(nullptr);
  return j;
}

/// One compact JSON object per line.
inline std::string history_to_jsonl(const CycleHistory& history) {
  std::string out;
  for (const auto& s : history) out += snapshot_to_json(s).dump() + "\n";
  return out;
}

inline Json markov_to_json(const TransitionMatrix& p, const StateDistribution& stationary) {
  Json pi = Json::object();
  for (std::size_t i = 0; i < stationary.states.size(); ++i)
    pi[stationary.states[i]] = stationary.probabilities[i];
  return {{"states", p.states()},
          {"matrix", p.rows()},
          {"stationary", std::move(pi)},
          {"residual", stationary_residual(p, stationary)}};
}

inline Json error_to_json(const Error& e, const std::string& stage = {}) {
  Json j;
  j["kind"] = std::string(kind_name(e.kind()));
  j["message"] = e.detail();
  if (!e.context().empty()) j["context"] = e.context();
  if (!stage.empty()) j["stage"] = stage;
  return Json{{"error", std::move(j)}};
}

}  // namespace mcbsg
