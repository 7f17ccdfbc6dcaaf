#pragma once

// Scenario files drive the full pipeline in a fixed stage order:
// validate -> centrality -> allocation -> paths -> feedback -> markov.
//
// {
//   "graph": "graph.json",
//   "allocation": {"budget": 12, "mode": "fractional"},
//   "paths": [{"from": "v1", "to": "v5", "tau": 2}],
//   "feedback": {"metrics": "metrics.json", "eta": 0.5, "iterations": 5},
//   "markov": {"counts": "counts.csv"},
//   "seed": 0,
//   "output_dir": "out"
// }
// Relative paths resolve against the scenario file's directory.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "mcbsg/allocator.hpp"
#include "mcbsg/feedback.hpp"
#include "mcbsg/graph.hpp"
#include "mcbsg/graph_io.hpp"
#include "mcbsg/markov.hpp"
#include "mcbsg/pathfinder.hpp"
#include "mcbsg/report_io.hpp"

namespace mcbsg {

inline constexpr const char* kToolVersion = "0.1.0";

class StageError : public Error {
 public:
  StageError(const Error& inner, std::string stage)
      : Error(inner.kind(), stage + ": " + inner.detail(), inner.context()),
        stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct Scenario {
  std::string graph_path;
  AllocationRequest allocation;
  std::vector<PathQuery> paths;
  std::optional<std::string> metrics_path;
  FeedbackConfig feedback;
  std::optional<std::string> counts_path;
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;
};

struct RunReport {
  Json report;   // deterministic content
  Json timings;  // wall-clock per stage, milliseconds
};

inline Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  io::require_object(doc, "scenario");
  io::reject_unknown_keys(doc, "scenario",
                          {"graph", "allocation", "paths", "feedback", "markov", "seed",
                           "output_dir"});
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_absolute() ? path : base_dir / path).lexically_normal().string();
  };
  Scenario s;
  s.graph_path = resolve(io::string(io::required(doc, "graph", "scenario"), "scenario.graph"));

  if (doc.contains("allocation")) {
    const Json& a = doc["allocation"];
    io::require_object(a, "allocation");
    io::reject_unknown_keys(a, "allocation", {"budget", "mode"});
    s.allocation.budget = io::number(io::required(a, "budget", "allocation"), "allocation.budget");
    if (a.contains("mode")) s.allocation.mode = parse_mode(io::string(a["mode"], "allocation.mode"));
  }
  if (doc.contains("paths")) {
    const Json& ps = io::array(doc["paths"], "paths");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string where = "paths[" + std::to_string(i) + "]";
      io::require_object(ps[i], where);
      io::reject_unknown_keys(ps[i], where, {"from", "to", "tau"});
      PathQuery q;
      q.source = io::string(io::required(ps[i], "from", where), where + ".from");
      q.target = io::string(io::required(ps[i], "to", where), where + ".to");
      if (ps[i].contains("tau") && !ps[i]["tau"].is_null())
        q.threshold = io::number(ps[i]["tau"], where + ".tau");
      s.paths.push_back(std::move(q));
    }
  }
  if (doc.contains("feedback")) {
    const Json& f = doc["feedback"];
    io::require_object(f, "feedback");
    io::reject_unknown_keys(f, "feedback",
                            {"metrics", "eta", "iterations", "w_min", "w_max",
                             "success_threshold"});
    if (f.contains("metrics")) s.metrics_path = resolve(io::string(f["metrics"], "feedback.metrics"));
    if (f.contains("eta")) s.feedback.learning_rate = io::number(f["eta"], "feedback.eta");
    if (f.contains("w_min")) s.feedback.w_min = io::number(f["w_min"], "feedback.w_min");
    if (f.contains("w_max")) s.feedback.w_max = io::number(f["w_max"], "feedback.w_max");
    if (f.contains("success_threshold"))
      s.feedback.success_threshold = io::number(f["success_threshold"], "feedback.success_threshold");
    if (f.contains("iterations")) {
      if (!f["iterations"].is_number_unsigned())
        throw Error(ErrorKind::ParseError, "feedback.iterations: expected a nonnegative integer");
      s.feedback.iterations = f["iterations"].get<std::size_t>();
    }
  }
  if (doc.contains("markov")) {
    const Json& m = doc["markov"];
    io::require_object(m, "markov");
    io::reject_unknown_keys(m, "markov", {"counts"});
    s.counts_path = resolve(io::string(io::required(m, "counts", "markov"), "markov.counts"));
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw Error(ErrorKind::ParseError, "scenario.seed: expected a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir"))
    s.output_dir = resolve(io::string(doc["output_dir"], "scenario.output_dir"));
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path();
  return scenario_from_json(io::parse_json(io::read_file(path), path), base);
}

namespace detail {

template <typename F>
auto timed_stage(const char* stage, Json& timings, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      timings[stage] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    } else {
      auto result = body();
      timings[stage] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(e, stage);
  }
}

}  // namespace detail

/// Runs every configured stage and, when an output directory is set, writes
/// report.json plus one artifact per stage into it.
inline RunReport run_scenario(const Scenario& s) {
  RunReport run;
  run.timings = Json::object();
  Json stages = Json::object();

  SkillsGraph graph = detail::timed_stage("validate", run.timings, [&] {
    SkillsGraph g = load_graph(s.graph_path);
    stages["validate"] = {{"nodes", g.node_count()},
                          {"edges", g.edge_count()},
                          {"topological_order", validate_dag(g)}};
    return g;
  });

  detail::timed_stage("centrality", run.timings, [&] {
    stages["centrality"] = scores_to_json(weighted_centrality(graph));
  });

  detail::timed_stage("allocation", run.timings, [&] {
    stages["allocation"] = allocation_to_json(allocate(graph, s.allocation));
  });

  detail::timed_stage("paths", run.timings, [&] {
    Json paths = Json::array();
    for (const auto& q : s.paths) {
      Json entry = {{"from", q.source},
                    {"to", q.target},
                    {"tau", q.threshold ? Json(*q.threshold) : Json(nullptr)}};
      entry["path"] = path_to_json(find_optimal_path(graph, q));
      paths.push_back(std::move(entry));
    }
    stages["paths"] = std::move(paths);
  });

  std::string history_lines;
  detail::timed_stage("feedback", run.timings, [&] {
    std::vector<MetricsReport> metrics;
    if (s.metrics_path) metrics = load_metrics(*s.metrics_path);
    const auto history = run_feedback_cycle(graph, metrics, s.feedback, s.allocation.budget);
    history_lines = history_to_jsonl(history);
    Json rates = Json::array();
    for (const auto& snap : history)
      rates.push_back(snap.success_rate ? Json(*snap.success_rate) : Json(nullptr));
    stages["feedback"] = {{"iterations", s.feedback.iterations},
                          {"eta", s.feedback.learning_rate},
                          {"snapshots", history.size()},
                          {"initial", snapshot_to_json(history.front())},
                          {"final", snapshot_to_json(history.back())},
                          {"success_rates", std::move(rates)}};
  });

  if (s.counts_path) {
    detail::timed_stage("markov", run.timings, [&] {
      const auto p = parse_counts_csv(io::read_file(*s.counts_path));
      stages["markov"] = markov_to_json(p, stationary_distribution(p));
    });
  }

  run.report = {{"tool", "mcbsg"},
                {"version", kToolVersion},
                {"seed", s.seed},
                {"stages", std::move(stages)}};

  if (s.output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(*s.output_dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create '" + *s.output_dir + "'");
    const fs::path dir(*s.output_dir);
    const Json& st = run.report["stages"];
    Json full = run.report;
    full["timings_ms"] = run.timings;
    io::write_file((dir / "report.json").string(), full.dump(2) + "\n");
    io::write_file((dir / "centrality.json").string(), st["centrality"].dump(2) + "\n");
    io::write_file((dir / "allocation.json").string(), st["allocation"].dump(2) + "\n");
    io::write_file((dir / "paths.json").string(), st["paths"].dump(2) + "\n");
    io::write_file((dir / "feedback_history.jsonl").string(), history_lines);
    if (st.contains("markov"))
      io::write_file((dir / "markov.json").string(), st["markov"].dump(2) + "\n");
  }
  return run;
}

}  // namespace mcbsg
