#pragma once

// Subcommand front end. Machine output (JSON) goes to `out`, diagnostics to
// `err`. Exit status: 0 success, 1 domain error, 2 usage or input error.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcbsg/allocator.hpp"
#include "mcbsg/cohort.hpp"
#include "mcbsg/error.hpp"
#include "mcbsg/feedback.hpp"
#include "mcbsg/graph.hpp"
#include "mcbsg/graph_io.hpp"
#include "mcbsg/markov.hpp"
#include "mcbsg/pathfinder.hpp"
#include "mcbsg/pipeline.hpp"
#include "mcbsg/report_io.hpp"
#include "mcbsg/scenario.hpp"

namespace mcbsg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

namespace detail {

// "3:15" -> 3..15, "7" -> 7.
inline std::vector<std::size_t> parse_range(const std::string& text, const std::string& flag) {
  auto to_size = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw Error(ErrorKind::Usage, flag + " expects N or LO:HI, got '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  const auto colon = text.find(':');
  const std::size_t lo = to_size(text.substr(0, colon));
  const std::size_t hi = colon == std::string::npos ? lo : to_size(text.substr(colon + 1));
  if (hi < lo) throw Error(ErrorKind::Usage, flag + " range is empty");
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

inline std::vector<learner::Criterion> parse_criteria(const std::string& text) {
  std::vector<learner::Criterion> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(learner::parse_criterion(item));
  if (out.empty()) throw Error(ErrorKind::Usage, "--criteria needs at least one criterion");
  return out;
}

inline cohort::Dataset load_cohort(const std::string& path) {
  return cohort::parse_cohort_csv(io::read_file(path));
}

}  // namespace detail

/// Runs one command line. argv[0] is the program name.
inline int execute_command(const std::vector<std::string>& argv, std::ostream& out,
                           std::ostream& err) {
  CLI::App app{"Capacity-building skills graph toolkit", "mcbsg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string graph_path, metrics_path, counts_path, data_path, model_path, profile_path;
  std::string out_dir, mode = "fractional", from, to, start_state, scenario_path;
  std::string grid_depth = "3:15", grid_leaf = "1:10", criteria = "gini,entropy";
  double budget = 0.0, eta = 0.5, w_min = 0.01, w_max = 10.0, threshold = 0.5;
  std::optional<double> tau;
  std::size_t iters = 0, n = 380, folds = 5, threads = 1, steps = 0;
  std::int64_t mentoring_threshold = 10;
  std::uint64_t seed = 0;
  bool planted = false;

  auto* validate = app.add_subcommand("validate", "Check a graph file and print its topological order");
  validate->add_option("--graph", graph_path, "Graph JSON")->required();

  auto* centrality = app.add_subcommand("centrality", "Weighted out-degree centrality");
  centrality->add_option("--graph", graph_path, "Graph JSON")->required();

  auto* allocate_cmd = app.add_subcommand("allocate", "Budget allocation over graph nodes");
  allocate_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  allocate_cmd->add_option("--budget", budget, "Total budget")->required();
  allocate_cmd->add_option("--mode", mode, "select | fractional");

  auto* path_cmd = app.add_subcommand("path", "Cheapest path under an objective threshold");
  path_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  path_cmd->add_option("--from", from, "Source node id")->required();
  path_cmd->add_option("--to", to, "Target node id")->required();
  path_cmd->add_option("--tau", tau, "Objective threshold (omit for unbounded)");

  auto* feedback_cmd = app.add_subcommand("feedback", "Iterate metric-driven weight updates");
  feedback_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  feedback_cmd->add_option("--metrics", metrics_path, "Metrics JSON")->required();
  feedback_cmd->add_option("--eta", eta, "Learning rate in (0, 1]");
  feedback_cmd->add_option("--iters", iters, "Iterations");
  feedback_cmd->add_option("--budget", budget, "Budget for re-allocation");
  feedback_cmd->add_option("--w-min", w_min, "Lower weight clamp");
  feedback_cmd->add_option("--w-max", w_max, "Upper weight clamp");
  feedback_cmd->add_option("--threshold", threshold, "Action success threshold");

  auto* markov_cmd = app.add_subcommand("markov", "Transition matrix and stationary distribution");
  markov_cmd->add_option("--counts", counts_path, "Counts CSV")->required();
  markov_cmd->add_option("--steps", steps, "Evolve a point mass for this many steps");
  markov_cmd->add_option("--start", start_state, "Start state for --steps (default: first)");

  auto* cohort_cmd = app.add_subcommand("cohort", "Synthetic cohort tools");
  cohort_cmd->require_subcommand(1);
  auto* gen = cohort_cmd->add_subcommand("gen", "Generate a synthetic cohort CSV");
  gen->add_option("--n", n, "Number of participants");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--profile", profile_path, "Profile JSON (defaults otherwise)");
  gen->add_flag("--planted", planted, "Planted mentoring/education outcome model");
  gen->add_option("--out", out_dir, "Write the CSV to this file instead of stdout");
  auto* summarize_cmd = cohort_cmd->add_subcommand("summarize", "Marginal summary of a cohort CSV");
  summarize_cmd->add_option("--data", data_path, "Cohort CSV")->required();
  summarize_cmd->add_option("--mentoring-threshold", mentoring_threshold,
                            "Minimum mentoring sessions for the engaged subgroup");

  auto* train = app.add_subcommand("train", "Grid-searched decision tree on a cohort CSV");
  train->add_option("--data", data_path, "Cohort CSV")->required();
  train->add_option("--seed", seed, "Split and fold seed");
  train->add_option("--grid-depth", grid_depth, "Max depth range LO:HI");
  train->add_option("--grid-leaf", grid_leaf, "Min samples per leaf range LO:HI");
  train->add_option("--criteria", criteria, "Comma-separated criteria");
  train->add_option("--folds", folds, "Cross-validation folds");
  train->add_option("--threads", threads, "Worker threads for the grid");
  train->add_option("--out", out_dir, "Directory for model.json and cv_report.csv");

  auto* predict_cmd = app.add_subcommand("predict", "Apply a trained model to a cohort CSV");
  predict_cmd->add_option("--model", model_path, "Model JSON from train")->required();
  predict_cmd->add_option("--data", data_path, "Cohort CSV")->required();

  auto* run = app.add_subcommand("run", "Run a scenario file end to end");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the scenario)");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    Error usage(ErrorKind::Usage, e.what());
    out << error_to_json(usage).dump() << "\n";
    err << "mcbsg: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*validate) {
      const auto g = load_graph(graph_path);
      out << Json{{"valid", true},
                  {"nodes", g.node_count()},
                  {"edges", g.edge_count()},
                  {"topological_order", validate_dag(g)}}
                 .dump(2)
          << "\n";
    } else if (*centrality) {
      out << Json{{"centrality", scores_to_json(weighted_centrality(load_graph(graph_path)))}}.dump(2)
          << "\n";
    } else if (*allocate_cmd) {
      const auto g = load_graph(graph_path);
      out << allocation_to_json(allocate(g, {budget, parse_mode(mode)})).dump(2) << "\n";
    } else if (*path_cmd) {
      const auto g = load_graph(graph_path);
      out << path_to_json(find_optimal_path(g, {from, to, tau})).dump(2) << "\n";
    } else if (*feedback_cmd) {
      const auto g = load_graph(graph_path);
      FeedbackConfig config{eta, w_min, w_max, iters, threshold};
      out << history_to_jsonl(run_feedback_cycle(g, load_metrics(metrics_path), config, budget));
    } else if (*markov_cmd) {
      const auto p = parse_counts_csv(io::read_file(counts_path));
      Json j = markov_to_json(p, stationary_distribution(p));
      if (steps > 0 && p.size() > 0) {
        StateDistribution d{p.states(), std::vector<double>(p.size(), 0.0)};
        std::size_t start = 0;
        if (!start_state.empty()) {
          auto it = std::find(p.states().begin(), p.states().end(), start_state);
          if (it == p.states().end())
            throw Error(ErrorKind::StateMismatch, "unknown start state '" + start_state + "'");
          start = static_cast<std::size_t>(it - p.states().begin());
        }
        d.probabilities[start] = 1.0;
        const auto moved = step_distribution(p, d, steps);
        Json evolved = Json::object();
        for (std::size_t i = 0; i < moved.states.size(); ++i)
          evolved[moved.states[i]] = moved.probabilities[i];
        j["steps"] = steps;
        j["start"] = p.states()[start];
        j["distribution"] = std::move(evolved);
      }
      out << j.dump(2) << "\n";
    } else if (*gen) {
      cohort::CohortProfile profile =
          profile_path.empty()
              ? cohort::CohortProfile::defaults()
              : cohort::profile_from_json(io::parse_json(io::read_file(profile_path), profile_path));
      if (planted) profile.outcome = cohort::OutcomeModel::Planted;
      const std::string csv = cohort::to_csv(cohort::generate_cohort(n, seed, profile));
      if (out_dir.empty())
        out << csv;
      else
        io::write_file(out_dir, csv);
    } else if (*summarize_cmd) {
      out << cohort::report_to_json(
                 cohort::summarize(detail::load_cohort(data_path), mentoring_threshold))
                 .dump(2)
          << "\n";
    } else if (*train) {
      TrainingOptions options;
      options.seed = seed;
      options.folds = folds;
      options.threads = threads;
      options.grid.max_depths = detail::parse_range(grid_depth, "--grid-depth");
      options.grid.min_samples_leaf = detail::parse_range(grid_leaf, "--grid-leaf");
      options.grid.criteria = detail::parse_criteria(criteria);
      const auto data = detail::load_cohort(data_path);
      const auto report = train_outcome_model(data, options);
      const auto& best = report.search.cv_table;
      double best_mean = 0.0;
      for (const auto& row : best)
        if (row.params == report.search.best_params) best_mean = row.mean_acc;
      Json summary = {{"seed", seed},
                      {"rows", data.size()},
                      {"train_rows", report.train.size()},
                      {"test_rows", report.test.size()},
                      {"configs", best.size()},
                      {"best_params", learner::params_to_json(report.search.best_params)},
                      {"cv_mean_accuracy", best_mean},
                      {"test_accuracy", report.search.test_accuracy},
                      {"tree_depth", report.search.model.depth},
                      {"tree_nodes", report.search.model.nodes.size()},
                      {"feature_importance", scores_to_json(report.importance)},
                      {"grouped_importance", scores_to_json(report.grouped_importance)}};
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        io::write_file((dir / "model.json").string(), model_bundle_json(report).dump(2) + "\n");
        io::write_file((dir / "cv_report.csv").string(), learner::cv_table_csv(best));
        io::write_file((dir / "train_report.json").string(), summary.dump(2) + "\n");
      }
      out << summary.dump(2) << "\n";
    } else if (*predict_cmd) {
      const auto bundle =
          model_bundle_from_json(io::parse_json(io::read_file(model_path), model_path));
      const auto data = detail::load_cohort(data_path);
      const auto prepared = learner::apply_preprocessing(cohort::to_raw_table(data), bundle.transforms);
      Json predictions = Json::array();
      std::size_t hits = 0;
      for (std::size_t i = 0; i < prepared.size(); ++i) {
        const int y = learner::predict(bundle.tree, prepared.rows[i]);
        hits += y == prepared.labels[i];
        predictions.push_back(
            {{"student_id", prepared.row_ids[i]}, {"predicted", y}, {"employed", prepared.labels[i]}});
      }
      for (const auto& w : prepared.warnings) err << "mcbsg: warning: " << w << "\n";
      out << Json{{"predictions", std::move(predictions)},
                  {"accuracy", prepared.size() ? static_cast<double>(hits) / prepared.size() : 0.0},
                  {"warnings", prepared.warnings}}
                 .dump(2)
          << "\n";
    } else if (*run) {
      Scenario s = load_scenario(scenario_path);
      if (!out_dir.empty()) s.output_dir = out_dir;
      const auto result = run_scenario(s);
      Json j = result.report;
      j["timings_ms"] = result.timings;
      out << j.dump(2) << "\n";
    }
  } catch (const StageError& e) {
    out << error_to_json(e, e.stage()).dump() << "\n";
    err << "mcbsg: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitInput : kExitDomain;
  } catch (const Error& e) {
    out << error_to_json(e).dump() << "\n";
    err << "mcbsg: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitInput : kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    out << error_to_json(Error(ErrorKind::IoError, e.what())).dump() << "\n";
    err << "mcbsg: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

inline int execute_command(int argc, char** argv, std::ostream& out = std::cout,
                           std::ostream& err = std::cerr) {
  return execute_command(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mcbsg::cli
