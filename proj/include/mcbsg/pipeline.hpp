#pragma once

// Employment-outcome model training: stratified 70/30 split, preprocessing
// fitted on the training rows, grid-searched decision tree.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcbsg/cohort.hpp"
#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/learner/grid_search.hpp"
#include "mcbsg/learner/split.hpp"
#include "mcbsg/learner/tree.hpp"

namespace mcbsg {

struct TrainingOptions {
  double train_fraction = 0.7;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  learner::ParamGrid grid = learner::ParamGrid::defaults();
};

struct TrainingReport {
  learner::SplitIndices split;
  learner::PreparedDataset train;
  learner::PreparedDataset test;
  learner::GridSearchResult search;
  Scores importance;          // per encoded feature
  Scores grouped_importance;  // per raw column
};

inline TrainingReport train_outcome_model(const cohort::Dataset& data,
                                          const TrainingOptions& options = {}) {
  const learner::RawTable raw = cohort::to_raw_table(data);
  TrainingReport report;
  report.split = learner::stratified_split_indices(raw.labels, options.train_fraction, options.seed);
  const auto prepared =
      learner::apply_preprocessing(raw, learner::fit_preprocessing(raw, report.split.train));
  report.train = learner::subset(prepared, report.split.train);
  report.test = learner::subset(prepared, report.split.test);
  report.search = learner::grid_search_cv(report.train, report.test, options.grid,
                                          {options.folds, options.seed, options.threads});
  report.importance = learner::feature_importance(report.search.model, report.train);
  report.grouped_importance = learner::grouped_importance(report.importance, report.train);
  return report;
}

/// Self-contained model file: tree plus the preprocessing needed to apply it.
inline nlohmann::ordered_json model_bundle_json(const TrainingReport& report) {
  nlohmann::ordered_json j = learner::tree_to_json(report.search.model);
  j["preprocessing"] = learner::transforms_to_json(report.train.transforms);
  return j;
}

struct ModelBundle {
  learner::DecisionTree tree;
  std::vector<learner::ColumnTransform> transforms;
};

inline ModelBundle model_bundle_from_json(const nlohmann::ordered_json& j) {
  ModelBundle b;
  b.tree = learner::tree_from_json(j);
  if (!j.contains("preprocessing"))
    throw Error(ErrorKind::ParseError, "model file lacks a preprocessing block");
  b.transforms = learner::transforms_from_json(j.at("preprocessing"));
  return b;
}

}  // namespace mcbsg
