#pragma once

// Exhaustive hyperparameter search scored by stratified k-fold accuracy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "mcbsg/error.hpp"
#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/learner/split.hpp"
#include "mcbsg/learner/tree.hpp"

namespace mcbsg::learner {

struct ParamGrid {
  std::vector<std::size_t> max_depths;
  std::vector<std::size_t> min_samples_leaf;
  std::vector<Criterion> criteria;

  // Depth 3..15, leaf size 1..10, both criteria.
  static ParamGrid defaults() {
    ParamGrid g;
    for (std::size_t d = 3; d <= 15; ++d) g.max_depths.push_back(d);
    for (std::size_t l = 1; l <= 10; ++l) g.min_samples_leaf.push_back(l);
    g.criteria = {Criterion::Gini, Criterion::Entropy};
    return g;
  }

  std::vector<TreeParams> configs() const {
    std::vector<TreeParams> out;
    for (auto d : max_depths)
      for (auto l : min_samples_leaf)
        for (auto c : criteria) out.push_back({d, l, c});
    return out;
  }
};

struct CvRow {
  std::size_t config_id = 0;
  TreeParams params;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  std::vector<double> fold_acc;
};

struct GridSearchResult {
  TreeParams best_params;
  std::vector<CvRow> cv_table;
  double test_accuracy = 0.0;
  DecisionTree model;
};

struct GridSearchOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

// Higher mean wins; then smaller depth, larger leaf size, criterion name.
inline bool better_config(const CvRow& a, const CvRow& b) {
  if (std::abs(a.mean_acc - b.mean_acc) > 1e-12) return a.mean_acc > b.mean_acc;
  if (a.params.max_depth != b.params.max_depth) return a.params.max_depth < b.params.max_depth;
  if (a.params.min_samples_leaf != b.params.min_samples_leaf)
    return a.params.min_samples_leaf > b.params.min_samples_leaf;
  return criterion_name(a.params.criterion) < criterion_name(b.params.criterion);
}

inline CvRow evaluate_config(const PreparedDataset& train, const std::vector<std::size_t>& fold,
                             std::size_t folds, std::size_t id, const TreeParams& params) {
  CvRow row;
  row.config_id = id;
  row.params = params;
  for (std::size_t k = 0; k < folds; ++k) {
    std::vector<std::size_t> fit_rows, held_out;
    for (std::size_t r = 0; r < fold.size(); ++r) (fold[r] == k ? held_out : fit_rows).push_back(r);
    DecisionTree tree = fit_tree(train, params, fit_rows);
    row.fold_acc.push_back(accuracy(tree, train, held_out));
  }
  double sum = 0.0;
  for (double a : row.fold_acc) sum += a;
  row.mean_acc = sum / static_cast<double>(folds);
  double var = 0.0;
  for (double a : row.fold_acc) var += (a - row.mean_acc) * (a - row.mean_acc);
  row.std_acc = std::sqrt(var / static_cast<double>(folds));
  return row;
}

}  // namespace detail

/// Fold assignment is fixed by the seed before any worker starts and rows are
/// reduced in config order, so results do not depend on the thread count.
inline GridSearchResult grid_search_cv(const PreparedDataset& train, const PreparedDataset& test,
                                       const ParamGrid& grid, GridSearchOptions options = {}) {
  const auto configs = grid.configs();
  if (configs.empty()) throw Error(ErrorKind::InvalidConfig, "empty parameter grid");
  if (train.size() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training rows");
  const auto fold = stratified_folds(train.labels, options.folds, options.seed);

  std::vector<CvRow> table(configs.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, configs.size()));
  auto work = [&](std::size_t start) {
    for (std::size_t i = start; i < configs.size(); i += workers)
      table[i] = detail::evaluate_config(train, fold, options.folds, i, configs[i]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (detail::better_config(table[i], table[best])) best = i;

  GridSearchResult result;
  result.best_params = table[best].params;
  result.cv_table = std::move(table);
  result.model = fit_tree(train, result.best_params);
  result.test_accuracy = test.size() > 0 ? accuracy(result.model, test) : 0.0;
  return result;
}

inline std::string cv_table_csv(const std::vector<CvRow>& table) {
  std::string out = "config_id,max_depth,min_samples_leaf,criterion,mean_acc,std_acc\n";
  char buf[64];
  for (const auto& row : table) {
    out += std::to_string(row.config_id) + "," + std::to_string(row.params.max_depth) + "," +
           std::to_string(row.params.min_samples_leaf) + "," +
           std::string(criterion_name(row.params.criterion)) + ",";
    std::snprintf(buf, sizeof buf, "%.10f,%.10f\n", row.mean_acc, row.std_acc);
    out += buf;
  }
  return out;
}

}  // namespace mcbsg::learner
