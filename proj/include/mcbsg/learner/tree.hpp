#pragma once

// Greedy binary decision tree over a numeric feature matrix.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcbsg/error.hpp"
#include "mcbsg/graph.hpp"
#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/learner/impurity.hpp"

namespace mcbsg::learner {

struct TreeParams {
  std::size_t max_depth = 10;
  std::size_t min_samples_leaf = 4;
  Criterion criterion = Criterion::Entropy;

  bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  ClassCounts class_counts;
  int prediction = 0;
  std::size_t depth = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // preorder, root at 0
  TreeParams params;
  std::vector<std::string> feature_names;
  std::size_t depth = 0;
};

namespace detail {

constexpr double kGainEpsilon = 1e-12;

inline int majority(const ClassCounts& c) {
  int best = 0;
  for (std::size_t k = 1; k < c.counts.size(); ++k)
    if (c.counts[k] > c.counts[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const PreparedDataset& data, const TreeParams& params, std::size_t classes)
      : data_(data), params_(params), classes_(classes) {}

  std::size_t build(std::vector<std::size_t> rows, std::size_t depth, DecisionTree& tree) {
    TreeNode node;
    node.depth = depth;
    node.class_counts = counts(rows);
    node.prediction = majority(node.class_counts);
    tree.depth = std::max(tree.depth, depth);
    const std::size_t id = tree.nodes.size();
    tree.nodes.push_back(node);

    if (node.class_counts.pure() || depth >= params_.max_depth) return id;
    auto choice = best_split(rows, node.class_counts);
    if (!choice) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (data_.rows[r][choice->feature] <= choice->threshold ? left : right).push_back(r);

    tree.nodes[id].leaf = false;
    tree.nodes[id].feature = choice->feature;
    tree.nodes[id].threshold = choice->threshold;
    const std::size_t l = build(std::move(left), depth + 1, tree);
    tree.nodes[id].left = l;
    const std::size_t r = build(std::move(right), depth + 1, tree);
    tree.nodes[id].right = r;
    return id;
  }

 private:
  ClassCounts counts(const std::vector<std::size_t>& rows) const {
    ClassCounts c(std::vector<std::int64_t>(classes_, 0));
    for (std::size_t r : rows) ++c.counts[static_cast<std::size_t>(data_.labels[r])];
    return c;
  }

  // Highest gain; ties keep the lowest feature then the smallest threshold.
  // When no candidate gains anything the first admissible candidate (lowest
  // feature, smallest threshold) is still used, so gain ties such as XOR at
  // the root do not stop growth.
  std::optional<SplitChoice> best_split(const std::vector<std::size_t>& rows,
                                        const ClassCounts& parent) const {
    const std::size_t n = rows.size();
    const std::size_t min_leaf = params_.min_samples_leaf;
    if (n < 2 * min_leaf) return std::nullopt;
    const double parent_impurity = impurity(parent, params_.criterion);

    std::optional<SplitChoice> best, first_admissible;
    std::vector<std::pair<double, int>> column(n);
    for (std::size_t f = 0; f < data_.feature_count(); ++f) {
      for (std::size_t i = 0; i < n; ++i)
        column[i] = {data_.rows[rows[i]][f], data_.labels[rows[i]]};
      std::sort(column.begin(), column.end());

      ClassCounts left(std::vector<std::int64_t>(classes_, 0));
      ClassCounts right = parent;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto k = static_cast<std::size_t>(column[i].second);
        ++left.counts[k];
        --right.counts[k];
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf || n - n_left < min_leaf) continue;

        double threshold = 0.5 * (column[i].first + column[i + 1].first);
        if (threshold >= column[i + 1].first) threshold = column[i].first;
        const double w_left = static_cast<double>(n_left) / static_cast<double>(n);
        const double gain = parent_impurity - w_left * impurity(left, params_.criterion) -
                            (1.0 - w_left) * impurity(right, params_.criterion);
        SplitChoice c{f, threshold, gain};
        if (!first_admissible) first_admissible = c;
        if (!best || gain > best->gain + kGainEpsilon) best = c;
      }
    }
    if (best && best->gain <= kGainEpsilon) return first_admissible;
    return best;
  }

  const PreparedDataset& data_;
  const TreeParams& params_;
  std::size_t classes_;
};

inline std::size_t class_count(const std::vector<int>& labels) {
  int top = 1;
  for (int y : labels) {
    if (y < 0) throw Error(ErrorKind::InvalidConfig, "labels must be >= 0");
    top = std::max(top, y);
  }
  return static_cast<std::size_t>(top) + 1;
}

}  // namespace detail

/// Fits on the given rows of data (all rows when omitted).
inline DecisionTree fit_tree(const PreparedDataset& data, const TreeParams& params,
                             std::optional<std::vector<std::size_t>> rows = std::nullopt) {
  if (params.min_samples_leaf < 1)
    throw Error(ErrorKind::InvalidConfig, "min_samples_leaf must be >= 1");
  std::vector<std::size_t> use;
  if (rows) {
    use = std::move(*rows);
  } else {
    use.resize(data.size());
    for (std::size_t i = 0; i < use.size(); ++i) use[i] = i;
  }
  if (use.empty()) throw Error(ErrorKind::EmptyTrainingSet, "no training rows");

  DecisionTree tree;
  tree.params = params;
  tree.feature_names = data.feature_names;
  detail::TreeBuilder builder(data, params, detail::class_count(data.labels));
  builder.build(std::move(use), 0, tree);
  return tree;
}

inline int predict(const DecisionTree& tree, const std::vector<double>& row) {
  std::size_t i = 0;
  while (!tree.nodes.at(i).leaf) {
    const TreeNode& node = tree.nodes[i];
    if (node.feature >= row.size()) {
      const std::string name = node.feature < tree.feature_names.size()
                                   ? tree.feature_names[node.feature]
                                   : std::to_string(node.feature);
      throw Error(ErrorKind::MissingFeature, "row lacks feature '" + name + "'", {name});
    }
    i = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return tree.nodes[i].prediction;
}

/// Routing by feature name; only the features the path visits must exist.
inline int predict(const DecisionTree& tree, const std::map<std::string, double>& row) {
  std::size_t i = 0;
  while (!tree.nodes.at(i).leaf) {
    const TreeNode& node = tree.nodes[i];
    const std::string& name = tree.feature_names.at(node.feature);
    auto it = row.find(name);
    if (it == row.end())
      throw Error(ErrorKind::MissingFeature, "row lacks feature '" + name + "'", {name});
    i = it->second <= node.threshold ? node.left : node.right;
  }
  return tree.nodes[i].prediction;
}

inline double accuracy(const DecisionTree& tree, const PreparedDataset& data,
                       const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r : rows) hits += predict(tree, data.rows[r]) == data.labels[r];
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

inline double accuracy(const DecisionTree& tree, const PreparedDataset& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return accuracy(tree, data, rows);
}

/// Sample-weighted impurity decrease per feature, normalized to sum to 1
/// (all zeros for a single-leaf tree). Uses the tree's own criterion.
inline Scores feature_importance(const DecisionTree& tree, const PreparedDataset& train) {
  const std::vector<std::string>& names =
      tree.feature_names.empty() ? train.feature_names : tree.feature_names;
  std::vector<double> raw(names.size(), 0.0);
  const double total = static_cast<double>(tree.nodes.at(0).class_counts.total());
  for (const auto& node : tree.nodes) {
    if (node.leaf) continue;
    const auto& l = tree.nodes[node.left].class_counts;
    const auto& r = tree.nodes[node.right].class_counts;
    const double n = static_cast<double>(node.class_counts.total());
    const double decrease =
        impurity(node.class_counts, tree.params.criterion) -
        static_cast<double>(l.total()) / n * impurity(l, tree.params.criterion) -
        static_cast<double>(r.total()) / n * impurity(r, tree.params.criterion);
    raw[node.feature] += n / total * std::max(0.0, decrease);
  }
  double sum = 0.0;
  for (double v : raw) sum += v;
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t f = 0; f < names.size(); ++f)
    out.emplace_back(names[f], sum > 0.0 ? raw[f] / sum : 0.0);
  return Scores(std::move(out));
}

/// Importances summed per originating raw column (one-hot groups collapse).
inline Scores grouped_importance(const Scores& importance, const PreparedDataset& data) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t f = 0; f < importance.size(); ++f) {
    const std::string& source =
        f < data.feature_source.size() ? data.feature_source[f] : importance.entries()[f].first;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == source; });
    if (it == out.end())
      out.emplace_back(source, importance.entries()[f].second);
    else
      it->second += importance.entries()[f].second;
  }
  return Scores(std::move(out));
}

inline nlohmann::ordered_json params_to_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf},
          {"criterion", std::string(criterion_name(p.criterion))}};
}

inline nlohmann::ordered_json tree_to_json(const DecisionTree& tree) {
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& n : tree.nodes) {
    nlohmann::ordered_json j;
    j["kind"] = n.leaf ? "leaf" : "internal";
    if (!n.leaf) {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    j["class_counts"] = n.class_counts.counts;
    j["prediction"] = n.prediction;
    nodes.push_back(std::move(j));
  }
  return {{"nodes", std::move(nodes)},
          {"params", params_to_json(tree.params)},
          {"feature_names", tree.feature_names}};
}

inline DecisionTree tree_from_json(const nlohmann::ordered_json& j) {
  DecisionTree tree;
  try {
    const auto& p = j.at("params");
    tree.params.max_depth = p.at("max_depth").get<std::size_t>();
    tree.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
    tree.params.criterion = parse_criterion(p.at("criterion").get<std::string>());
    tree.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& jn : j.at("nodes")) {
      TreeNode n;
      n.leaf = jn.at("kind").get<std::string>() == "leaf";
      if (!n.leaf) {
        n.feature = jn.at("feature").get<std::size_t>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<std::size_t>();
        n.right = jn.at("right").get<std::size_t>();
      }
      n.class_counts = ClassCounts(jn.at("class_counts").get<std::vector<std::int64_t>>());
      n.prediction = jn.at("prediction").get<int>();
      tree.nodes.push_back(std::move(n));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
  }
  if (tree.nodes.empty()) throw Error(ErrorKind::ParseError, "model has no nodes");
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    auto& n = tree.nodes[i];
    if (n.leaf) continue;
    if (n.left <= i || n.right <= i || n.left >= tree.nodes.size() ||
        n.right >= tree.nodes.size())
      throw Error(ErrorKind::ParseError, "model node " + std::to_string(i) + " has bad children");
    tree.nodes[n.left].depth = n.depth + 1;
    tree.nodes[n.right].depth = n.depth + 1;
    tree.depth = std::max(tree.depth, n.depth + 1);
  }
  return tree;
}

}  // namespace mcbsg::learner
