#pragma once

// Stratified train/test split and stratified k-fold assignment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "mcbsg/error.hpp"
#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/rng.hpp"

namespace mcbsg::learner {

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

namespace detail {

// Row indices per class, classes in ascending label order.
inline std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  return by_class;
}

}  // namespace detail

/// Largest-remainder apportionment of round(fraction * N) seats across
/// classes proportional to their sizes. Equal remainders go to the earlier
/// class.
inline std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, double fraction) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  const auto seats =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5 + 1e-9));

  std::vector<std::size_t> quota(sizes.size());
  std::vector<double> remainder(sizes.size());
  std::size_t given = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const double exact = fraction * static_cast<double>(sizes[c]);
    quota[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[c] = exact - static_cast<double>(quota[c]);
    given += quota[c];
  }
  std::vector<std::size_t> order(sizes.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b] + 1e-9;
  });
  for (std::size_t i = 0; given < seats && i < order.size(); ++i, ++given) ++quota[order[i]];
  for (std::size_t c = 0; c < sizes.size(); ++c) quota[c] = std::min(quota[c], sizes[c]);
  return quota;
}

/// Per class: shuffle with the seeded generator, the first quota rows train.
/// Single-row classes always go to train.
inline SplitIndices stratified_split_indices(const std::vector<int>& labels, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "train fraction must lie in (0, 1)");
  auto by_class = detail::rows_by_class(labels);
  std::vector<std::size_t> sizes;
  for (const auto& [label, rows] : by_class) sizes.push_back(rows.size());
  auto quota = apportion(sizes, train_fraction);

  Rng rng(seed);
  SplitIndices out;
  std::size_t c = 0;
  for (auto& [label, rows] : by_class) {
    const std::size_t q = rows.size() == 1 ? 1 : quota[c];
    rng.shuffle(rows);
    out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(q));
    out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(q), rows.end());
    ++c;
  }
  if (out.train.empty() || out.test.empty())
    throw Error(ErrorKind::DegenerateSplit, "split leaves an empty train or test set");
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

inline std::pair<PreparedDataset, PreparedDataset> stratified_split(const PreparedDataset& data,
                                                                    double train_fraction,
                                                                    std::uint64_t seed) {
  auto idx = stratified_split_indices(data.labels, train_fraction, seed);
  return {subset(data, idx.train), subset(data, idx.test)};
}

/// Fold id per row. Each class is shuffled, then dealt round-robin with the
/// dealer position carried across classes, so per-class fold counts differ by
/// at most one and fold sizes stay balanced.
inline std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t folds,
                                                 std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorKind::InvalidConfig, "need at least 2 folds");
  auto by_class = detail::rows_by_class(labels);
  for (const auto& [label, rows] : by_class)
    if (rows.size() < folds)
      throw Error(ErrorKind::InsufficientSamples,
                  "class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                      " rows, fewer than " + std::to_string(folds) + " folds");
  Rng rng(seed);
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t dealer = 0;
  for (auto& [label, rows] : by_class) {
    rng.shuffle(rows);
    for (std::size_t r : rows) fold[r] = dealer++ % folds;
  }
  return fold;
}

}  // namespace mcbsg::learner
