#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "mcbsg/error.hpp"

namespace mcbsg::learner {

enum class Criterion { Entropy, Gini };

inline std::string_view criterion_name(Criterion c) {
  return c == Criterion::Entropy ? "entropy" : "gini";
}

inline Criterion parse_criterion(std::string_view text) {
  if (text == "entropy") return Criterion::Entropy;
  if (text == "gini") return Criterion::Gini;
  throw Error(ErrorKind::InvalidConfig, "unknown criterion '" + std::string(text) + "'");
}

struct ClassCounts {
  std::vector<std::int64_t> counts;

  ClassCounts() = default;
  ClassCounts(std::initializer_list<std::int64_t> c) : counts(c) {}
  explicit ClassCounts(std::vector<std::int64_t> c) : counts(std::move(c)) {}

  std::int64_t total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  }
  bool pure() const {
    int nonzero = 0;
    for (auto c : counts) nonzero += c > 0;
    return nonzero <= 1;
  }
  bool operator==(const ClassCounts&) const = default;
};

namespace detail {
inline std::int64_t checked_total(const ClassCounts& c) {
  for (auto k : c.counts)
    if (k < 0) throw Error(ErrorKind::NegativeCount, "class count below zero");
  const std::int64_t total = c.total();
  if (total <= 0) throw Error(ErrorKind::EmptyCounts, "impurity of an empty node");
  return total;
}
}  // namespace detail

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double entropy(const ClassCounts& c) {
  const double total = static_cast<double>(detail::checked_total(c));
  double h = 0.0;
  for (auto k : c.counts) {
    if (k <= 0) continue;
    const double p = static_cast<double>(k) / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double gini(const ClassCounts& c) {
  const double total = static_cast<double>(detail::checked_total(c));
  double s = 0.0;
  for (auto k : c.counts) {
    const double p = static_cast<double>(k) / total;
    s += p * p;
  }
  return 1.0 - s;
}

inline double impurity(const ClassCounts& c, Criterion criterion) {
  return criterion == Criterion::Entropy ? entropy(c) : gini(c);
}

/// Parent impurity minus the size-weighted impurity of the children.
inline double information_gain(const ClassCounts& parent,
                               const std::vector<ClassCounts>& children,
                               Criterion criterion = Criterion::Entropy) {
  const std::int64_t total = detail::checked_total(parent);
  std::vector<std::int64_t> merged(parent.counts.size(), 0);
  for (const auto& child : children) {
    if (child.counts.size() != parent.counts.size())
      throw Error(ErrorKind::PartitionMismatch, "children have a different class count");
    for (std::size_t k = 0; k < merged.size(); ++k) merged[k] += child.counts[k];
  }
  if (merged != parent.counts)
    throw Error(ErrorKind::PartitionMismatch, "children do not partition the parent");

  double weighted = 0.0;
  for (const auto& child : children) {
    const std::int64_t n = child.total();
    if (n == 0) continue;
    weighted += static_cast<double>(n) / static_cast<double>(total) * impurity(child, criterion);
  }
  return impurity(parent, criterion) - weighted;
}

}  // namespace mcbsg::learner
