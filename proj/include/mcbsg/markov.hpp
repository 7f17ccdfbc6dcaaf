#pragma once

// Row-stochastic transition model over graph states.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mcbsg/error.hpp"

namespace mcbsg {

struct StateDistribution {
  std::vector<std::string> states;
  std::vector<double> probabilities;

  double operator[](std::size_t i) const { return probabilities.at(i); }
};

class TransitionMatrix {
 public:
  static constexpr double kRowTolerance = 1e-12;

  TransitionMatrix() = default;

  /// Validating constructor for explicit probabilities.
  static TransitionMatrix from_probabilities(std::vector<std::string> states,
                                             std::vector<std::vector<double>> rows) {
    check_shape(states.size(), rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double sum = 0.0;
      for (double p : rows[i]) {
        if (!(p >= 0.0 && p <= 1.0))
          throw Error(ErrorKind::NotStochastic,
                      "row " + states[i] + " has an entry outside [0, 1]", {states[i]});
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance)
        throw Error(ErrorKind::NotStochastic, "row " + states[i] + " does not sum to 1",
                    {states[i]});
    }
    TransitionMatrix m;
    m.states_ = std::move(states);
    m.rows_ = std::move(rows);
    return m;
  }

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return states_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return rows_.at(i).at(j); }

  static void check_shape(std::size_t n, const auto& rows) {
    if (rows.size() != n)
      throw Error(ErrorKind::ShapeMismatch,
                  "expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
    for (const auto& row : rows)
      if (row.size() != n)
        throw Error(ErrorKind::ShapeMismatch, "matrix is not square");
  }

 private:
  std::vector<std::string> states_;
  std::vector<std::vector<double>> rows_;
};

/// Row-normalized counts; a row without observations becomes a self-loop.
inline TransitionMatrix build_transition_matrix(
    std::vector<std::string> states, const std::vector<std::vector<std::int64_t>>& counts) {
  TransitionMatrix::check_shape(states.size(), counts);
  std::vector<std::vector<double>> rows(states.size(), std::vector<double>(states.size(), 0.0));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t total = 0;
    for (std::int64_t c : counts[i]) {
      if (c < 0)
        throw Error(ErrorKind::NegativeCount, "negative count in row " + states[i],
                    {states[i]});
      total += c;
    }
    if (total == 0) {
      rows[i][i] = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < counts[i].size(); ++j)
      rows[i][j] = static_cast<double>(counts[i][j]) / static_cast<double>(total);
  }
  return TransitionMatrix::from_probabilities(std::move(states), std::move(rows));
}

namespace detail {

inline std::vector<double> left_multiply(const std::vector<double>& d,
                                         const TransitionMatrix& p) {
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) continue;
    const auto& row = p.rows()[i];
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += d[i] * row[j];
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace detail

/// d * P^k.
inline StateDistribution step_distribution(const TransitionMatrix& p,
                                           const StateDistribution& d, std::size_t k) {
  if (d.states != p.states() || d.probabilities.size() != p.size())
    throw Error(ErrorKind::StateMismatch, "distribution states differ from the matrix");
  double sum = 0.0;
  for (double x : d.probabilities) {
    if (!(x >= 0.0 && x <= 1.0))
      throw Error(ErrorKind::StateMismatch, "distribution entry outside [0, 1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > TransitionMatrix::kRowTolerance)
    throw Error(ErrorKind::StateMismatch, "distribution does not sum to 1");

  std::vector<double> x = d.probabilities;
  for (std::size_t step = 0; step < k; ++step) x = detail::left_multiply(x, p);
  return {d.states, std::move(x)};
}

inline double stationary_residual(const TransitionMatrix& p, const StateDistribution& pi) {
  return detail::max_abs_diff(detail::left_multiply(pi.probabilities, p), pi.probabilities);
}

struct StationaryOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  double residual_tolerance = 1e-9;
};

/// Long-run average distribution from the uniform start.
///
/// The Cesaro limit lim (1/K) sum_{k<K} u P^k equals lim u ((I + P) / 2)^k:
/// both are the projection of u onto the eigenvalue-1 eigenspace of P, and the
/// lazy chain (I + P) / 2 has no other eigenvalues on the unit circle. Iterating
/// the lazy chain reaches that limit geometrically, also for periodic chains.
/// Reducible chains yield one valid stationary distribution (not unique).
inline StateDistribution stationary_distribution(const TransitionMatrix& p,
                                                 StationaryOptions options = {}) {
  const std::size_t n = p.size();
  if (n == 0) return {};
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    std::vector<double> moved = detail::left_multiply(x, p);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = 0.5 * (x[i] + moved[i]);
    const double delta = detail::max_abs_diff(next, x);
    x = std::move(next);
    if (delta < options.tolerance) break;
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  for (double& v : x) v /= sum;

  StateDistribution pi{p.states(), std::move(x)};
  const double residual = stationary_residual(p, pi);
  if (residual > options.residual_tolerance) {
    std::ostringstream msg;
    msg << "stationary residual " << residual << " after " << options.max_iterations
        << " iterations";
    throw Error(ErrorKind::NotConverged, msg.str());
  }
  return pi;
}

/// Counts CSV: header row of state ids, then one row of integer counts per
/// source state in header order.
inline TransitionMatrix parse_counts_csv(const std::string& text) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> states;
  std::vector<std::vector<std::int64_t>> counts;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (states.empty()) {
      states = cells;
      continue;
    }
    std::vector<std::int64_t> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size())
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) + ": '" + c + "' is not an integer",
                    {std::to_string(line_no)});
      row.push_back(v);
    }
    counts.push_back(std::move(row));
  }
  if (states.empty()) throw Error(ErrorKind::ParseError, "counts file has no header");
  return build_transition_matrix(std::move(states), counts);
}

}  // namespace mcbsg
