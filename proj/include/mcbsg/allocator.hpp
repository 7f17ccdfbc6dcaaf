#pragma once

// Two budget formulations over the same graph:
//  - select: 0/1 choice of nodes maximizing total effectiveness under a cost
//    budget, exact DP over costs in 0.01 units;
//  - fractional: continuous split of one budget maximizing sum f(v) * r(v)
//    with 0 <= r(v) <= capacity(v).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcbsg/error.hpp"
#include "mcbsg/graph.hpp"

namespace mcbsg {

enum class AllocationMode { Select, Fractional };

inline std::string_view mode_name(AllocationMode mode) {
  return mode == AllocationMode::Select ? "select" : "fractional";
}

inline AllocationMode parse_mode(std::string_view text) {
  if (text == "select") return AllocationMode::Select;
  if (text == "fractional") return AllocationMode::Fractional;
  throw Error(ErrorKind::InvalidRequest,
              "mode must be 'select' or 'fractional', got '" + std::string(text) + "'");
}

struct AllocationRequest {
  double budget = 0.0;
  AllocationMode mode = AllocationMode::Fractional;
};

struct NodeSelection {
  std::vector<std::string> chosen;  // node insertion order
  double total_cost = 0.0;
  double objective = 0.0;
};

struct AllocationPlan {
  std::vector<std::pair<std::string, double>> allocation;  // node order
  double objective = 0.0;
};

struct KnapsackOptions {
  std::size_t max_table_cells = 10'000'000;
};

namespace detail {

inline void check_budget(double budget) {
  if (!(std::isfinite(budget) && budget >= 0.0))
    throw Error(ErrorKind::InvalidRequest, "budget must be a finite value >= 0");
}

// Exact conversion to hundredths; anything finer is rejected.
inline std::int64_t to_cents(double value, const std::string& what) {
  const double scaled = value * 100.0;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-6 * std::max(1.0, std::abs(scaled)))
    throw Error(ErrorKind::ExcessCostPrecision,
                what + " has more than two decimals", {what});
  return static_cast<std::int64_t>(rounded);
}

inline bool objective_tie(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

/// 0/1 selection maximizing sum of effectiveness with sum of cost <= budget.
/// Ties: fewer nodes, then lexicographically smallest sorted id set.
inline NodeSelection select_knapsack(const SkillsGraph& graph, double budget,
                                     KnapsackOptions options = {}) {
  detail::check_budget(budget);
  const std::size_t n = graph.node_count();

  std::vector<std::int64_t> cost(n);
  std::int64_t cost_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cost[i] = detail::to_cents(graph.node(i).cost, "cost of '" + graph.node(i).id + "'");
    cost_sum += cost[i];
  }
  const auto budget_cents =
      static_cast<std::int64_t>(std::floor(budget * 100.0 + 1e-7));
  const std::int64_t cap = std::min(budget_cents, cost_sum);
  const std::size_t width = static_cast<std::size_t>(cap) + 1;
  if (n > 0 && static_cast<double>(width) * static_cast<double>(n) >
                   static_cast<double>(options.max_table_cells))
    throw Error(ErrorKind::CostResolutionExceeded,
                "knapsack table of " + std::to_string(n) + "x" +
                    std::to_string(width) + " cells exceeds the configured bound");

  // keep[k * width + c]: item k taken in the best solution of items 0..k at c.
  std::vector<std::uint8_t> keep(n * width, 0);
  std::vector<double> obj(width, 0.0), next_obj(width);
  std::vector<std::size_t> count(width, 0), next_count(width);

  auto members = [&](std::size_t rows, std::size_t c) {
    std::vector<std::string> ids;
    for (std::size_t k = rows; k-- > 0;) {
      if (keep[k * width + c]) {
        ids.push_back(graph.node(k).id);
        c -= static_cast<std::size_t>(cost[k]);
      }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  for (std::size_t k = 0; k < n; ++k) {
    const double f = graph.node(k).effectiveness;
    const auto ck = static_cast<std::size_t>(cost[k]);
    for (std::size_t c = 0; c < width; ++c) {
      next_obj[c] = obj[c];
      next_count[c] = count[c];
      if (ck > c) continue;
      const double with = obj[c - ck] + f;
      const std::size_t with_count = count[c - ck] + 1;
      bool take;
      if (!detail::objective_tie(with, obj[c])) {
        take = with > obj[c];
      } else if (with_count != count[c]) {
        take = with_count < count[c];
      } else {
        auto taken = members(k, c - ck);
        taken.push_back(graph.node(k).id);
        std::sort(taken.begin(), taken.end());
        take = taken < members(k, c);
      }
      if (take) {
        next_obj[c] = with;
        next_count[c] = with_count;
        keep[k * width + c] = 1;
      }
    }
    std::swap(obj, next_obj);
    std::swap(count, next_count);
  }

  std::vector<bool> in(n, false);
  for (std::size_t k = n, c = width - 1; k-- > 0;) {
    if (keep[k * width + c]) {
      in[k] = true;
      c -= static_cast<std::size_t>(cost[k]);
    }
  }
  NodeSelection sel;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) continue;
    sel.chosen.push_back(graph.node(i).id);
    sel.total_cost += graph.node(i).cost;
    sel.objective += graph.node(i).effectiveness;
  }
  return sel;
}

/// Greedy by descending effectiveness (ties by id); optimal for the linear
/// objective. Unbounded capacity is treated as the whole budget. Nodes with
/// zero effectiveness receive nothing.
inline AllocationPlan allocate_fractional(const SkillsGraph& graph, double budget) {
  detail::check_budget(budget);
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& na = graph.node(a);
    const auto& nb = graph.node(b);
    if (na.effectiveness != nb.effectiveness) return na.effectiveness > nb.effectiveness;
    return na.id < nb.id;
  });

  std::vector<double> r(n, 0.0);
  double remaining = budget;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const auto& node = graph.node(i);
    if (node.effectiveness <= 0.0) break;
    const double cap = node.capacity.value_or(budget);
    r[i] = std::min(cap, remaining);
    remaining -= r[i];
  }

  AllocationPlan plan;
  for (std::size_t i = 0; i < n; ++i) {
    plan.allocation.emplace_back(graph.node(i).id, r[i]);
    plan.objective += graph.node(i).effectiveness * r[i];
  }
  return plan;
}

/// Sum of f(v) * r(v) over the plan's entries.
inline double objective_value(const AllocationPlan& plan, const SkillsGraph& graph) {
  double total = 0.0;
  for (const auto& [id, r] : plan.allocation)
    total += graph.node(graph.require_index(id)).effectiveness * r;
  return total;
}

struct AllocationResult {
  AllocationRequest request;
  std::optional<NodeSelection> selection;
  std::optional<AllocationPlan> plan;

  double objective() const {
    return selection ? selection->objective : plan ? plan->objective : 0.0;
  }
};

inline AllocationResult allocate(const SkillsGraph& graph,
                                 const AllocationRequest& request) {
  AllocationResult result{request, std::nullopt, std::nullopt};
  if (request.mode == AllocationMode::Select)
    result.selection = select_knapsack(graph, request.budget);
  else
    result.plan = allocate_fractional(graph, request.budget);
  return result;
}

}  // namespace mcbsg
