#pragma once

// Raw tabular data and the fitted preprocessing that turns it into a numeric
// feature matrix:
//   numeric     -> median impute, 1.5 IQR winsorize, min-max scale to [0, 1]
//   categorical -> mode impute, one-hot over the fit-row categories
// Every statistic comes from the fit rows only.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcbsg/error.hpp"

namespace mcbsg::learner {

enum class ColumnKind { Numeric, Categorical };

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<std::optional<double>> numeric;
  std::vector<std::optional<std::string>> categorical;

  std::size_t size() const {
    return kind == ColumnKind::Numeric ? numeric.size() : categorical.size();
  }
};

struct RawTable {
  std::vector<RawColumn> columns;
  std::vector<int> labels;
  std::vector<std::string> row_ids;

  std::size_t rows() const { return labels.size(); }
};

struct ColumnTransform {
  std::string column;
  ColumnKind kind = ColumnKind::Numeric;
  // numeric
  double median = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  double min = 0.0;
  double max = 0.0;
  // categorical
  std::string mode;
  std::vector<std::string> categories;  // sorted
};

struct PreparedDataset {
  std::vector<std::string> feature_names;
  std::vector<std::string> feature_source;  // originating raw column per feature
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string> row_ids;
  std::vector<ColumnTransform> transforms;
  std::vector<std::string> warnings;

  std::size_t size() const { return rows.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
};

/// Linear-interpolation quantile of sorted values (numpy's default).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline std::vector<ColumnTransform> fit_preprocessing(const RawTable& raw,
                                                      const std::vector<std::size_t>& fit_rows) {
  if (fit_rows.empty()) throw Error(ErrorKind::EmptyFitSet, "no rows to fit preprocessing on");
  std::vector<ColumnTransform> out;
  for (const auto& col : raw.columns) {
    ColumnTransform t;
    t.column = col.name;
    t.kind = col.kind;
    if (col.kind == ColumnKind::Numeric) {
      std::vector<double> values;
      for (std::size_t r : fit_rows)
        if (col.numeric.at(r)) values.push_back(*col.numeric[r]);
      if (values.empty())
        throw Error(ErrorKind::AllMissingColumn, "column '" + col.name + "' has no values",
                    {col.name});
      std::sort(values.begin(), values.end());
      t.median = quantile_sorted(values, 0.5);
      const double q1 = quantile_sorted(values, 0.25);
      const double q3 = quantile_sorted(values, 0.75);
      t.lower_fence = q1 - 1.5 * (q3 - q1);
      t.upper_fence = q3 + 1.5 * (q3 - q1);
      // Imputed values sit at the median, inside the fences, so they never
      // move the post-winsorizing extremes.
      t.min = std::clamp(values.front(), t.lower_fence, t.upper_fence);
      t.max = std::clamp(values.back(), t.lower_fence, t.upper_fence);
    } else {
      std::map<std::string, std::size_t> freq;
      for (std::size_t r : fit_rows)
        if (col.categorical.at(r)) ++freq[*col.categorical[r]];
      if (freq.empty())
        throw Error(ErrorKind::AllMissingColumn, "column '" + col.name + "' has no values",
                    {col.name});
      std::size_t best = 0;
      for (const auto& [category, n] : freq) {
        t.categories.push_back(category);
        if (n > best) {  // map order: ties keep the smallest category
          best = n;
          t.mode = category;
        }
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline double scale_value(const ColumnTransform& t, std::optional<double> value) {
  double x = value.value_or(t.median);
  x = std::clamp(x, t.lower_fence, t.upper_fence);
  if (t.max <= t.min) return 0.0;
  return std::clamp((x - t.min) / (t.max - t.min), 0.0, 1.0);
}

inline PreparedDataset apply_preprocessing(const RawTable& raw,
                                           const std::vector<ColumnTransform>& transforms) {
  PreparedDataset out;
  out.transforms = transforms;
  out.labels = raw.labels;
  out.row_ids = raw.row_ids;
  for (const auto& t : transforms) {
    if (t.kind == ColumnKind::Numeric) {
      out.feature_names.push_back(t.column);
      out.feature_source.push_back(t.column);
    } else {
      for (const auto& c : t.categories) {
        out.feature_names.push_back(t.column + "=" + c);
        out.feature_source.push_back(t.column);
      }
    }
  }
  auto find_column = [&](const std::string& name) -> const RawColumn& {
    for (const auto& col : raw.columns)
      if (col.name == name) return col;
    throw Error(ErrorKind::MissingFeature, "raw data lacks column '" + name + "'", {name});
  };

  out.rows.assign(raw.rows(), {});
  for (auto& row : out.rows) row.reserve(out.feature_names.size());
  for (const auto& t : transforms) {
    const RawColumn& col = find_column(t.column);
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      auto& row = out.rows[r];
      if (t.kind == ColumnKind::Numeric) {
        row.push_back(scale_value(t, col.numeric.at(r)));
        continue;
      }
      const std::string value = col.categorical.at(r).value_or(t.mode);
      bool seen = false;
      for (const auto& c : t.categories) {
        row.push_back(c == value ? 1.0 : 0.0);
        seen = seen || c == value;
      }
      if (!seen) {
        const std::string id = r < raw.row_ids.size() ? raw.row_ids[r] : std::to_string(r);
        out.warnings.push_back("row " + id + ": unseen " + t.column + " category '" + value +
                               "' encoded as all zeros");
      }
    }
  }
  return out;
}

/// Fits on fit_rows and transforms every row of the table.
inline PreparedDataset preprocess(const RawTable& raw, const std::vector<std::size_t>& fit_rows) {
  return apply_preprocessing(raw, fit_preprocessing(raw, fit_rows));
}

inline PreparedDataset subset(const PreparedDataset& data, const std::vector<std::size_t>& rows) {
  PreparedDataset out;
  out.feature_names = data.feature_names;
  out.feature_source = data.feature_source;
  out.transforms = data.transforms;
  for (std::size_t r : rows) {
    out.rows.push_back(data.rows.at(r));
    out.labels.push_back(data.labels.at(r));
    if (r < data.row_ids.size()) out.row_ids.push_back(data.row_ids[r]);
  }
  return out;
}

inline nlohmann::ordered_json transforms_to_json(const std::vector<ColumnTransform>& transforms) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : transforms) {
    if (t.kind == ColumnKind::Numeric)
      out.push_back({{"column", t.column},
                     {"kind", "numeric"},
                     {"median", t.median},
                     {"lower_fence", t.lower_fence},
                     {"upper_fence", t.upper_fence},
                     {"min", t.min},
                     {"max", t.max}});
    else
      out.push_back({{"column", t.column},
                     {"kind", "categorical"},
                     {"mode", t.mode},
                     {"categories", t.categories}});
  }
  return out;
}

inline std::vector<ColumnTransform> transforms_from_json(const nlohmann::ordered_json& j) {
  std::vector<ColumnTransform> out;
  try {
    for (const auto& jt : j) {
      ColumnTransform t;
      t.column = jt.at("column").get<std::string>();
      if (jt.at("kind").get<std::string>() == "numeric") {
        t.kind = ColumnKind::Numeric;
        t.median = jt.at("median").get<double>();
        t.lower_fence = jt.at("lower_fence").get<double>();
        t.upper_fence = jt.at("upper_fence").get<double>();
        t.min = jt.at("min").get<double>();
        t.max = jt.at("max").get<double>();
      } else {
        t.kind = ColumnKind::Categorical;
        t.mode = jt.at("mode").get<std::string>();
        t.categories = jt.at("categories").get<std::vector<std::string>>();
      }
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("preprocessing block: ") + e.what());
  }
  return out;
}

}  // namespace mcbsg::learner
