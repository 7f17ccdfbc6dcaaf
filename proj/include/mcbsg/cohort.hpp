#pragma once

// Participant cohort: record schema, CSV ingestion, marginal summaries and a
// seeded synthetic generator calibrated to the published participation
// tables.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mcbsg/error.hpp"
#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/rng.hpp"

namespace mcbsg::cohort {

inline constexpr std::string_view kHeader =
    "student_id,gender,ethnicity,education_level,region,mentoring_sessions,workshop_hours,"
    "research_projects,employed";

inline constexpr std::array<std::string_view, 2> kGenders{"M", "F"};
inline constexpr std::array<std::string_view, 4> kEthnicities{"african_american", "hispanic",
                                                              "asian", "other"};
inline constexpr std::array<std::string_view, 4> kEducationLevels{"phd", "masters",
                                                                  "undergraduate", "high_school"};

struct CohortRecord {
  std::string student_id;
  std::optional<std::string> gender;
  std::optional<std::string> ethnicity;
  std::optional<std::string> education_level;
  std::optional<std::string> region;
  std::optional<std::int64_t> mentoring_sessions;
  std::optional<double> workshop_hours;
  std::optional<std::int64_t> research_projects;
  int employed = 0;

  bool operator==(const CohortRecord&) const = default;
};

using Dataset = std::vector<CohortRecord>;

enum class OutcomeModel {
  // employed ~ Bernoulli(p_engaged) for the engaged subgroup, p_other otherwise
  Bernoulli,
  // employed = [mentoring + education bonus >= cutoff], flipped with label_noise
  Planted,
};

struct CohortProfile {
  std::array<double, 4> education{};              // kEducationLevels order
  std::array<std::array<double, 2>, 4> gender{};  // per education: (M, F)
  std::array<double, 4> ethnicity{};              // kEthnicities order
  double engaged_fraction = 0.70;
  double p_engaged = 0.85;
  double p_other = 0.0;
  std::vector<std::string> regions{"india", "africa", "europe", "usa"};

  std::int64_t mentoring_max = 20;    // base sessions ~ U{0..mentoring_max}
  std::int64_t mentoring_shift = 10;  // added for the engaged subgroup
  std::int64_t research_max = 3;      // research projects ~ U{0..research_max}
  double missing_rate = 0.0;          // per optional numeric field

  OutcomeModel outcome = OutcomeModel::Bernoulli;
  std::array<double, 4> planted_bonus{14.0, 10.0, 0.0, 0.0};
  double planted_cutoff = 16.0;
  double label_noise = 0.03;

  static constexpr double kTargetEmployment = 0.8263;

  /// Education (17, 229, 122, 12)/380 with the per-level gender split,
  /// ethnicity (36.32, 23.68, 21.05, 18.95)%, 85% employment for engaged
  /// participants and the remainder solved so the overall rate is 82.63%.
  static CohortProfile defaults() {
    CohortProfile p;
    p.education = {17.0 / 380, 229.0 / 380, 122.0 / 380, 12.0 / 380};
    p.gender = {{{11.0 / 17, 6.0 / 17},
                 {110.0 / 229, 119.0 / 229},
                 {48.0 / 122, 74.0 / 122},
                 {2.0 / 12, 10.0 / 12}}};
    p.ethnicity = {0.3632, 0.2368, 0.2105, 0.1895};
    p.engaged_fraction = 0.70;
    p.p_engaged = 0.85;
    p.p_other = (kTargetEmployment - p.engaged_fraction * p.p_engaged) / (1.0 - p.engaged_fraction);
    return p;
  }

  /// Same demographics, with employment driven by mentoring and education.
  static CohortProfile planted() {
    CohortProfile p = defaults();
    p.outcome = OutcomeModel::Planted;
    return p;
  }

  void validate() const {
    auto check_vector = [](const auto& v, const std::string& what) {
      double sum = 0.0;
      for (double x : v) {
        if (!(x >= 0.0 && x <= 1.0))
          throw Error(ErrorKind::InvalidProfile, what + " has an entry outside [0, 1]");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidProfile, what + " does not sum to 1");
    };
    check_vector(education, "education");
    check_vector(ethnicity, "ethnicity");
    for (std::size_t i = 0; i < gender.size(); ++i)
      check_vector(gender[i], "gender given " + std::string(kEducationLevels[i]));
    for (double x : {engaged_fraction, p_engaged, p_other, missing_rate, label_noise})
      if (!(x >= 0.0 && x <= 1.0))
        throw Error(ErrorKind::InvalidProfile, "probability outside [0, 1]");
    if (regions.empty()) throw Error(ErrorKind::InvalidProfile, "no regions");
    if (mentoring_max < 0 || mentoring_shift < 0 || research_max < 0)
      throw Error(ErrorKind::InvalidProfile, "count ranges must be >= 0");
  }
};

// ---------------------------------------------------------------- CSV ---

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] inline void violation(std::size_t row, std::string_view column,
                                   const std::string& reason) {
  throw Error(ErrorKind::SchemaViolation,
              "row " + std::to_string(row) + ", column " + std::string(column) + ": " + reason,
              {std::to_string(row), std::string(column), reason});
}

template <std::size_t N>
std::optional<std::string> enum_field(const std::string& cell,
                                      const std::array<std::string_view, N>& allowed,
                                      std::size_t row, std::string_view column) {
  if (cell.empty()) return std::nullopt;
  for (auto a : allowed)
    if (cell == a) return cell;
  violation(row, column, "unexpected value '" + cell + "'");
}

inline std::optional<std::int64_t> int_field(const std::string& cell, std::size_t row,
                                             std::string_view column) {
  if (cell.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || v < 0)
    violation(row, column, "expected a nonnegative integer, got '" + cell + "'");
  return v;
}

inline std::optional<double> real_field(const std::string& cell, std::size_t row,
                                        std::string_view column) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !(v >= 0.0) ||
      !std::isfinite(v))
    violation(row, column, "expected a nonnegative number, got '" + cell + "'");
  return v;
}

}  // namespace detail

/// Row numbers in errors count data rows from 1 (the header is row 0).
inline Dataset parse_cohort_csv(std::string_view text) {
  Dataset out;
  std::set<std::string> ids;
  std::size_t pos = 0;
  std::size_t row = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kHeader) detail::violation(0, "header", "header does not match the schema");
      header_seen = true;
      continue;
    }
    if (line.empty()) {
      if (pos >= text.size()) break;
      ++row;
      detail::violation(row, "student_id", "empty line");
    }
    ++row;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != 9)
      detail::violation(row, "*", "expected 9 fields, got " + std::to_string(cells.size()));

    CohortRecord r;
    r.student_id = cells[0];
    if (r.student_id.empty()) detail::violation(row, "student_id", "missing id");
    if (!ids.insert(r.student_id).second)
      throw Error(ErrorKind::DuplicateStudentId, "duplicate student_id '" + r.student_id + "'",
                  {r.student_id});
    r.gender = detail::enum_field(cells[1], kGenders, row, "gender");
    r.ethnicity = detail::enum_field(cells[2], kEthnicities, row, "ethnicity");
    r.education_level = detail::enum_field(cells[3], kEducationLevels, row, "education_level");
    if (!cells[4].empty()) r.region = cells[4];
    r.mentoring_sessions = detail::int_field(cells[5], row, "mentoring_sessions");
    r.workshop_hours = detail::real_field(cells[6], row, "workshop_hours");
    r.research_projects = detail::int_field(cells[7], row, "research_projects");
    if (cells[8] == "1")
      r.employed = 1;
    else if (cells[8] == "0")
      r.employed = 0;
    else
      detail::violation(row, "employed", "expected 0 or 1, got '" + cells[8] + "'");
    out.push_back(std::move(r));
  }
  if (!header_seen) detail::violation(0, "header", "empty file");
  return out;
}

inline std::string to_csv(const Dataset& data) {
  std::string out(kHeader);
  out += '\n';
  auto opt = [](const auto& v, auto fmt) { return v ? fmt(*v) : std::string(); };
  auto str = [](const std::string& s) { return s; };
  auto integer = [](std::int64_t v) { return std::to_string(v); };
  for (const auto& r : data) {
    out += r.student_id + ',' + opt(r.gender, str) + ',' + opt(r.ethnicity, str) + ',' +
           opt(r.education_level, str) + ',' + opt(r.region, str) + ',' +
           opt(r.mentoring_sessions, integer) + ',' +
           opt(r.workshop_hours, detail::format_number) + ',' +
           opt(r.research_projects, integer) + ',' + std::to_string(r.employed) + '\n';
  }
  return out;
}

// ---------------------------------------------------------- generator ---

/// Seeded synthetic cohort. Every record consumes the same number of draws,
/// so a given (n, seed, profile) reproduces byte-identical output.
inline Dataset generate_cohort(std::size_t n, std::uint64_t seed, const CohortProfile& profile) {
  profile.validate();
  Rng rng(seed);
  const std::vector<double> education(profile.education.begin(), profile.education.end());
  const std::vector<double> ethnicity(profile.ethnicity.begin(), profile.ethnicity.end());

  Dataset out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CohortRecord r;
    char id[24];
    std::snprintf(id, sizeof id, "S%05zu", i + 1);
    r.student_id = id;

    const std::size_t edu = rng.categorical(education);
    r.education_level = std::string(kEducationLevels[edu]);
    const auto& g = profile.gender[edu];
    r.gender = std::string(kGenders[rng.categorical({g[0], g[1]})]);
    r.ethnicity = std::string(kEthnicities[rng.categorical(ethnicity)]);
    r.region = profile.regions[rng.below(profile.regions.size())];

    const bool engaged = rng.bernoulli(profile.engaged_fraction);
    std::int64_t mentoring = rng.between(0, profile.mentoring_max);
    if (engaged) mentoring += profile.mentoring_shift;
    r.mentoring_sessions = mentoring;
    // Tenths of an hour in [0.5, 40.0] for engaged participants.
    const std::int64_t tenths = rng.between(5, 400);
    r.workshop_hours = engaged ? static_cast<double>(tenths) / 10.0 : 0.0;
    r.research_projects = rng.between(0, profile.research_max);

    const double u = rng.uniform();
    if (profile.outcome == OutcomeModel::Bernoulli) {
      r.employed = u < (engaged ? profile.p_engaged : profile.p_other) ? 1 : 0;
    } else {
      const bool planted =
          static_cast<double>(mentoring) + profile.planted_bonus[edu] >= profile.planted_cutoff;
      r.employed = (planted != (u < profile.label_noise)) ? 1 : 0;
    }

    const double miss_mentoring = rng.uniform();
    const double miss_workshop = rng.uniform();
    if (miss_mentoring < profile.missing_rate) r.mentoring_sessions.reset();
    if (miss_workshop < profile.missing_rate) r.workshop_hours.reset();
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------- summaries ---

struct CategoryCount {
  std::string category;
  std::size_t count = 0;
  double proportion = 0.0;
};

struct FieldSummary {
  std::string field;
  std::vector<CategoryCount> categories;
  std::size_t missing = 0;
};

struct MarginalReport {
  std::size_t n = 0;
  std::vector<FieldSummary> fields;
  std::optional<double> employment_rate;
  std::size_t engaged_count = 0;
  std::optional<double> engaged_employment_rate;
  std::int64_t mentoring_threshold = 0;
};

/// Exact counts per categorical field (proportions over non-missing values)
/// plus employment overall and for the engaged subgroup: workshop hours > 0
/// and mentoring sessions >= mentoring_threshold. The default threshold is
/// the median of the generator's base mentoring range.
inline MarginalReport summarize(const Dataset& data, std::int64_t mentoring_threshold = 10) {
  MarginalReport report;
  report.n = data.size();
  report.mentoring_threshold = mentoring_threshold;

  auto field = [&](std::string name, auto fixed, auto get) {
    FieldSummary s;
    s.field = std::move(name);
    std::map<std::string, std::size_t> counts;
    for (auto c : fixed) counts[std::string(c)] = 0;
    std::size_t present = 0;
    for (const auto& r : data) {
      const auto& v = get(r);
      if (!v) {
        ++s.missing;
        continue;
      }
      ++counts[*v];
      ++present;
    }
    // Fixed vocabulary first in canonical order, then any extra values sorted.
    std::vector<std::string> order(fixed.begin(), fixed.end());
    for (const auto& [k, _] : counts)
      if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);
    for (const auto& k : order)
      s.categories.push_back({k, counts[k],
                              present ? static_cast<double>(counts[k]) / present : 0.0});
    report.fields.push_back(std::move(s));
  };
  field("gender", kGenders, [](const CohortRecord& r) -> const auto& { return r.gender; });
  field("ethnicity", kEthnicities, [](const CohortRecord& r) -> const auto& { return r.ethnicity; });
  field("education_level", kEducationLevels,
        [](const CohortRecord& r) -> const auto& { return r.education_level; });
  field("region", std::vector<std::string>{},
        [](const CohortRecord& r) -> const auto& { return r.region; });

  std::size_t employed = 0, engaged_employed = 0;
  for (const auto& r : data) {
    employed += r.employed;
    const bool engaged = r.workshop_hours && *r.workshop_hours > 0.0 && r.mentoring_sessions &&
                         *r.mentoring_sessions >= mentoring_threshold;
    if (engaged) {
      ++report.engaged_count;
      engaged_employed += r.employed;
    }
  }
  if (!data.empty())
    report.employment_rate = static_cast<double>(employed) / static_cast<double>(data.size());
  if (report.engaged_count > 0)
    report.engaged_employment_rate =
        static_cast<double>(engaged_employed) / static_cast<double>(report.engaged_count);
  return report;
}

inline const FieldSummary& field_summary(const MarginalReport& report, std::string_view name) {
  for (const auto& f : report.fields)
    if (f.field == name) return f;
  throw Error(ErrorKind::InvalidConfig, "no summary for field '" + std::string(name) + "'");
}

inline double proportion(const MarginalReport& report, std::string_view field,
                         std::string_view category) {
  for (const auto& c : field_summary(report, field).categories)
    if (c.category == category) return c.proportion;
  return 0.0;
}

inline nlohmann::ordered_json report_to_json(const MarginalReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  auto fields = nlohmann::ordered_json::object();
  for (const auto& f : report.fields) {
    auto cats = nlohmann::ordered_json::object();
    for (const auto& c : f.categories)
      cats[c.category] = {{"count", c.count}, {"proportion", c.proportion}};
    fields[f.field] = {{"categories", std::move(cats)}, {"missing", f.missing}};
  }
  j["fields"] = std::move(fields);
  j["employment_rate"] = report.employment_rate ? nlohmann::ordered_json(*report.employment_rate)
                                                : nlohmann::ordered_json(nullptr);
  j["engaged"] = {{"definition", "workshop_hours > 0 and mentoring_sessions >= " +
                                     std::to_string(report.mentoring_threshold)},
                  {"count", report.engaged_count},
                  {"employment_rate", report.engaged_employment_rate
                                          ? nlohmann::ordered_json(*report.engaged_employment_rate)
                                          : nlohmann::ordered_json(nullptr)}};
  return j;
}

// ------------------------------------------------------- profile file ---

inline nlohmann::ordered_json profile_to_json(const CohortProfile& p) {
  nlohmann::ordered_json j;
  auto labeled = [](const auto& names, const auto& values) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < names.size(); ++i) o[std::string(names[i])] = values[i];
    return o;
  };
  j["education"] = labeled(kEducationLevels, p.education);
  nlohmann::ordered_json g;
  for (std::size_t i = 0; i < kEducationLevels.size(); ++i)
    g[std::string(kEducationLevels[i])] = labeled(kGenders, p.gender[i]);
  j["gender_given_education"] = std::move(g);
  j["ethnicity"] = labeled(kEthnicities, p.ethnicity);
  j["engaged_fraction"] = p.engaged_fraction;
  j["p_engaged"] = p.p_engaged;
  j["p_other"] = p.p_other;
  j["regions"] = p.regions;
  j["mentoring_max"] = p.mentoring_max;
  j["mentoring_shift"] = p.mentoring_shift;
  j["research_max"] = p.research_max;
  j["missing_rate"] = p.missing_rate;
  j["outcome_model"] = p.outcome == OutcomeModel::Bernoulli ? "bernoulli" : "planted";
  j["planted_bonus"] = labeled(kEducationLevels, p.planted_bonus);
  j["planted_cutoff"] = p.planted_cutoff;
  j["label_noise"] = p.label_noise;
  return j;
}

/// Keys absent from the file keep their default-profile values.
inline CohortProfile profile_from_json(const nlohmann::ordered_json& j) {
  CohortProfile p = CohortProfile::defaults();
  try {
    auto read_labeled = [&](const char* key, const auto& names, auto& values) {
      if (!j.contains(key)) return;
      for (std::size_t i = 0; i < names.size(); ++i)
        values[i] = j.at(key).at(std::string(names[i])).template get<double>();
    };
    read_labeled("education", kEducationLevels, p.education);
    read_labeled("ethnicity", kEthnicities, p.ethnicity);
    read_labeled("planted_bonus", kEducationLevels, p.planted_bonus);
    if (j.contains("gender_given_education"))
      for (std::size_t i = 0; i < kEducationLevels.size(); ++i)
        for (std::size_t k = 0; k < kGenders.size(); ++k)
          p.gender[i][k] = j.at("gender_given_education")
                               .at(std::string(kEducationLevels[i]))
                               .at(std::string(kGenders[k]))
                               .get<double>();
    auto num = [&](const char* key, auto& target) {
      if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    num("engaged_fraction", p.engaged_fraction);
    num("p_engaged", p.p_engaged);
    num("p_other", p.p_other);
    num("mentoring_max", p.mentoring_max);
    num("mentoring_shift", p.mentoring_shift);
    num("research_max", p.research_max);
    num("missing_rate", p.missing_rate);
    num("planted_cutoff", p.planted_cutoff);
    num("label_noise", p.label_noise);
    if (j.contains("regions")) p.regions = j.at("regions").get<std::vector<std::string>>();
    if (j.contains("outcome_model")) {
      const auto m = j.at("outcome_model").get<std::string>();
      if (m == "bernoulli")
        p.outcome = OutcomeModel::Bernoulli;
      else if (m == "planted")
        p.outcome = OutcomeModel::Planted;
      else
        throw Error(ErrorKind::InvalidProfile, "unknown outcome_model '" + m + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidProfile, e.what());
  }
  p.validate();
  return p;
}

// ------------------------------------------------------ learner bridge ---

/// Feature table for the outcome model; student_id is carried as row id only.
inline learner::RawTable to_raw_table(const Dataset& data) {
  using learner::ColumnKind;
  learner::RawTable t;
  auto cat = [&](const char* name, auto get) {
    learner::RawColumn c{name, ColumnKind::Categorical, {}, {}};
    for (const auto& r : data) c.categorical.push_back(get(r));
    t.columns.push_back(std::move(c));
  };
  auto num = [&](const char* name, auto get) {
    learner::RawColumn c{name, ColumnKind::Numeric, {}, {}};
    for (const auto& r : data) c.numeric.push_back(get(r));
    t.columns.push_back(std::move(c));
  };
  cat("gender", [](const CohortRecord& r) { return r.gender; });
  cat("ethnicity", [](const CohortRecord& r) { return r.ethnicity; });
  cat("education_level", [](const CohortRecord& r) { return r.education_level; });
  cat("region", [](const CohortRecord& r) { return r.region; });
  num("mentoring_sessions", [](const CohortRecord& r) -> std::optional<double> {
    if (!r.mentoring_sessions) return std::nullopt;
    return static_cast<double>(*r.mentoring_sessions);
  });
  num("workshop_hours", [](const CohortRecord& r) { return r.workshop_hours; });
  num("research_projects", [](const CohortRecord& r) -> std::optional<double> {
    if (!r.research_projects) return std::nullopt;
    return static_cast<double>(*r.research_projects);
  });
  for (const auto& r : data) {
    t.labels.push_back(r.employed);
    t.row_ids.push_back(r.student_id);
  }
  return t;
}

}  // namespace mcbsg::cohort
