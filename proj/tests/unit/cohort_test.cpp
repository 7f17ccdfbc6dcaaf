#include <gtest/gtest.h>

#include "mcbsg/cohort.hpp"
#include "mcbsg/pipeline.hpp"

using namespace mcbsg;
using namespace mcbsg::cohort;

namespace {

std::string with_header(const std::string& body) { return std::string(kHeader) + "\n" + body; }

}  // namespace

TEST(CohortCsv, ParsesWellFormedRows) {
  const auto d = parse_cohort_csv(with_header(
      "S1,F,asian,masters,india,3,2.5,1,1\n"
      "S2,M,hispanic,phd,usa,,0,0,0\n"
      "S3,,other,high_school,,7,,2,1\n"));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_FALSE(d[1].mentoring_sessions.has_value());
  EXPECT_FALSE(d[2].gender.has_value());
  EXPECT_DOUBLE_EQ(*d[0].workshop_hours, 2.5);
  EXPECT_EQ(to_csv(d), with_header("S1,F,asian,masters,india,3,2.5,1,1\n"
                                   "S2,M,hispanic,phd,usa,,0,0,0\n"
                                   "S3,,other,high_school,,7,,2,1\n"));
}

TEST(CohortCsv, SchemaViolationsNameTheRow) {
  try {
    parse_cohort_csv(with_header("S1,F,asian,masters,india,3,2.5,1,1\nS2,F,asian,postdoc,india,3,2,1,1\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SchemaViolation);
    EXPECT_EQ(e.context().at(0), "2");
    EXPECT_EQ(e.context().at(1), "education_level");
  }
  EXPECT_THROW(parse_cohort_csv("id,x\n"), Error);
  EXPECT_THROW(parse_cohort_csv(with_header("S1,F,asian,masters,india,-3,2,1,1\n")), Error);
  EXPECT_THROW(parse_cohort_csv(with_header("S1,F,asian,masters,india,3,2,1,2\n")), Error);
  EXPECT_THROW(parse_cohort_csv(with_header("S1,F,asian,masters,india,3,2,1\n")), Error);
  try {
    parse_cohort_csv(with_header("S1,F,asian,masters,india,3,2,1,1\nS1,F,asian,masters,india,3,2,1,1\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateStudentId);
  }
}

TEST(CohortGen, EmptyAndDeterministic) {
  EXPECT_TRUE(generate_cohort(0, 1, CohortProfile::defaults()).empty());
  EXPECT_EQ(to_csv(generate_cohort(500, 9, CohortProfile::defaults())),
            to_csv(generate_cohort(500, 9, CohortProfile::defaults())));
  EXPECT_NE(to_csv(generate_cohort(500, 9, CohortProfile::defaults())),
            to_csv(generate_cohort(500, 10, CohortProfile::defaults())));
  const auto d = generate_cohort(300, 4, CohortProfile::planted());
  EXPECT_EQ(to_csv(parse_cohort_csv(to_csv(d))), to_csv(d));
}

TEST(CohortGen, MixtureSolveForOtherRate) {
  const auto p = CohortProfile::defaults();
  EXPECT_NEAR(p.engaged_fraction * p.p_engaged + (1 - p.engaged_fraction) * p.p_other, 0.8263,
              1e-12);
  EXPECT_NEAR(p.p_other, (0.8263 - 0.85 * 0.70) / 0.30, 1e-12);
}

TEST(CohortGen, CalibratedMarginals) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto report = summarize(generate_cohort(10000, seed, CohortProfile::defaults()));
    const double edu[] = {17.0 / 380, 229.0 / 380, 122.0 / 380, 12.0 / 380};
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_NEAR(proportion(report, "education_level", kEducationLevels[i]), edu[i], 0.02);
    const double eth[] = {0.3632, 0.2368, 0.2105, 0.1895};
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_NEAR(proportion(report, "ethnicity", kEthnicities[i]), eth[i], 0.02);
    EXPECT_NEAR(*report.employment_rate, 0.8263, 0.02);
    EXPECT_NEAR(*report.engaged_employment_rate, 0.85, 0.03);
  }
}

TEST(CohortSummary, EmptyDataset) {
  const auto report = summarize({});
  EXPECT_EQ(report.n, 0u);
  EXPECT_FALSE(report.employment_rate.has_value());
  EXPECT_FALSE(report.engaged_employment_rate.has_value());
}

TEST(CohortProfile, JsonRoundTripAndValidation) {
  const auto p = CohortProfile::planted();
  EXPECT_EQ(profile_to_json(profile_from_json(profile_to_json(p))).dump(), profile_to_json(p).dump());
  auto bad = CohortProfile::defaults();
  bad.education = {0.5, 0.5, 0.5, 0.0};
  EXPECT_THROW(generate_cohort(10, 1, bad), Error);
}

// Regression fixture for the planted cohort at n = 386, seed 42, full grid.
TEST(Pipeline, PlantedSeed42Fixture) {
  const auto data = generate_cohort(386, 42, CohortProfile::planted());
  TrainingOptions options;
  options.seed = 42;
  const auto r = train_outcome_model(data, options);
  EXPECT_EQ(r.search.cv_table.size(), 260u);
  EXPECT_EQ(r.train.size(), 270u);
  EXPECT_EQ(r.search.best_params, (learner::TreeParams{3, 10, learner::Criterion::Entropy}));
  EXPECT_DOUBLE_EQ(r.search.test_accuracy, 112.0 / 116.0);
  EXPECT_GE(r.search.test_accuracy, 0.90);
}

TEST(Pipeline, ModelBundleRoundTrip) {
  const auto data = generate_cohort(200, 3, CohortProfile::planted());
  TrainingOptions options;
  options.grid = {{3, 4}, {2, 5}, {learner::Criterion::Gini}};
  const auto r = train_outcome_model(data, options);
  const auto bundle = model_bundle_from_json(model_bundle_json(r));
  const auto again =
      learner::apply_preprocessing(cohort::to_raw_table(data), bundle.transforms);
  for (std::size_t k = 0; k < r.split.test.size(); ++k)
    EXPECT_EQ(learner::predict(bundle.tree, again.rows[r.split.test[k]]),
              learner::predict(r.search.model, r.test.rows[k]));
}
