#include <gtest/gtest.h>

#include "mcbsg/learner/dataset.hpp"
#include "mcbsg/learner/split.hpp"

using namespace mcbsg;
using namespace mcbsg::learner;

namespace {

RawTable numeric_table(std::vector<std::optional<double>> values) {
  RawTable t;
  RawColumn c;
  c.name = "x";
  c.numeric = std::move(values);
  t.labels.assign(c.numeric.size(), 0);
  t.columns.push_back(std::move(c));
  return t;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

}  // namespace

TEST(Preprocess, MinMaxScales) {
  const auto d = preprocess(numeric_table({0.0, 5.0, 10.0}), all_rows(3));
  EXPECT_DOUBLE_EQ(d.rows[0][0], 0.0);
  EXPECT_DOUBLE_EQ(d.rows[1][0], 0.5);
  EXPECT_DOUBLE_EQ(d.rows[2][0], 1.0);
}

TEST(Preprocess, MedianImputation) {
  const auto d = preprocess(numeric_table({1.0, 2.0, 3.0, std::nullopt}), all_rows(4));
  EXPECT_DOUBLE_EQ(d.transforms[0].median, 2.0);
  EXPECT_DOUBLE_EQ(d.rows[3][0], d.rows[1][0]);
}

TEST(Preprocess, WinsorizesOutliers) {
  // Q1 = 2, Q3 = 4 (type 7), fences [-1, 7]; 100 clamps to 7
  const auto d = preprocess(numeric_table({1, 2, 3, 4, 100}), all_rows(5));
  EXPECT_DOUBLE_EQ(d.transforms[0].upper_fence, 7.0);
  EXPECT_DOUBLE_EQ(d.rows[4][0], 1.0);
  EXPECT_DOUBLE_EQ(d.rows[0][0], 0.0);
  EXPECT_DOUBLE_EQ(d.rows[3][0], 0.5);
}

TEST(Preprocess, NonFitRowsAreClipped) {
  const auto d = preprocess(numeric_table({0, 10, 12, -3}), {0, 1});
  EXPECT_DOUBLE_EQ(d.rows[2][0], 1.0);
  EXPECT_DOUBLE_EQ(d.rows[3][0], 0.0);
}

TEST(Preprocess, OneHotWithModeAndUnseen) {
  RawTable t;
  RawColumn c;
  c.name = "eth";
  c.kind = ColumnKind::Categorical;
  c.categorical = {"d", "b", "a", "c", "b", "a", std::nullopt, "zz"};
  t.labels.assign(8, 0);
  t.columns.push_back(c);
  const auto d = preprocess(t, {0, 1, 2, 3, 4, 5, 6});
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"eth=a", "eth=b", "eth=c", "eth=d"}));
  for (std::size_t r = 0; r < 7; ++r) {
    double ones = 0;
    for (double v : d.rows[r]) ones += v;
    EXPECT_EQ(ones, 1.0);
  }
  // a and b tie for the mode; a wins
  EXPECT_EQ(d.rows[6], (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(d.rows[7], (std::vector<double>{0, 0, 0, 0}));
  ASSERT_EQ(d.warnings.size(), 1u);
}

TEST(Preprocess, Errors) {
  EXPECT_THROW(preprocess(numeric_table({std::nullopt, 1.0}), {0}), Error);
  EXPECT_THROW(preprocess(numeric_table({1.0}), {}), Error);
}

TEST(Preprocess, TransformsRoundTrip) {
  const auto d = preprocess(numeric_table({1, 2, 3, 4, 100}), all_rows(5));
  const auto back = transforms_from_json(transforms_to_json(d.transforms));
  EXPECT_EQ(apply_preprocessing(numeric_table({1, 2, 3, 4, 100}), back).rows, d.rows);
}

TEST(Split, LargestRemainderQuotas) {
  std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_EQ(apportion({5, 5}, 0.7), (std::vector<std::size_t>{4, 3}));
  const auto s = stratified_split_indices(labels, 0.7, 1);
  EXPECT_EQ(s.train.size(), 7u);
  EXPECT_EQ(s.test.size(), 3u);
  std::size_t zeros = 0;
  for (auto r : s.train) zeros += labels[r] == 0;
  EXPECT_EQ(zeros, 4u);
}

TEST(Split, SingletonClassGoesToTrain) {
  std::vector<int> labels{0, 0, 0, 0, 0, 0, 1};
  const auto s = stratified_split_indices(labels, 0.5, 3);
  EXPECT_NE(std::find(s.train.begin(), s.train.end(), 6u), s.train.end());
}

TEST(Split, DegenerateSplit) {
  EXPECT_THROW(stratified_split_indices({0, 0, 1}, 0.9, 0), Error);
}

TEST(Split, PreservesProportionsAndDeterminism) {
  std::vector<int> labels;
  for (int i = 0; i < 386; ++i) labels.push_back(i % 6 == 0 ? 0 : 1);
  const auto a = stratified_split_indices(labels, 0.7, 42);
  const auto b = stratified_split_indices(labels, 0.7, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.train.size(), 270u);
  std::vector<std::size_t> all = a.train;
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, all_rows(386));
}

TEST(Split, FoldsAreBalanced) {
  std::vector<int> labels;
  for (int i = 0; i < 53; ++i) labels.push_back(i % 4 == 0 ? 1 : 0);
  const auto fold = stratified_folds(labels, 5, 7);
  std::map<std::pair<int, std::size_t>, int> per;
  for (std::size_t r = 0; r < labels.size(); ++r) ++per[{labels[r], fold[r]}];
  for (int cls : {0, 1}) {
    int lo = 1 << 30, hi = 0;
    for (std::size_t f = 0; f < 5; ++f) {
      lo = std::min(lo, per[{cls, f}]);
      hi = std::max(hi, per[{cls, f}]);
    }
    EXPECT_LE(hi - lo, 1);
  }
  EXPECT_THROW(stratified_folds({0, 0, 0, 1, 1}, 3, 0), Error);
}
