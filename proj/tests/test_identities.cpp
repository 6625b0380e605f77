#include <gtest/gtest.h>

#include "test_util.hpp"

using hqvi::ComputeOptions;
using hqvi::Insertion;
using hqvi::Precision;
using testutil::poly;
using testutil::spec;

namespace {

ComputeOptions seeded(std::uint64_t seed) {
  ComputeOptions o;
  o.seed = seed;
  return o;
}

hqvi::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const hqvi::Error& e) {
    return e.code();
  }
  return hqvi::ErrorCode::Unsupported;
}

}  // namespace

TEST(Twisting, ProjectiveLine) {
  for (int d = 0; d <= 2; ++d) {
    const auto rep = hqvi::check_twisting(spec(0, 2, {1}), testutil::power(1, 1, 2 * d + 1), 1, seeded(1));
    EXPECT_TRUE(rep.passed) << d;
    EXPECT_EQ(rep.lhs, poly(1, {{{d + 1}, 1}}));
  }
}

TEST(Twisting, PunctualEmptyInsertion) {
  const auto rep = hqvi::check_twisting(spec(0, 2, {2, 2}), Insertion(), 2, seeded(2));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.rhs, poly(2, {{{2, 2}, 1}}));
}

TEST(Twisting, TwoStepBothLevels) {
  for (int l : {1, 2}) {
    const auto rep = hqvi::check_twisting(spec(1, 3, {1, 2}), testutil::power(1, 1, 2), l, seeded(3));
    EXPECT_TRUE(rep.passed) << l;
    EXPECT_FALSE(rep.rhs.is_zero()) << l;
  }
}

TEST(Twisting, LevelOutOfRange) {
  EXPECT_EQ(code_of([] { hqvi::check_twisting(spec(0, 2, {1}), Insertion(), 2); }), hqvi::ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { hqvi::check_twisting(spec(0, 2, {1}), Insertion(), 0); }), hqvi::ErrorCode::InvalidArgument);
}

TEST(ElementaryModification, ProjectiveLine) {
  for (int d = 1; d <= 3; ++d) {
    const auto rep = hqvi::check_elementary_modification(spec(0, 2, {1}), testutil::power(1, 1, 2 * d), seeded(4));
    EXPECT_TRUE(rep.passed) << d;
    EXPECT_EQ(rep.rhs, poly(1, {{{d}, 1}}));
  }
}

TEST(ElementaryModification, TwoStepEmptyInsertion) {
  const auto rep = hqvi::check_elementary_modification(spec(2, 3, {1, 2}), Insertion(), seeded(5));
  EXPECT_TRUE(rep.passed);
}

TEST(ElementaryModification, TwoStepNonzero) {
  auto rep = hqvi::check_elementary_modification(spec(1, 3, {1, 2}), testutil::power(1, 1, 2), seeded(5));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.rhs, poly(2, {{{1, 1}, 6}}));
  rep = hqvi::check_elementary_modification(spec(2, 3, {1, 2}), testutil::power(1, 1, 3), seeded(6));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.rhs, poly(2, {{{2, 2}, 36}}));
  // Genus 0: the lowered series has terms of negative degree.
  rep = hqvi::check_elementary_modification(spec(0, 3, {1, 2}), testutil::power(1, 1, 1), seeded(7));
  EXPECT_TRUE(rep.passed);
  EXPECT_FALSE(rep.rhs.is_zero());
}

TEST(ElementaryModification, RequiresDegreeZero) {
  EXPECT_EQ(code_of([] { hqvi::check_elementary_modification(spec(0, 2, {1}, -1), Insertion()); }),
            hqvi::ErrorCode::InvalidArgument);
}

TEST(Vanishing, HypothesisAtGenusThirteen) {
  const auto s = spec(13, 3, {1, 2});
  EXPECT_TRUE(hqvi::vanishing_hypothesis(s, {12, 6}));
  EXPECT_FALSE(hqvi::vanishing_hypothesis(s, {9, 9}));
  EXPECT_FALSE(hqvi::vanishing_hypothesis(s, {10, 8}));
  EXPECT_EQ(hqvi::relative_virtual_dimension(s, {9, 9}, 1), -3);
}

TEST(Vanishing, CoefficientIsZero) {
  const auto rep = hqvi::check_vanishing(spec(13, 3, {1, 2}), Insertion(), {12, 6}, seeded(6));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.lhs.coefficient({12, 6}), hqvi::Integer(0));
}

TEST(Vanishing, NegativeRelativeDimensionAloneIsNotEnough) {
  // (9,9) has a negative relative dimension at j = 1 but a nonzero coefficient.
  EXPECT_EQ(code_of([] { hqvi::check_vanishing(spec(13, 3, {1, 2}), Insertion(), {9, 9}); }),
            hqvi::ErrorCode::HypothesisNotMet);
  const auto p = hqvi::compute(spec(13, 3, {1, 2}), Insertion(), seeded(7), Precision::F64);
  EXPECT_EQ(p.coefficient({9, 9}), hqvi::Integer("261213880320"));
}
