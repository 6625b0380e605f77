#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using hqvi::ComputeOptions;
using hqvi::GeneratingPolynomial;
using hqvi::Insertion;
using hqvi::Precision;
using testutil::cplx;
using testutil::poly;
using testutil::spec;

namespace {

ComputeOptions seeded(std::uint64_t seed) {
  ComputeOptions o;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(SampleParameters, Construction) {
  const auto a = hqvi::sample_parameters(2, 3, 1);
  ASSERT_EQ(a.size(), 3u);
  for (const auto& q : a) {
    ASSERT_EQ(q.size(), 2u);
    for (const auto& v : q) EXPECT_GT(std::abs(v), 0.0);
    EXPECT_NEAR(std::abs(q[0]), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(q[1]), 2.0, 1e-12);
  }
  EXPECT_EQ(hqvi::sample_parameters(2, 3, 1), a);
  EXPECT_NE(hqvi::sample_parameters(2, 3, 2), a);
  const auto b = hqvi::sample_parameters(3, 50, 7);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_GT(std::abs(b[i][c] - b[j][c]), 1e-12);
}

TEST(ChooseRadii, BoundsMonomialSpread) {
  std::vector<hqvi::Multidegree> support;
  for (int i = 0; i <= 18; ++i) support.push_back({i, 18 - i});
  const auto r = hqvi::choose_radii(2, support, 1e2);
  double lo = 1e300, hi = 0.0;
  for (const auto& d : support) {
    const double m = std::pow(r[0], d[0]) * std::pow(r[1], d[1]);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  EXPECT_LE(hi / lo, 1e2 * (1 + 1e-9));
  EXPECT_NE(r[0], r[1]);
}

TEST(FitPolynomial, RecoversKnownIntegers) {
  const std::vector<hqvi::Multidegree> support{{0, 1}, {1, 0}, {1, 1}, {2, 0}};
  const auto want = poly(2, {{{0, 1}, 7}, {{1, 0}, -3}, {{2, 0}, 123456789}});
  std::vector<hqvi::Sample<double>> samples;
  for (const auto& q : hqvi::sample_parameters(2, 10, 3)) {
    cplx v = 0.0;
    for (const auto& [d, c] : want.terms()) v += c.convert_to<double>() * std::pow(q[0], d[0]) * std::pow(q[1], d[1]);
    samples.push_back({q, hqvi::Cd::from(v)});
  }
  EXPECT_EQ(hqvi::fit_polynomial<double>(2, support, samples), want);
}

TEST(FitPolynomial, GatesRejectNonIntegers) {
  const std::vector<hqvi::Multidegree> support{{0}, {1}};
  std::vector<hqvi::Sample<double>> samples;
  for (const auto& q : hqvi::sample_parameters(1, 6, 4)) samples.push_back({q, hqvi::Cd::from(0.5 + 2.0 * q[0])});
  try {
    hqvi::fit_polynomial<double>(1, support, samples);
    ADD_FAILURE();
  } catch (const hqvi::Error& e) {
    EXPECT_EQ(e.code(), hqvi::ErrorCode::RoundingUnsafe);
  }
  // A term outside the support shows up on the held-out samples.
  samples.clear();
  for (const auto& q : hqvi::sample_parameters(1, 6, 4))
    samples.push_back({q, hqvi::Cd::from(1.0 + 2.0 * q[0] + 1e-3 * std::pow(q[0], 5))});
  EXPECT_THROW(hqvi::fit_polynomial<double>(1, support, samples), hqvi::Error);
  // Too few samples.
  samples.resize(3);
  EXPECT_THROW(hqvi::fit_polynomial<double>(1, support, samples), hqvi::Error);
}

TEST(Compute, GenusThirteenGolden) {
  const auto p = hqvi::compute(spec(13, 3, {1, 2}), Insertion(), seeded(1), Precision::F64);
  const auto want = poly(2, {{{10, 8}, 13060694016LL}, {{9, 9}, 261213880320LL}, {{8, 10}, 13060694016LL}});
  EXPECT_EQ(p, want);
  EXPECT_EQ(p, hqvi::compute(spec(13, 3, {1, 2}), Insertion(), seeded(1), Precision::DD));
}

TEST(Compute, PunctualTopClass) {
  EXPECT_EQ(hqvi::compute(spec(0, 2, {2, 2}), testutil::power(2, 1, 1), seeded(2), Precision::F64),
            poly(2, {{{1, 0}, 1}, {{1, 1}, 1}}));
}

TEST(Compute, TwoStepExample) {
  const Insertion ins = testutil::power(1, 1, 4).times(hqvi::Primitive::elem_sym(1, 2));
  EXPECT_EQ(hqvi::compute(spec(0, 3, {1, 2}), ins, seeded(3), Precision::F64), poly(2, {{{1, 0}, 2}}));
}

TEST(Compute, ProjectiveLine) {
  for (int d = 0; d <= 3; ++d)
    EXPECT_EQ(hqvi::compute(spec(0, 2, {1}), testutil::power(1, 1, 2 * d + 1), seeded(4), Precision::F64),
              poly(1, {{{d}, 1}}));
}

TEST(Compute, EmptySupportGivesZero) {
  const auto p = hqvi::compute(spec(0, 2, {1}), testutil::power(1, 1, 2), seeded(5), Precision::F64);
  EXPECT_TRUE(p.is_zero());
}

TEST(Compute, GenusTwoEmptyInsertionMatchesClosedForm) {
  EXPECT_EQ(hqvi::compute(spec(2, 3, {1, 2}), Insertion(), seeded(6), Precision::F64),
            hqvi::oracle_two_step(2, 3, 0, {0, 0}));
}

TEST(Compute, SeedInvarianceAndThreads) {
  const auto s = spec(1, 4, {1, 3});
  const Insertion ins = hqvi::parse_insertion("c1[1]^3*c2[2]");
  ComputeOptions a = seeded(10), b = seeded(20);
  b.threads = 3;
  const auto pa = hqvi::compute(s, ins, a, Precision::F64);
  EXPECT_EQ(pa, hqvi::compute(s, ins, b, Precision::F64));
  EXPECT_EQ(pa.metadata.diagnostics, hqvi::compute(s, ins, a, Precision::F64).metadata.diagnostics);
}

TEST(Compute, DroppingASampleKeepsTheIntegers) {
  const auto s = spec(2, 3, {1, 2});
  const Insertion ins = testutil::power(1, 1, 3);
  const auto support = hqvi::degree_support(s, ins).degrees;
  std::vector<hqvi::Sample<double>> samples;
  std::uint64_t seed = 1;
  for (const auto& q : hqvi::sample_parameters(2, static_cast<int>(2 * support.size() + 5), 31,
                                               hqvi::choose_radii(2, support, 1e2))) {
    hqvi::SolverOptions so;
    so.seed = seed++;
    const auto sols = hqvi::solve<double>(s, q, hqvi::SolveMethod::Degeneration, so);
    samples.push_back({q, hqvi::eval_point(s, ins, q, sols).value});
  }
  const auto full = hqvi::fit_polynomial<double>(2, support, samples);
  for (std::size_t drop = 0; drop < samples.size(); drop += 3) {
    auto fewer = samples;
    fewer.erase(fewer.begin() + static_cast<long>(drop));
    EXPECT_EQ(hqvi::fit_polynomial<double>(2, support, fewer), full);
  }
}

TEST(Compute, NegativeBundleDegree) {
  // One elementary modification: q1 q2 B_{e=-1} = B_{e=0} with c2(E_2) inserted.
  const Insertion ins = testutil::power(1, 1, 2);
  const auto lowered = hqvi::compute(spec(1, 3, {1, 2}, -1), ins, seeded(7), Precision::F64);
  const auto raised = hqvi::compute(spec(1, 3, {1, 2}), ins.times(hqvi::Primitive::elem_sym(2, 2)), seeded(7), Precision::F64);
  EXPECT_EQ(lowered.shifted({1, 1}), raised);
  EXPECT_EQ(lowered, poly(2, {{{0, 0}, 6}}));
}

TEST(Compute, NegativeBundleDegreeAllowsNegativeExponents) {
  // Subsheaves of the modified bundle can have quotients of degree -1.
  const auto lowered = hqvi::compute(spec(0, 3, {1, 2}, -1), testutil::power(1, 1, 1), seeded(8), Precision::F64);
  const auto raised = hqvi::compute(spec(0, 3, {1, 2}), hqvi::parse_insertion("c1[1]*c2[2]"), seeded(8), Precision::F64);
  EXPECT_FALSE(raised.is_zero());
  EXPECT_EQ(lowered.shifted({1, 1}), raised);
  bool negative = false;
  for (const auto& [d, c] : lowered.terms()) negative = negative || d[0] < 0 || d[1] < 0;
  EXPECT_TRUE(negative);
}

TEST(Compute, RejectsUnsupportedInputs) {
  auto s = spec(0, 2, {1});
  s.eps = {0.5, -0.5};
  EXPECT_THROW(hqvi::compute(s, Insertion(), {}, Precision::F64), hqvi::Error);
  EXPECT_THROW(hqvi::compute(spec(0, 2, {1}, 2), Insertion(), {}, Precision::F64), hqvi::Error);
}

TEST(Compute, ChainBoundFlagged) {
  const auto p = hqvi::compute(spec(0, 2, {2, 2}), testutil::power(2, 1, 1), seeded(8), Precision::F64);
  EXPECT_NE(std::find(p.metadata.flags.begin(), p.metadata.flags.end(), "chain_bound_used"), p.metadata.flags.end());
}
