#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"

using hqvi::Cd;
using hqvi::SolveMethod;
using hqvi::SolverOptions;
using testutil::cplx;
using testutil::spec;

namespace {

long full_count(const hqvi::ProblemSpec& s) {
  long c = 1;
  for (int j = 1; j <= s.k(); ++j)
    for (int i = s.rank(j + 1) - s.rank(j) + 1; i <= s.rank(j + 1); ++i) c *= i;
  return c;
}

}  // namespace

TEST(StartSolutions, Degeneration) {
  const auto a = hqvi::start_solutions_degeneration(spec(0, 2, {1}), {4.0});
  ASSERT_EQ(a.size(), 2u);
  std::vector<cplx> roots{a[0][0].to_std(), a[1][0].to_std()};
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  EXPECT_LT(std::abs(roots[0] + 2.0), 1e-14);
  EXPECT_LT(std::abs(roots[1] - 2.0), 1e-14);

  EXPECT_EQ(hqvi::start_solutions_degeneration(spec(0, 3, {1, 2}), {0.7, cplx(0.2, 1.0)}).size(), 6u);
  EXPECT_EQ(hqvi::start_solutions_degeneration(spec(0, 2, {2, 2}), {0.7, 1.3}).size(), 1u);
  EXPECT_EQ(hqvi::start_solutions_degeneration(spec(0, 4, {2, 3}), {0.7, 1.3}).size(), 12u);
  EXPECT_THROW(hqvi::start_solutions_degeneration(spec(0, 2, {1}), {0.0}), hqvi::Error);
}

TEST(StartSolutions, DegenerationSolvesTheSpecialFiber) {
  // At t = 0 the start system is w^{r_{j+1}} = (-1)^{r_{j-1}} q_j prod z_{j-1}.
  const auto s = spec(0, 4, {1, 2, 3});
  const std::vector<cplx> q{cplx(0.7, 0.1), cplx(-0.3, 1.2), cplx(0.9, -0.6)};
  for (const auto& z : hqvi::start_solutions_degeneration(s, q)) {
    const hqvi::LevelLayout lay(s);
    for (int j = 1; j <= s.k(); ++j) {
      cplx below = 1.0;
      for (std::size_t b = 0; b < lay.size(j - 1) && j > 1; ++b) below *= z[lay.offset(j - 1) + b].to_std();
      const double sgn = s.rank(j - 1) % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t a = 0; a < lay.size(j); ++a) {
        const cplx w = z[lay.offset(j) + a].to_std();
        EXPECT_LT(std::abs(std::pow(w, s.rank(j + 1)) - sgn * q[static_cast<std::size_t>(j - 1)] * below), 1e-12);
      }
    }
  }
}

TEST(StartSolutions, Equivariant) {
  auto s = spec(0, 2, {1});
  s.eps = {1.0, -1.0};
  const auto a = hqvi::start_solutions_equivariant(s);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NE(a[0][0].to_std(), a[1][0].to_std());

  s.ranks = {1, 1};
  const auto b = hqvi::start_solutions_equivariant(s);
  ASSERT_EQ(b.size(), 2u);
  for (const auto& v : b) EXPECT_EQ(v[0].to_std(), v[1].to_std());

  auto t = spec(0, 3, {1, 2});
  t.eps = {cplx(0.3, 0.1), cplx(-0.5, 0.2), cplx(0.1, -0.7)};
  EXPECT_EQ(hqvi::start_solutions_equivariant(t).size(), 6u);
}

TEST(TrackPath, SingleStepPathIsConstant) {
  const auto s = spec(0, 2, {1});
  const hqvi::BetheSystem<double> sys(s, {4.0}, hqvi::SignMode::PaperSign);
  const hqvi::HomotopyFamily fam{sys.kernel(), SolveMethod::Degeneration};
  const auto path = hqvi::track_path(fam, {Cd(2.0)}, hqvi::TArc{Cd(0.5, 0.3)}, SolverOptions{});
  EXPECT_EQ(path.status, hqvi::PathStatus::Converged);
  ASSERT_TRUE(path.end.has_value());
  EXPECT_LT(std::abs(path.end->z[0].to_std() - 2.0), 1e-14);
}

TEST(TrackPath, StepLimit) {
  const auto s = spec(0, 3, {1, 2});
  const std::vector<cplx> q{cplx(0.7, 0.2), cplx(1.1, -0.4)};
  const hqvi::BetheSystem<double> sys(s, q, hqvi::SignMode::PaperSign);
  const hqvi::HomotopyFamily fam{sys.kernel(), SolveMethod::Degeneration};
  const auto starts = hqvi::start_solutions_degeneration(
      s, hqvi::sign_convert_q(s, q, hqvi::SignMode::PaperSign, hqvi::SignMode::DegenerationSign));
  SolverOptions o;
  o.max_steps = 1;
  EXPECT_EQ(hqvi::track_path(fam, starts[0], hqvi::TArc{Cd(0.5, 0.3)}, o).status, hqvi::PathStatus::StepLimitExceeded);
}

TEST(Solve, QuadraticRoots) {
  const auto sols = hqvi::solve<double>(spec(0, 2, {1}), {cplx(0.3, 1.2)}, SolveMethod::Degeneration);
  ASSERT_EQ(sols.representatives.size(), 2u);
  const cplx r = std::sqrt(cplx(0.3, 1.2));
  for (const auto& s : sols.representatives) {
    const cplx z = s.z[0].to_std();
    EXPECT_LT(std::min(std::abs(z - r), std::abs(z + r)), 1e-12);
  }
}

TEST(Solve, GrassmannianRootsOfCubic) {
  // Unordered pairs of distinct roots of X^3 + (-1)^2 q.
  const cplx q(0.8, -0.5);
  const auto sols = hqvi::solve<double>(spec(0, 3, {2}), {q}, SolveMethod::Degeneration);
  ASSERT_EQ(sols.representatives.size(), 3u);
  EXPECT_EQ(sols.orbit_weight, 2);
  const auto roots = testutil::poly_roots({q, 0.0, 0.0, 1.0});
  for (const auto& s : sols.representatives)
    for (const auto& z : s.z) {
      double best = 1e9;
      for (const auto& r : roots) best = std::min(best, std::abs(z.to_std() - r));
      EXPECT_LT(best, 1e-10);
    }
}

TEST(Solve, CountsAcrossChains) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI), lr(std::log(0.5), std::log(2.0));
  const std::vector<std::pair<int, std::vector<int>>> chains{{2, {1}}, {3, {2}}, {3, {1, 2}}, {4, {2, 3}},
                                                             {2, {2, 2}}, {3, {3, 3}}, {4, {1, 2, 3}}};
  int failures = 0, trials = 0;
  for (const auto& [n, r] : chains) {
    const auto s = spec(0, n, r);
    for (int t = 0; t < 20; ++t) {
      std::vector<cplx> q;
      for (int j = 0; j < s.k(); ++j) q.push_back(std::polar(std::exp(lr(rng)), ph(rng)));
      SolverOptions o;
      o.seed = static_cast<std::uint64_t>(t);
      ++trials;
      try {
        const auto sols = hqvi::solve<double>(s, q, SolveMethod::Degeneration, o);
        EXPECT_EQ(static_cast<long>(sols.representatives.size()) * sols.orbit_weight, full_count(s));
        EXPECT_TRUE(sols.complete);
        const hqvi::BetheSystem<double> sys(s, q, hqvi::SignMode::PaperSign);
        for (const auto& sol : sols.representatives) {
          EXPECT_LT(sys.residual_norm(sol.z), sys.tol_resid());
          EXPECT_GT(hqvi::min_separation(sys.layout(), sol.z), 1e-6 * (1.0 + hqvi::max_abs(sol.z)));
        }
      } catch (const hqvi::Error&) {
        ++failures;
      }
    }
  }
  EXPECT_LT(failures * 100, trials);
}

TEST(Solve, RepresentativesAreDistinctOrbits) {
  const auto s = spec(0, 4, {2, 3});
  const std::vector<cplx> q{cplx(1.2, 0.4), cplx(-0.6, 0.9)};
  const auto sols = hqvi::solve<double>(s, q, SolveMethod::Degeneration);
  const hqvi::LevelLayout lay(s);
  for (std::size_t a = 0; a < sols.representatives.size(); ++a)
    for (std::size_t b = a + 1; b < sols.representatives.size(); ++b)
      EXPECT_FALSE(hqvi::same_orbit(lay, sols.representatives[a].z, sols.representatives[b].z, 1e-6));
}

TEST(Solve, DeterministicGivenSeed) {
  const auto s = spec(0, 4, {1, 3});
  const std::vector<cplx> q{cplx(0.6, -0.2), cplx(1.4, 0.3)};
  SolverOptions o;
  o.seed = 99;
  const auto a = hqvi::solve<double>(s, q, SolveMethod::Degeneration, o);
  const auto b = hqvi::solve<double>(s, q, SolveMethod::Degeneration, o);
  ASSERT_EQ(a.representatives.size(), b.representatives.size());
  for (std::size_t i = 0; i < a.representatives.size(); ++i)
    for (std::size_t j = 0; j < a.representatives[i].z.size(); ++j)
      EXPECT_EQ(a.representatives[i].z[j].to_std(), b.representatives[i].z[j].to_std());
}

TEST(Solve, EquivariantMatchesQuotRoots) {
  // For k = 1 the solutions are r-subsets of the roots of prod (X - ε_s) + (-1)^r q.
  auto s = spec(0, 3, {2});
  s.eps = {cplx(0.4, 0.1), cplx(-0.3, 0.5), cplx(0.1, -0.6)};
  const cplx q(0.9, 0.4);
  const auto sols = hqvi::solve<double>(s, {q}, SolveMethod::Equivariant);
  ASSERT_EQ(sols.representatives.size(), 3u);
  const auto roots = hqvi::quot_k1_roots(3, 2, q, s.eps);
  for (const auto& sol : sols.representatives)
    for (const auto& z : sol.z) {
      double best = 1e9;
      for (const auto& r : roots) best = std::min(best, std::abs(z.to_std() - r));
      EXPECT_LT(best, 1e-10);
    }
}

TEST(Solve, DoubleDoublePolish) {
  const auto s = spec(0, 3, {1, 2});
  const std::vector<cplx> q{cplx(0.7, 0.2), cplx(1.1, -0.4)};
  const auto sols = hqvi::solve<hqvi::DoubleDouble>(s, q, SolveMethod::Degeneration);
  const hqvi::BetheSystem<hqvi::DoubleDouble> sys(s, q, hqvi::SignMode::PaperSign);
  ASSERT_EQ(sols.representatives.size(), 6u);
  for (const auto& sol : sols.representatives) EXPECT_LT(sys.residual_norm(sol.z), 1e-25);
}

TEST(Solve, InputErrors) {
  EXPECT_THROW(hqvi::solve<double>(spec(0, 2, {1}), {0.0}, SolveMethod::Degeneration), hqvi::Error);
  EXPECT_THROW(hqvi::solve<double>(spec(0, 2, {1}), {1.0, 2.0}, SolveMethod::Degeneration), hqvi::Error);
  try {
    hqvi::solve<double>(spec(0, 2, {1}), {1.0}, SolveMethod::Equivariant);
    ADD_FAILURE();
  } catch (const hqvi::Error& e) {
    EXPECT_EQ(e.code(), hqvi::ErrorCode::EquivariantParamsDegenerate);
  }
}

TEST(Solve, OrbitBookkeeping) {
  EXPECT_EQ(hqvi::expected_orbit_count(spec(0, 3, {1, 2})), 6);
  EXPECT_EQ(hqvi::orbit_weight(spec(0, 3, {1, 2})), 2);
  EXPECT_EQ(hqvi::expected_orbit_count(spec(0, 4, {2, 3})), 12);
  EXPECT_EQ(hqvi::orbit_weight(spec(0, 4, {2, 3})), 12);
  EXPECT_EQ(hqvi::expected_orbit_count(spec(0, 3, {3, 3})), 1);
}
