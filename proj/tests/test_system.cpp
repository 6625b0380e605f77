#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"

using hqvi::BetheSystem;
using hqvi::Cd;
using hqvi::SignMode;
using testutil::cplx;
using testutil::spec;

namespace {

// Solutions for the chain (1, n-1) built from the closed-form description:
// w^n = q1/q2, ζ^{n-1} = q1(1 + 1/w), η the roots of
// sum_i (-ζ/w)^i Y^{n-1-i} + (-1)^n q2.
struct RecipeSolution {
  std::vector<cplx> z;
  cplx w, zeta;
};

std::vector<RecipeSolution> recipe(int n, cplx q1, cplx q2) {
  std::vector<RecipeSolution> out;
  const cplx ratio = q1 / q2;
  for (int a = 0; a < n; ++a) {
    const cplx w = std::polar(std::pow(std::abs(ratio), 1.0 / n), (std::arg(ratio) + 2.0 * M_PI * a) / n);
    const cplx base = q1 * (1.0 + 1.0 / w);
    for (int b = 0; b < n - 1; ++b) {
      const cplx zeta = std::polar(std::pow(std::abs(base), 1.0 / (n - 1)), (std::arg(base) + 2.0 * M_PI * b) / (n - 1));
      std::vector<cplx> c(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(n - 1 - i)] = std::pow(-zeta / w, i);
      c[0] += (n % 2 == 0 ? 1.0 : -1.0) * q2;
      std::vector<cplx> z{zeta};
      for (const auto& y : testutil::poly_roots(c)) z.push_back(y);
      out.push_back({z, w, zeta});
    }
  }
  return out;
}

}  // namespace

TEST(EvalSystem, QuadraticExamples) {
  const BetheSystem<double> sys(spec(0, 2, {1}), {4.0}, SignMode::PaperSign);
  EXPECT_EQ(sys.eval({Cd(2.0)})[0].to_std(), cplx(0.0));
  EXPECT_EQ(sys.eval({Cd(0.0)})[0].to_std(), cplx(-4.0));
  const auto jac = sys.jacobian({Cd(1.5, -0.5)});
  EXPECT_EQ(jac(0, 0).to_std(), cplx(3.0, -1.0));
}

TEST(EvalSystem, ClosedFormSolutionsOfTwoStepChain) {
  for (int n : {3, 4}) {
    // For n = 4, q1 = q2 would allow w = -1 and a collision at zeta = 0.
    const cplx q1(1.0, 0.0), q2(n == 3 ? 1.0 : 2.0, 0.0);
    const auto s = spec(0, n, {1, n - 1});
    const BetheSystem<double> sys(s, {q1, q2}, SignMode::PaperSign);
    for (const auto& sol : recipe(n, q1, q2)) {
      const auto z = testutil::to_cd(sol.z);
      EXPECT_LT(sys.residual_norm(z), 1e-10);
      const auto made = sys.make_solution(z);
      const cplx j = hqvi::eval_J_factor(sys, made).value().to_std();
      const cplx want = static_cast<double>(n * (n - 1)) * q2 * sol.w * std::pow(sol.zeta, n - 2);
      EXPECT_LT(std::abs(j - want), 1e-9 * std::abs(want)) << n;
    }
  }
}

TEST(EvalSystem, ClosedFormAtGenericParameters) {
  const cplx q1(0.7, 0.2), q2(1.1, -0.4);
  const auto s = spec(0, 3, {1, 2});
  const BetheSystem<double> sys(s, {q1, q2}, SignMode::PaperSign);
  const auto sols = recipe(3, q1, q2);
  EXPECT_EQ(sols.size(), 6u);
  for (const auto& sol : sols) {
    EXPECT_LT(sys.residual_norm(testutil::to_cd(sol.z)), 1e-10);
    // The cross-level Euler class at level 1 equals q1 at every solution.
    const auto x = hqvi::eval_insertion(s, hqvi::Insertion::monomial({hqvi::Primitive::euler_cross(1)}), testutil::to_cd(sol.z));
    EXPECT_LT(std::abs(x.to_std() - q1), 1e-10);
  }
}

TEST(Jacobian, BlockSparsity) {
  const auto s = spec(0, 5, {1, 2, 3, 4});
  const BetheSystem<double> sys(s, {0.3, 1.2, cplx(0.1, 2.0), -0.7}, SignMode::PaperSign);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Cd> z;
  for (std::size_t i = 0; i < sys.total_vars(); ++i) z.emplace_back(u(rng), u(rng));
  const auto jac = sys.jacobian(z);
  const auto& lay = sys.layout();
  for (int j = 1; j <= s.k(); ++j)
    for (int jj = 1; jj <= s.k(); ++jj) {
      if (std::abs(j - jj) < 2) continue;
      for (std::size_t a = 0; a < lay.size(j); ++a)
        for (std::size_t b = 0; b < lay.size(jj); ++b) {
          EXPECT_EQ(jac(lay.offset(j) + a, lay.offset(jj) + b).to_std(), cplx(0.0));
        }
    }
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<hqvi::ProblemSpec> specs{spec(0, 2, {1}), spec(0, 3, {1, 2}), spec(0, 4, {2, 3}),
                                             spec(0, 4, {1, 2, 3}), spec(0, 3, {2, 2})};
  for (int t = 0; t < 100; ++t) {
    auto s = specs[static_cast<std::size_t>(t) % specs.size()];
    if (t % 3 == 0)
      for (int i = 0; i < s.ambient_rank; ++i) s.eps.emplace_back(u(rng), u(rng));
    std::vector<cplx> q;
    for (int j = 0; j < s.k(); ++j) q.emplace_back(2.0 * u(rng), 2.0 * u(rng));
    const BetheSystem<double> sys(s, q, t % 2 ? SignMode::PaperSign : SignMode::DegenerationSign);
    std::vector<Cd> z;
    for (std::size_t i = 0; i < sys.total_vars(); ++i) z.emplace_back(10.0 * u(rng) / std::sqrt(2.0), 10.0 * u(rng) / std::sqrt(2.0));
    const auto jac = sys.jacobian(z);
    for (std::size_t c = 0; c < z.size(); ++c) {
      const double h = 1e-6 * (1.0 + std::abs(z[c].to_std()));
      auto zp = z, zm = z;
      zp[c] += Cd(h);
      zm[c] -= Cd(h);
      const auto fp = sys.eval(zp), fm = sys.eval(zm);
      double colmax = 0.0, err = 0.0;
      for (std::size_t r = 0; r < z.size(); ++r) {
        const cplx fd = (fp[r].to_std() - fm[r].to_std()) / (2.0 * h);
        colmax = std::max(colmax, std::abs(jac(r, c).to_std()));
        err = std::max(err, std::abs(fd - jac(r, c).to_std()));
      }
      EXPECT_LT(err, 1e-6 * std::max(colmax, 1.0)) << "t=" << t << " col=" << c;
    }
  }
}

TEST(JFactor, SingleStepIsTwiceRoot) {
  const cplx q(0.3, 1.7);
  const BetheSystem<double> sys(spec(0, 2, {1}), {q}, SignMode::PaperSign);
  for (double sign : {1.0, -1.0}) {
    const cplx zeta = sign * std::sqrt(q);
    const auto sol = sys.make_solution({Cd::from(zeta)});
    EXPECT_LT(std::abs(hqvi::eval_J_factor(sys, sol).value().to_std() - 2.0 * zeta), 1e-14);
  }
}

TEST(JFactor, PunctualIsOne) {
  for (const auto& [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    const auto s = spec(0, n, std::vector<int>(static_cast<std::size_t>(k), n));
    std::vector<cplx> q;
    for (int j = 0; j < k; ++j) q.push_back(std::polar(0.8 + 0.3 * j, 0.4 + j));
    const auto sols = hqvi::solve<double>(s, q, hqvi::SolveMethod::Degeneration);
    const BetheSystem<double> sys(s, q, SignMode::PaperSign);
    ASSERT_EQ(sols.representatives.size(), 1u);
    EXPECT_LT(std::abs(hqvi::eval_J_factor(sys, sols.representatives[0]).value().to_std() - 1.0), 1e-10);
  }
}

TEST(JFactor, ExactlyInvariantUnderLevelPermutations) {
  const auto s = spec(0, 4, {2, 3});
  const std::vector<cplx> q{cplx(0.9, 0.3), cplx(-0.4, 1.1)};
  const auto sols = hqvi::solve<double>(s, q, hqvi::SolveMethod::Degeneration);
  const BetheSystem<double> sys(s, q, SignMode::PaperSign);
  std::mt19937_64 rng(4);
  for (const auto& sol : sols.representatives) {
    const auto j0 = hqvi::eval_J_factor(sys, sol).value().to_std();
    for (int t = 0; t < 10; ++t) {
      auto p = sol;
      std::shuffle(p.z.begin(), p.z.begin() + 2, rng);
      std::shuffle(p.z.begin() + 2, p.z.end(), rng);
      EXPECT_EQ(hqvi::eval_J_factor(sys, p).value().to_std(), j0);
      // The system values are permuted along with the entries.
      const auto f = sys.eval(p.z);
      EXPECT_LT(hqvi::max_abs(f), 1e-9);
    }
  }
}

TEST(JFactor, DegenerateSolutionRejected) {
  const BetheSystem<double> sys(spec(0, 3, {2}), {1.0}, SignMode::PaperSign);
  const auto sol = sys.make_solution({Cd(0.5), Cd(0.5)});
  EXPECT_THROW(hqvi::eval_J_factor(sys, sol), hqvi::Error);
}

TEST(SignConvention, Examples) {
  const std::vector<cplx> q{cplx(1.5, -0.25)};
  EXPECT_EQ(hqvi::sign_convert_q(spec(0, 2, {1}), q, SignMode::PaperSign, SignMode::DegenerationSign), q);
  EXPECT_EQ(hqvi::sign_convert_q(spec(0, 3, {2}), q, SignMode::PaperSign, SignMode::DegenerationSign)[0], -q[0]);
  const auto s = spec(0, 5, {1, 3, 4});
  const std::vector<cplx> qq{cplx(0.1, 0.7), cplx(-1.3, 0.2), cplx(0.3, -0.9)};
  const auto there = hqvi::sign_convert_q(s, qq, SignMode::PaperSign, SignMode::DegenerationSign);
  EXPECT_EQ(hqvi::sign_convert_q(s, there, SignMode::DegenerationSign, SignMode::PaperSign), qq);
}

TEST(SignConvention, BothModesDefineTheSameSystem) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& s : {spec(0, 3, {1, 2}), spec(0, 5, {1, 3, 4}), spec(0, 4, {2})}) {
    std::vector<cplx> q;
    for (int j = 0; j < s.k(); ++j) q.emplace_back(u(rng), u(rng));
    const BetheSystem<double> paper(s, q, SignMode::PaperSign);
    const BetheSystem<double> degen(s, hqvi::sign_convert_q(s, q, SignMode::PaperSign, SignMode::DegenerationSign),
                                    SignMode::DegenerationSign);
    std::vector<Cd> z;
    for (std::size_t i = 0; i < paper.total_vars(); ++i) z.emplace_back(u(rng), u(rng));
    const auto a = paper.eval(z), b = degen.eval(z);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i].to_std() - b[i].to_std()), 1e-14);
  }
}

TEST(BetheSolution, RecordsQualityMeasures) {
  const BetheSystem<double> sys(spec(0, 2, {1}), {4.0}, SignMode::PaperSign);
  const auto sol = sys.make_solution({Cd(2.0)});
  EXPECT_EQ(sol.residual_norm, 0.0);
  EXPECT_GT(sol.jacobian_condition, 0.0);
  EXPECT_DOUBLE_EQ(sys.tol_resid(), 1e-10 * 5.0);
}
