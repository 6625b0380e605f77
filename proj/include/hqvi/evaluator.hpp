#pragma once

// Right-hand side of the main formula at one parameter point.

#include <complex>
#include <vector>

#include "hqvi/solver.hpp"

namespace hqvi {

/// e_1..e_r of the given values, via the coefficients of prod (X + x_i).
template <class R>
std::vector<Complex<R>> elementary_symmetric(const std::vector<Complex<R>>& x) {
  std::vector<Complex<R>> e(x.size() + 1);
  e[0] = Complex<R>(R(1.0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t m = i + 1; m >= 1; --m) e[m] += e[m - 1] * x[i];
  return e;
}

template <class R>
Complex<R> eval_insertion(const ProblemSpec& spec, const Insertion& insertion, const std::vector<Complex<R>>& z) {
  const LevelLayout layout(spec);
  std::vector<std::vector<Complex<R>>> esym(static_cast<std::size_t>(spec.k()) + 1);
  auto level = [&](int j) {
    std::vector<Complex<R>> out;
    if (j > spec.k()) {
      for (const auto& e : spec.top_values()) out.push_back(Complex<R>::from(e));
      return out;
    }
    for (std::size_t s = 0; s < layout.size(j); ++s) out.push_back(z[layout.index(static_cast<int>(s), j)]);
    return out;
  };
  Complex<R> total;
  for (const auto& term : insertion.terms()) {
    Complex<R> v(R(static_cast<double>(term.coefficient)));
    for (const auto& p : term.primitives) {
      if (p.kind == Primitive::Kind::ElemSym) {
        auto& e = esym[static_cast<std::size_t>(p.level)];
        if (e.empty()) e = elementary_symmetric(level(p.level));
        v *= e[static_cast<std::size_t>(p.index)];
      } else {
        const auto lo = level(p.level);
        const auto hi = level(p.level + 1);
        for (const auto& a : lo)
          for (const auto& b : hi) v *= a - b;
      }
    }
    total += v;
  }
  return total;
}

template <class R>
struct PointValue {
  Complex<R> value;
  std::vector<std::complex<double>> q;
  std::vector<std::complex<double>> eps;
  long solution_count_used = 0;
  double worst_condition = 0.0;
};

/// Sum over orbit representatives of insertion * J^{g-1}.
template <class R>
PointValue<R> eval_point(const ProblemSpec& spec, const Insertion& insertion, const std::vector<std::complex<double>>& q,
                         const SolutionSet<R>& sols, double tol_sep_scale = 1e-6) {
  const BetheSystem<R> sys(spec, q, SignMode::PaperSign);
  std::vector<ScaledComplex<R>> terms;
  PointValue<R> out;
  out.q = q;
  out.eps = spec.eps;
  for (const auto& sol : sols.representatives) {
    const ScaledComplex<R> j = eval_J_factor(sys, sol, tol_sep_scale);
    if (spec.genus == 0 && (j.is_zero() || j.log2_abs() < std::log2(1e-12)))
      throw Error(ErrorCode::JNearZero, "J factor vanishes at a solution");
    terms.push_back(ScaledComplex<R>(eval_insertion(spec, insertion, sol.z)) * j.pow(spec.genus - 1));
    out.worst_condition = std::max(out.worst_condition, sol.jacobian_condition);
  }
  out.solution_count_used = static_cast<long>(sols.representatives.size());
  out.value = ScaledComplex<R>::sum(terms).value();
  return out;
}

}  // namespace hqvi
