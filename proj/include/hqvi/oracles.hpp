#pragma once

// Closed-form reference values for special rank chains.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hqvi/core.hpp"
#include "hqvi/solver.hpp"

namespace hqvi {

inline Integer binomial_exact(long p, long q) {
  if (p < 0 || q < 0 || q > p) return 0;
  Integer out = 1;
  for (long i = 1; i <= q; ++i) out = out * (p - q + i) / i;
  return out;
}

inline Integer integer_pow(long base, long e) {
  Integer out = 1;
  for (long i = 0; i < e; ++i) out *= base;
  return out;
}

/// Roots of prod (X - eps_s) + (-1)^r q, from the companion matrix and a few
/// Newton steps on the expanded polynomial.
inline std::vector<std::complex<double>> quot_k1_roots(int n, int r, std::complex<double> q,
                                                       const std::vector<std::complex<double>>& eps) {
  std::vector<std::complex<double>> e = eps.empty() ? std::vector<std::complex<double>>(static_cast<std::size_t>(n)) : eps;
  // coeffs[i] multiplies X^i; monic of degree n.
  std::vector<std::complex<double>> coeffs{1.0};
  for (const auto& v : e) {
    std::vector<std::complex<double>> next(coeffs.size() + 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= v * coeffs[i];
    }
    coeffs = std::move(next);
  }
  coeffs[0] += (r % 2 == 0 ? 1.0 : -1.0) * q;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < n; ++i) {
    std::complex<double> x = solver.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      std::complex<double> p = 0.0, dp = 0.0;
      for (std::size_t c = coeffs.size(); c-- > 0;) {
        dp = dp * x + p;
        p = p * x + coeffs[c];
      }
      if (dp == 0.0) break;
      x -= p / dp;
    }
    roots.push_back(x);
  }
  double scale = 0.0;
  for (const auto& x : roots) scale = std::max(scale, std::abs(x));
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = a + 1; b < roots.size(); ++b)
      if (std::abs(roots[a] - roots[b]) < 1e-8 * (1.0 + scale))
        throw Error(ErrorCode::RootsDegenerate, "repeated roots at this q");
  return roots;
}

/// Sum over r-subsets of the roots of prod_i e_i^{m_i} * J^{g-1}.
/// m[i-1] is the exponent of e_i.
inline std::complex<double> oracle_quot_k1(int g, int n, int r, const std::vector<int>& m, std::complex<double> q,
                                           const std::vector<std::complex<double>>& eps = {}) {
  if (r < 1 || r > n) throw Error(ErrorCode::RankChainInvalid, "need 1 <= r <= n");
  const auto roots = quot_k1_roots(n, r, q, eps);
  const std::vector<std::complex<double>> e = eps.empty() ? std::vector<std::complex<double>>(static_cast<std::size_t>(n)) : eps;
  std::complex<double> total = 0.0;
  for (const auto& subset : index_subsets(n, r)) {
    std::vector<std::complex<double>> z;
    for (int i : subset) z.push_back(roots[static_cast<std::size_t>(i)]);
    std::complex<double> J = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      std::complex<double> num = 0.0;
      for (std::size_t l = 0; l < e.size(); ++l) {
        std::complex<double> p = 1.0;
        for (std::size_t s = 0; s < e.size(); ++s)
          if (s != l) p *= z[i] - e[s];
        num += p;
      }
      std::complex<double> den = 1.0;
      for (std::size_t t = 0; t < z.size(); ++t)
        if (t != i) den *= z[i] - z[t];
      J *= num / den;
    }
    std::vector<std::complex<double>> es(z.size() + 1);
    es[0] = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t k = i + 1; k >= 1; --k) es[k] += es[k - 1] * z[i];
    std::complex<double> v = 1.0;
    for (std::size_t i = 0; i < m.size(); ++i) v *= std::pow(es[i + 1], m[i]);
    total += v * std::pow(J, g - 1);
  }
  return total;
}

/// The non-equivariant k=1 series: a single monomial c q^d, with c read off
/// from the numeric sum at one q on the unit circle.
inline GeneratingPolynomial oracle_quot_k1_polynomial(int g, int n, int r, const std::vector<int>& m, int e = 0) {
  GeneratingPolynomial out(1);
  if (e > 0) throw Error(ErrorCode::Unsupported, "positive bundle degree");
  std::vector<int> mm = m;
  mm.resize(static_cast<std::size_t>(r), 0);
  mm[static_cast<std::size_t>(r - 1)] += -e;  // B_e = B_0^{c_r^{|e|}} / q^{|e|}
  long degree = 0;
  for (std::size_t i = 0; i < mm.size(); ++i) degree += static_cast<long>(i + 1) * mm[i];
  const long num = degree - static_cast<long>(1 - g) * r * (n - r);
  if (num < 0 || num % n != 0) return out;
  const long d = num / n;
  const std::complex<double> q = std::polar(1.0, 0.7);
  const std::complex<double> c = oracle_quot_k1(g, n, r, mm, q) / std::pow(q, static_cast<int>(d));
  const double rounded = std::nearbyint(c.real());
  if (std::abs(c - rounded) > 1e-6 * (1.0 + std::abs(c)))
    throw Error(ErrorCode::RoundingUnsafe, "oracle value is not an integer multiple of q^d");
  out.set({static_cast<int>(d + e)}, Integer(rounded));
  return out;
}

/// Punctual chain (n, ..., n): prod_j α_j^{m[j][n-1]}, zero if any lower
/// Chern class appears. m[j-1][i-1] is the exponent of c_i at level j.
inline GeneratingPolynomial oracle_points(int n, int k, const std::vector<std::vector<int>>& m) {
  GeneratingPolynomial out(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i + 1 < n; ++i)
      if (j < static_cast<int>(m.size()) && i < static_cast<int>(m[static_cast<std::size_t>(j)].size()) &&
          m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] > 0)
        return out;
  out.set(Multidegree(static_cast<std::size_t>(k), 0), 1);
  for (int j = 1; j <= k; ++j) {
    GeneratingPolynomial alpha(k);
    Multidegree d(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < j; ++i) d[static_cast<std::size_t>(i)] = 1;
    alpha.set(d, 1);
    for (int i = j; i < k; ++i) {
      d[static_cast<std::size_t>(i)] = 1;
      alpha.set(d, 1);
    }
    int power = 0;
    if (j - 1 < static_cast<int>(m.size()) && n - 1 < static_cast<int>(m[static_cast<std::size_t>(j - 1)].size()))
      power = m[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(n - 1)];
    for (int p = 0; p < power; ++p) out = out.times(alpha);
  }
  return out;
}

/// Chain (1, n-1), degree-zero bundle, insertion c_1(E_1)^l prod_i c_i(E_2)^{m_i}.
inline GeneratingPolynomial oracle_two_step(int g, int n, int l, const std::vector<int>& m) {
  GeneratingPolynomial out(2);
  const long gb = g - 1;
  long num = l + (2L * n - 3) * gb;
  for (std::size_t i = 0; i < m.size(); ++i) num += static_cast<long>(i + 1) * m[i];
  if (num < 0 || num % (n - 1) != 0) return out;
  const long d = num / (n - 1);
  const long mtop = m.size() >= static_cast<std::size_t>(n - 1) ? m[static_cast<std::size_t>(n - 2)] : 0;
  const Integer pref = integer_pow(n, g) * integer_pow(n - 1, g);
  const long top = d - gb - mtop;
  for (long j = -gb - 1; j <= d + 1; ++j) {
    const long e1 = gb + j;
    const long e2 = d - gb - j;
    if (e1 < 0 || e2 < 0) continue;
    const Integer b = binomial_exact(top, j * n - l - mtop + gb);
    if (b != 0) out.add({static_cast<int>(e1), static_cast<int>(e2)}, pref * b);
  }
  return out;
}

struct MaximalSubsheafFactor {
  Integer factor;          // m(n, e, r_k, g)
  ProblemSpec reduced;     // ambient rank r_k, ranks r_1..r_{k-1}, degree e - d_k
  Multidegree reduced_degree;
};

/// Factorization through the last Quot step when its virtual dimension is 0.
inline MaximalSubsheafFactor oracle_maximal_subsheaf_factor(const ProblemSpec& spec, const Insertion& insertion,
                                                            const Multidegree& d) {
  if (spec.genus < 2) throw Error(ErrorCode::HypothesisNotMet, "requires genus at least 2");
  if (spec.k() < 2) throw Error(ErrorCode::HypothesisNotMet, "requires at least two levels");
  if (insertion.touches_level(spec.k())) throw Error(ErrorCode::HypothesisNotMet, "insertion involves the last level");
  if (relative_virtual_dimension(spec, d, spec.k()) != 0)
    throw Error(ErrorCode::HypothesisNotMet, "last step has nonzero virtual dimension");
  const int n = spec.ambient_rank;
  const int rk = spec.rank(spec.k());
  const int dk = d.back();
  const auto m = oracle_quot_k1_polynomial(spec.genus, n, rk, {}, spec.bundle_degree);
  MaximalSubsheafFactor out;
  out.factor = m.coefficient({dk});
  out.reduced.genus = spec.genus;
  out.reduced.ambient_rank = rk;
  out.reduced.ranks.assign(spec.ranks.begin(), spec.ranks.end() - 1);
  out.reduced.bundle_degree = spec.bundle_degree - dk;
  for (int i = 0; i + 1 < spec.k(); ++i) out.reduced_degree.push_back(d[static_cast<std::size_t>(i)] - dk);
  return out;
}

}  // namespace hqvi
