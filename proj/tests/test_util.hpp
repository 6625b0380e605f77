#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hqvi/hqvi.hpp"

namespace testutil {

using cplx = std::complex<double>;

// Roots of sum_i c[i] X^i (c.back() != 0) from the companion matrix.
inline std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

inline hqvi::ProblemSpec spec(int g, int n, std::vector<int> ranks, int e = 0) {
  hqvi::ProblemSpec s;
  s.genus = g;
  s.ambient_rank = n;
  s.ranks = std::move(ranks);
  s.bundle_degree = e;
  return s;
}

inline std::vector<hqvi::Cd> to_cd(const std::vector<cplx>& v) {
  std::vector<hqvi::Cd> out;
  for (const auto& x : v) out.push_back(hqvi::Cd::from(x));
  return out;
}

inline hqvi::Insertion power(int i, int j, int p) {
  return hqvi::Insertion::monomial(std::vector<hqvi::Primitive>(static_cast<std::size_t>(p), hqvi::Primitive::elem_sym(i, j)));
}

inline hqvi::GeneratingPolynomial poly(int k, std::initializer_list<std::pair<hqvi::Multidegree, long long>> terms) {
  hqvi::GeneratingPolynomial p(k);
  for (const auto& [d, c] : terms) p.set(d, hqvi::Integer(c));
  return p;
}

}  // namespace testutil
