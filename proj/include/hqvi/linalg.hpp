#pragma once

// Small dense complex linear algebra: LU with partial pivoting, determinants,
// 1-norm condition estimates and Householder least squares. Sizes here stay
// in the tens, so everything is plain row-major loops.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "hqvi/complex.hpp"

namespace hqvi {

template <class R>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  Complex<R>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex<R>& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex<R>> data_;
};

template <class R>
class LuDecomposition {
public:
  explicit LuDecomposition(Matrix<R> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = abs1(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = abs1(lu_(i, k));
        if (v > best) { best = v; piv = i; }
      }
      if (best == 0.0) { singular_ = true; continue; }
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
        odd_ = !odd_;
      }
      const Complex<R> inv = Complex<R>(R(1.0)) / lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const Complex<R> f = lu_(i, k) * inv;
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  [[nodiscard]] bool singular() const { return singular_; }

  [[nodiscard]] ScaledComplex<R> determinant() const {
    ScaledComplex<R> det(Complex<R>(R(odd_ ? -1.0 : 1.0)));
    for (std::size_t i = 0; i < lu_.rows(); ++i) det *= ScaledComplex<R>(lu_(i, i));
    return det;
  }

  [[nodiscard]] std::vector<Complex<R>> solve(const std::vector<Complex<R>>& b) const {
    const std::size_t n = lu_.rows();
    std::vector<Complex<R>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] /= lu_(ii, ii);
    }
    return x;
  }

private:
  Matrix<R> lu_;
  std::vector<std::size_t> perm_;
  bool odd_ = false;
  bool singular_ = false;
};

/// 1-norm condition number, computed from the explicit inverse.
template <class R>
double condition_number_1(const Matrix<R>& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1.0;
  LuDecomposition<R> lu(a);
  if (lu.singular()) return INFINITY;
  double norm_a = 0.0;
  double norm_inv = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += abs1(a(i, j));
    norm_a = std::max(norm_a, col);
    std::vector<Complex<R>> e(n);
    e[j] = Complex<R>(R(1.0));
    const auto x = lu.solve(e);
    double icol = 0.0;
    for (const auto& v : x) icol += abs1(v);
    norm_inv = std::max(norm_inv, icol);
  }
  return norm_a * norm_inv;
}

/// Least-squares solution of A x ~= b (rows >= cols) by Householder QR.
/// Returns nullopt when A is numerically rank deficient.
template <class R>
std::optional<std::vector<Complex<R>>> least_squares(Matrix<R> a, std::vector<Complex<R>> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) {
    R sq(0.0);
    for (std::size_t i = k; i < m; ++i) sq += norm(a(i, k));
    const R col_norm = num::sqrt(sq);
    if (num::to_double(col_norm) == 0.0) return std::nullopt;
    const Complex<R> x0 = a(k, k);
    const R x0_abs = hqvi::abs(x0);
    const Complex<R> phase = num::to_double(x0_abs) == 0.0 ? Complex<R>(R(1.0)) : x0 / Complex<R>(x0_abs);
    const Complex<R> alpha = -(phase * col_norm);
    std::vector<Complex<R>> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    R vnorm2(0.0);
    for (const auto& c : v) vnorm2 += norm(c);
    if (num::to_double(vnorm2) == 0.0) continue;
    const R two_over = R(2.0) / vnorm2;
    for (std::size_t j = k; j < n; ++j) {
      Complex<R> dot;
      for (std::size_t i = k; i < m; ++i) dot += conj(v[i - k]) * a(i, j);
      dot = dot * two_over;
      for (std::size_t i = k; i < m; ++i) a(i, j) -= v[i - k] * dot;
    }
    Complex<R> dot;
    for (std::size_t i = k; i < m; ++i) dot += conj(v[i - k]) * b[i];
    dot = dot * two_over;
    for (std::size_t i = k; i < m; ++i) b[i] -= v[i - k] * dot;
  }
  double diag_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) diag_max = std::max(diag_max, abs1(a(k, k)));
  std::vector<Complex<R>> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    if (abs1(a(ii, ii)) <= diag_max * 1e-14) return std::nullopt;
    Complex<R> s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

}  // namespace hqvi
