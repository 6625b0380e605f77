#pragma once

// Complex numbers over a templated real type, plus a mantissa/exponent form
// used wherever long products could leave the double exponent range.

#include <climits>
#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "hqvi/double_double.hpp"

namespace hqvi {

template <class R>
struct Complex {
  R re{};
  R im{};

  constexpr Complex() = default;
  constexpr Complex(R r) : re(r), im(R(0.0)) {}  // NOLINT
  constexpr Complex(R r, R i) : re(r), im(i) {}

  template <class S>
  static Complex from(const Complex<S>& c) { return {R(num::to_double(c.re)), R(num::to_double(c.im))}; }
  static Complex from(const Complex<R>& c) { return c; }
  static Complex from(const std::complex<double>& c) { return {R(c.real()), R(c.imag())}; }

  [[nodiscard]] std::complex<double> to_std() const { return {num::to_double(re), num::to_double(im)}; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const R& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const R& s, const Complex& a) { return {a.re * s, a.im * s}; }

  // Smith's algorithm.
  friend Complex operator/(const Complex& a, const Complex& b) {
    if (num::abs(b.re) >= num::abs(b.im)) {
      const R r = b.im / b.re;
      const R den = b.re + b.im * r;
      return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    const R r = b.re / b.im;
    const R den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
  }

  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

  friend std::ostream& operator<<(std::ostream& os, const Complex& c) {
    return os << '(' << c.re << ',' << c.im << ')';
  }
};

template <class R>
R norm(const Complex<R>& c) { return c.re * c.re + c.im * c.im; }

template <class R>
R abs(const Complex<R>& c) {
  const R a = num::abs(c.re);
  const R b = num::abs(c.im);
  const R big = a < b ? b : a;
  if (num::to_double(big) == 0.0) return R(0.0);
  const R small = a < b ? a : b;
  const R ratio = small / big;
  return big * num::sqrt(R(1.0) + ratio * ratio);
}

/// Cheap magnitude for pivoting and ordering decisions.
template <class R>
double abs1(const Complex<R>& c) { return std::fabs(num::to_double(c.re)) + std::fabs(num::to_double(c.im)); }

template <class R>
Complex<R> conj(const Complex<R>& c) { return {c.re, -c.im}; }

template <class R>
Complex<R> ldexp(const Complex<R>& c, int e) { return {num::ldexp(c.re, e), num::ldexp(c.im, e)}; }

template <class R>
Complex<R> integer_power(Complex<R> base, long exponent) {
  if (exponent < 0) return Complex<R>(R(1.0)) / integer_power(base, -exponent);
  Complex<R> out(R(1.0));
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    base *= base;
    exponent >>= 1;
  }
  return out;
}

/// A complex value stored as mantissa * 2^exponent with the mantissa's
/// largest component normalized into [0.5, 1).
template <class R>
class ScaledComplex {
public:
  ScaledComplex() = default;
  explicit ScaledComplex(const Complex<R>& v) : mant_(v) { normalize(); }

  [[nodiscard]] const Complex<R>& mantissa() const { return mant_; }
  [[nodiscard]] long exponent() const { return exp_; }
  [[nodiscard]] bool is_zero() const { return num::to_double(mant_.re) == 0.0 && num::to_double(mant_.im) == 0.0; }

  /// log2 of the magnitude (approximate); -inf for zero.
  [[nodiscard]] double log2_abs() const {
    if (is_zero()) return -INFINITY;
    return std::log2(num::to_double(hqvi::abs(mant_))) + static_cast<double>(exp_);
  }

  [[nodiscard]] Complex<R> value() const {
    if (is_zero()) return mant_;
    if (exp_ > 2000) return {R(INFINITY), R(INFINITY)};
    if (exp_ < -2000) return Complex<R>(R(0.0));
    return hqvi::ldexp(mant_, static_cast<int>(exp_));
  }

  friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    ScaledComplex out;
    out.mant_ = a.mant_ * b.mant_;
    out.exp_ = a.exp_ + b.exp_;
    out.normalize();
    return out;
  }
  friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
    ScaledComplex out;
    out.mant_ = a.mant_ / b.mant_;
    out.exp_ = a.exp_ - b.exp_;
    out.normalize();
    return out;
  }
  ScaledComplex& operator*=(const ScaledComplex& o) { return *this = *this * o; }

  [[nodiscard]] ScaledComplex pow(long e) const {
    if (e < 0) return ScaledComplex(Complex<R>(R(1.0))) / pow(-e);
    ScaledComplex out(Complex<R>(R(1.0)));
    ScaledComplex base = *this;
    while (e > 0) {
      if (e & 1) out *= base;
      base *= base;
      e >>= 1;
    }
    return out;
  }

  /// Sum of scaled values, aligned to the largest exponent before adding.
  static ScaledComplex sum(const std::vector<ScaledComplex>& terms) {
    long top = LONG_MIN;
    for (const auto& t : terms) if (!t.is_zero() && t.exp_ > top) top = t.exp_;
    ScaledComplex out;
    if (top == LONG_MIN) return out;
    for (const auto& t : terms) {
      if (t.is_zero()) continue;
      const long shift = t.exp_ - top;
      if (shift < -1100) continue;
      out.mant_ += hqvi::ldexp(t.mant_, static_cast<int>(shift));
    }
    out.exp_ = top;
    out.normalize();
    return out;
  }

private:
  void normalize() {
    const double a = std::fabs(num::to_double(mant_.re));
    const double b = std::fabs(num::to_double(mant_.im));
    const double big = a < b ? b : a;
    if (big == 0.0 || !std::isfinite(big)) return;
    int e = 0;
    std::frexp(big, &e);
    mant_ = hqvi::ldexp(mant_, -e);
    exp_ += e;
  }

  Complex<R> mant_{};
  long exp_ = 0;
};

using Cd = Complex<double>;

}  // namespace hqvi
