#pragma once

// Double-double real arithmetic: an unevaluated sum hi + lo of two doubles
// giving roughly 106 bits of significand.

#include <cmath>
#include <limits>
#include <ostream>

namespace hqvi {

class DoubleDouble {
public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double v) : hi_(v), lo_(0.0) {}  // NOLINT: implicit widening is exact
  constexpr DoubleDouble(int v) : hi_(static_cast<double>(v)), lo_(0.0) {}  // NOLINT
  constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

  [[nodiscard]] constexpr double hi() const { return hi_; }
  [[nodiscard]] constexpr double lo() const { return lo_; }
  [[nodiscard]] explicit operator double() const { return hi_ + lo_; }

  friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi_, -a.lo_}; }

  friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    const Pair hs = two_sum(a.hi_, b.hi_);
    const Pair ls = two_sum(a.lo_, b.lo_);
    const Pair mid = quick_two_sum(hs.s, hs.e + ls.s);
    const Pair out = quick_two_sum(mid.s, mid.e + ls.e);
    return {out.s, out.e};
  }
  friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

  friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    auto [p, e] = two_prod(a.hi_, b.hi_);
    e += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    auto [h, l] = quick_two_sum(p, e);
    return {h, l};
  }

  friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    const double q1 = a.hi_ / b.hi_;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi_ / b.hi_;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi_ / b.hi_;
    auto [h, l] = quick_two_sum(q1, q2);
    return DoubleDouble(h, l) + DoubleDouble(q3);
  }

  DoubleDouble& operator+=(const DoubleDouble& o) { return *this = *this + o; }
  DoubleDouble& operator-=(const DoubleDouble& o) { return *this = *this - o; }
  DoubleDouble& operator*=(const DoubleDouble& o) { return *this = *this * o; }
  DoubleDouble& operator/=(const DoubleDouble& o) { return *this = *this / o; }

  friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
  friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
  friend bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const DoubleDouble& x) {
    return os << x.hi_ << (x.lo_ >= 0 ? "+" : "") << x.lo_;
  }

private:
  struct Pair { double s, e; };

  static Pair two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }
  static Pair quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
  }
  static Pair two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

/// Uniform real-number helpers so templates can treat double and DoubleDouble alike.
namespace num {

inline double to_double(double x) { return x; }
inline double to_double(const DoubleDouble& x) { return x.hi() + x.lo(); }

inline double abs(double x) { return std::fabs(x); }
inline DoubleDouble abs(const DoubleDouble& x) { return x.hi() < 0 ? -x : x; }

inline double sqrt(double x) { return std::sqrt(x); }
inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi() <= 0.0) return DoubleDouble(0.0);
  const double x = std::sqrt(a.hi());
  const DoubleDouble y(x);
  return y + (a - y * y) * DoubleDouble(0.5 / x);
}

inline double ldexp(double x, int e) { return std::ldexp(x, e); }
inline DoubleDouble ldexp(const DoubleDouble& x, int e) {
  return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)};
}

inline double nearbyint(double x) { return std::nearbyint(x); }
inline DoubleDouble nearbyint(const DoubleDouble& x) {
  const double h = std::nearbyint(x.hi());
  if (h == x.hi()) return DoubleDouble(h) + DoubleDouble(std::nearbyint(x.lo()));
  const DoubleDouble rest = x - DoubleDouble(h);
  if (rest > DoubleDouble(0.5)) return DoubleDouble(h + 1.0);
  if (rest < DoubleDouble(-0.5)) return DoubleDouble(h - 1.0);
  return DoubleDouble(h);
}

template <class R> R epsilon();
template <> inline double epsilon<double>() { return std::numeric_limits<double>::epsilon(); }
template <> inline DoubleDouble epsilon<DoubleDouble>() { return DoubleDouble(std::ldexp(1.0, -104)); }

}  // namespace num
}  // namespace hqvi
