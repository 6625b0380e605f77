#pragma once

// The Bethe-type system: one equation per variable z_{s,j},
//
//   H_{s,j} = prod_a (z_{s,j} - t*u_a) - c_j*sc * prod_b (t*z_{s,j} - d_b),
//
// where u runs over level j+1 (the ε values above level k) and d over level
// j-1. At t = sc = 1 this is the target system; the two homotopies move t or
// sc from 0 to 1.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "hqvi/complex.hpp"
#include "hqvi/core.hpp"
#include "hqvi/linalg.hpp"

namespace hqvi {

enum class SignMode { PaperSign, DegenerationSign };

/// (-1)^{r_j - r_{j-1} + 1}: the sign relating the two conventions for q_j.
inline int sign_flip(const ProblemSpec& spec, int j) {
  return ((spec.rank(j) - spec.rank(j - 1) + 1) % 2 == 0) ? 1 : -1;
}

inline std::vector<std::complex<double>> sign_convert_q(const ProblemSpec& spec,
                                                        std::vector<std::complex<double>> q, SignMode from,
                                                        SignMode to) {
  if (from == to) return q;
  for (int j = 1; j <= spec.k(); ++j)
    if (sign_flip(spec, j) < 0) q[static_cast<std::size_t>(j - 1)] = -q[static_cast<std::size_t>(j - 1)];
  return q;
}

/// Flat index of z_{s,j}: levels stored consecutively, level 1 first.
class LevelLayout {
public:
  LevelLayout() = default;
  explicit LevelLayout(const ProblemSpec& spec) : offsets_(static_cast<std::size_t>(spec.k()) + 2, 0) {
    for (int j = 1; j <= spec.k(); ++j)
      offsets_[static_cast<std::size_t>(j + 1)] = offsets_[static_cast<std::size_t>(j)] + spec.rank(j);
    sizes_.assign(static_cast<std::size_t>(spec.k()) + 1, 0);
    for (int j = 1; j <= spec.k(); ++j) sizes_[static_cast<std::size_t>(j)] = spec.rank(j);
  }

  [[nodiscard]] std::size_t offset(int j) const { return offsets_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] std::size_t size(int j) const { return sizes_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] std::size_t index(int s, int j) const { return offset(j) + static_cast<std::size_t>(s); }
  [[nodiscard]] std::size_t total() const { return offsets_.back(); }
  [[nodiscard]] int levels() const { return static_cast<int>(sizes_.size()) - 1; }

private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
};

template <class R>
struct BetheSolution {
  std::vector<Complex<R>> z;
  double residual_norm = 0.0;
  double min_separation = 0.0;
  double jacobian_condition = 0.0;
  bool near_degenerate = false;
};

/// Smallest within-level distance (infinite when every level has one entry).
template <class R>
double min_separation(const LevelLayout& layout, const std::vector<Complex<R>>& z) {
  double best = INFINITY;
  for (int j = 1; j <= layout.levels(); ++j)
    for (std::size_t a = 0; a < layout.size(j); ++a)
      for (std::size_t b = a + 1; b < layout.size(j); ++b)
        best = std::min(best, num::to_double(hqvi::abs(z[layout.offset(j) + a] - z[layout.offset(j) + b])));
  return best;
}

template <class R>
double max_abs(const std::vector<Complex<R>>& z) {
  double m = 0.0;
  for (const auto& v : z) m = std::max(m, num::to_double(hqvi::abs(v)));
  return m;
}

/// Evaluates the unified family. Any of the optional outputs may be null.
template <class R>
class SystemKernel {
public:
  SystemKernel(const ProblemSpec& spec, std::vector<Complex<R>> c, std::vector<Complex<R>> top)
      : layout_(spec), c_(std::move(c)), top_(std::move(top)) {}

  [[nodiscard]] const LevelLayout& layout() const { return layout_; }
  [[nodiscard]] const std::vector<Complex<R>>& coefficients() const { return c_; }
  [[nodiscard]] const std::vector<Complex<R>>& top() const { return top_; }

  void evaluate(const std::vector<Complex<R>>& z, const Complex<R>& t, const Complex<R>& sc,
                std::vector<Complex<R>>* h, Matrix<R>* jac, std::vector<Complex<R>>* dt,
                std::vector<Complex<R>>* dsc) const {
    const std::size_t nvar = layout_.total();
    if (h) h->assign(nvar, Complex<R>());
    if (jac) *jac = Matrix<R>(nvar, nvar);
    if (dt) dt->assign(nvar, Complex<R>());
    if (dsc) dsc->assign(nvar, Complex<R>());
    const int k = layout_.levels();
    std::vector<Complex<R>> fa, pa, sa, fb, pb, sb;
    for (int j = 1; j <= k; ++j) {
      const Complex<R> cj = c_[static_cast<std::size_t>(j - 1)];
      const Complex<R> cc = cj * sc;
      const bool top_level = j == k;
      const std::size_t nu = top_level ? top_.size() : layout_.size(j + 1);
      const std::size_t nd = j > 1 ? layout_.size(j - 1) : 0;
      auto up = [&](std::size_t a) -> const Complex<R>& { return top_level ? top_[a] : z[layout_.offset(j + 1) + a]; };
      auto down = [&](std::size_t b) -> const Complex<R>& { return z[layout_.offset(j - 1) + b]; };
      for (std::size_t s = 0; s < layout_.size(j); ++s) {
        const std::size_t row = layout_.offset(j) + s;
        const Complex<R> x = z[row];
        fa.resize(nu);
        for (std::size_t a = 0; a < nu; ++a) fa[a] = x - t * up(a);
        fb.resize(nd);
        for (std::size_t b = 0; b < nd; ++b) fb[b] = t * x - down(b);
        exclusive_products(fa, pa, sa);
        exclusive_products(fb, pb, sb);
        const Complex<R> A = pa.back();
        const Complex<R> B = pb.back();
        if (h) (*h)[row] = A - cc * B;
        if (!jac && !dt && !dsc) continue;
        Complex<R> sum_a, sum_b, sum_ua;
        for (std::size_t a = 0; a < nu; ++a) {
          const Complex<R> ex = pa[a] * sa[a + 1];
          sum_a += ex;
          sum_ua += up(a) * ex;
          if (jac && !top_level) (*jac)(row, layout_.offset(j + 1) + a) = -(t * ex);
        }
        for (std::size_t b = 0; b < nd; ++b) {
          const Complex<R> ex = pb[b] * sb[b + 1];
          sum_b += ex;
          if (jac) (*jac)(row, layout_.offset(j - 1) + b) = cc * ex;
        }
        if (jac) (*jac)(row, row) = sum_a - cc * t * sum_b;
        if (dt) (*dt)[row] = -sum_ua - cc * x * sum_b;
        if (dsc) (*dsc)[row] = -(cj * B);
      }
    }
  }

private:
  // prefix[i] = f_0...f_{i-1}, suffix[i] = f_i...f_{n-1}; prefix.back() is the full product.
  static void exclusive_products(const std::vector<Complex<R>>& f, std::vector<Complex<R>>& prefix,
                                 std::vector<Complex<R>>& suffix) {
    const std::size_t n = f.size();
    prefix.assign(n + 1, Complex<R>(R(1.0)));
    suffix.assign(n + 1, Complex<R>(R(1.0)));
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * f[i];
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * f[i];
  }

  LevelLayout layout_;
  std::vector<Complex<R>> c_;
  std::vector<Complex<R>> top_;
};

/// The target system at a fixed parameter point.
template <class R>
class BetheSystem {
public:
  BetheSystem(const ProblemSpec& spec, const std::vector<std::complex<double>>& q, SignMode mode)
      : spec_(spec), q_(q), mode_(mode), kernel_(spec, unified(spec, q, mode), top_of(spec)) {}

  [[nodiscard]] const ProblemSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<std::complex<double>>& q() const { return q_; }
  [[nodiscard]] SignMode sign_mode() const { return mode_; }
  [[nodiscard]] const LevelLayout& layout() const { return kernel_.layout(); }
  [[nodiscard]] std::size_t total_vars() const { return kernel_.layout().total(); }
  [[nodiscard]] const SystemKernel<R>& kernel() const { return kernel_; }

  [[nodiscard]] std::vector<Complex<R>> eval(const std::vector<Complex<R>>& z) const {
    std::vector<Complex<R>> h;
    kernel_.evaluate(z, one(), one(), &h, nullptr, nullptr, nullptr);
    return h;
  }

  [[nodiscard]] Matrix<R> jacobian(const std::vector<Complex<R>>& z) const {
    Matrix<R> jac;
    kernel_.evaluate(z, one(), one(), nullptr, &jac, nullptr, nullptr);
    return jac;
  }

  [[nodiscard]] double residual_norm(const std::vector<Complex<R>>& z) const {
    double m = 0.0;
    for (const auto& v : eval(z)) m = std::max(m, num::to_double(hqvi::abs(v)));
    return m;
  }

  [[nodiscard]] double tol_resid(double scale = 1e-10) const {
    double m = 0.0;
    for (const auto& v : q_) m = std::max(m, std::abs(v));
    return scale * (1.0 + m);
  }

  [[nodiscard]] BetheSolution<R> make_solution(std::vector<Complex<R>> z) const {
    BetheSolution<R> sol;
    sol.residual_norm = residual_norm(z);
    sol.min_separation = min_separation(layout(), z);
    sol.jacobian_condition = condition_number_1(jacobian(z));
    sol.z = std::move(z);
    return sol;
  }

  /// c_j of the unified form for the given q and convention.
  static std::vector<Complex<R>> unified(const ProblemSpec& spec, const std::vector<std::complex<double>>& q,
                                         SignMode mode) {
    const auto qd = sign_convert_q(spec, q, mode, SignMode::DegenerationSign);
    std::vector<Complex<R>> c;
    for (const auto& v : qd) c.push_back(Complex<R>::from(v));
    return c;
  }

  static std::vector<Complex<R>> top_of(const ProblemSpec& spec) {
    std::vector<Complex<R>> top;
    for (const auto& e : spec.top_values()) top.push_back(Complex<R>::from(e));
    return top;
  }

private:
  static Complex<R> one() { return Complex<R>(R(1.0)); }

  ProblemSpec spec_;
  std::vector<std::complex<double>> q_;
  SignMode mode_;
  SystemKernel<R> kernel_;
};

/// prod_{a != b} (x_a - x_b) over ordered pairs.
template <class R>
ScaledComplex<R> ordered_vandermonde(const std::vector<Complex<R>>& x) {
  ScaledComplex<R> out(Complex<R>(R(1.0)));
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      const Complex<R> d = x[a] - x[b];
      out *= ScaledComplex<R>(-(d * d));
    }
  return out;
}

/// det(Jacobian) / prod_l Δ(z_l).
template <class R>
ScaledComplex<R> eval_J_factor(const BetheSystem<R>& sys, const BetheSolution<R>& sol, double tol_sep_scale = 1e-6) {
  const double tol_sep = tol_sep_scale * (1.0 + max_abs(sol.z));
  if (min_separation(sys.layout(), sol.z) <= tol_sep)
    throw Error(ErrorCode::DegenerateSolution, "solution has repeated entries within a level");
  // Sorting each level first makes the result bit-identical across orbit members.
  const auto& layout = sys.layout();
  std::vector<Complex<R>> z = sol.z;
  for (int l = 1; l <= layout.levels(); ++l)
    std::sort(z.begin() + static_cast<long>(layout.offset(l)),
              z.begin() + static_cast<long>(layout.offset(l) + layout.size(l)),
              [](const Complex<R>& a, const Complex<R>& b) { return a.re < b.re || (a.re == b.re && a.im < b.im); });
  LuDecomposition<R> lu(sys.jacobian(z));
  ScaledComplex<R> j = lu.determinant();
  for (int l = 1; l <= layout.levels(); ++l) {
    std::vector<Complex<R>> level(z.begin() + static_cast<long>(layout.offset(l)),
                                  z.begin() + static_cast<long>(layout.offset(l) + layout.size(l)));
    j = j / ordered_vandermonde(level);
  }
  return j;
}

}  // namespace hqvi
