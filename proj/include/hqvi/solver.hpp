#pragma once

// Homotopy continuation from the explicitly solvable start systems, one path
// per orbit of the level-wise permutation group.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hqvi/system.hpp"

namespace hqvi {

enum class SolveMethod { Degeneration, Equivariant };
enum class PathStatus { Converged, Diverged, CollidedWithDelta, StepLimitExceeded };

inline const char* path_status_name(PathStatus s) {
  switch (s) {
    case PathStatus::Converged: return "converged";
    case PathStatus::Diverged: return "diverged";
    case PathStatus::CollidedWithDelta: return "collided";
    case PathStatus::StepLimitExceeded: return "step_limit";
  }
  return "unknown";
}

struct SolverOptions {
  int max_steps = 10000;
  int retries = 3;
  double min_step = 1e-15;
  double initial_step = 0.02;
  double max_step = 0.1;
  double corrector_radius = 0.1;
  double tol_resid_scale = 1e-10;
  double tol_sep_scale = 1e-6;
  double divergence_bound = 1e10;
  std::uint64_t seed = 0x5eed;
};

struct HomotopyPath {
  std::vector<Cd> start;
  std::optional<BetheSolution<double>> end;
  int steps_taken = 0;
  int failures = 0;
  PathStatus status = PathStatus::StepLimitExceeded;
};

struct SolveDiagnostics {
  int paths_tracked = 0;
  int retries_used = 0;
  int failed_paths = 0;
  int near_degenerate = 0;
  double worst_residual = 0.0;
  double worst_condition = 0.0;
  long total_steps = 0;
};

template <class R>
struct SolutionSet {
  std::vector<BetheSolution<R>> representatives;
  long orbit_weight = 1;
  long expected_orbit_count = 0;
  bool complete = false;
  SolveDiagnostics diagnostics;
};

inline long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  long out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

inline long expected_orbit_count(const ProblemSpec& spec) {
  long c = 1;
  for (int j = 1; j <= spec.k(); ++j) c *= binomial(spec.rank(j + 1), spec.rank(j));
  return c;
}

inline long orbit_weight(const ProblemSpec& spec) {
  long w = 1;
  for (int j = 1; j <= spec.k(); ++j)
    for (int i = 2; i <= spec.rank(j); ++i) w *= i;
  return w;
}

/// All size-r index subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> index_subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) cur[static_cast<std::size_t>(i)] = i;
  if (r > n) return out;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// The m distinct m-th roots of c.
inline std::vector<Cd> nth_roots(std::complex<double> c, int m) {
  std::vector<Cd> out;
  const double rad = std::pow(std::abs(c), 1.0 / m);
  const double arg = std::arg(c);
  for (int i = 0; i < m; ++i) out.push_back(Cd::from(std::polar(rad, (arg + 2.0 * std::numbers::pi * i) / m)));
  return out;
}

/// Start points of the degenerate fiber t = 0; q in the DegenerationSign convention.
inline std::vector<std::vector<Cd>> start_solutions_degeneration(const ProblemSpec& spec,
                                                                 const std::vector<std::complex<double>>& qd) {
  for (const auto& v : qd)
    if (v == std::complex<double>{}) throw Error(ErrorCode::ZeroParameter, "all q_j must be nonzero");
  std::vector<std::vector<Cd>> partial{{}};
  for (int j = 1; j <= spec.k(); ++j) {
    const int up = spec.rank(j + 1);
    const int r = spec.rank(j);
    const int down = spec.rank(j - 1);
    std::vector<std::vector<Cd>> next;
    for (const auto& prefix : partial) {
      std::complex<double> rhs = qd[static_cast<std::size_t>(j - 1)] * (down % 2 == 0 ? 1.0 : -1.0);
      for (int b = 0; b < down; ++b) rhs *= prefix[prefix.size() - static_cast<std::size_t>(down - b)].to_std();
      const auto roots = nth_roots(rhs, up);
      for (const auto& subset : index_subsets(up, r)) {
        auto v = prefix;
        for (int i : subset) v.push_back(roots[static_cast<std::size_t>(i)]);
        next.push_back(std::move(v));
      }
    }
    partial = std::move(next);
  }
  return partial;
}

/// Start points at q = 0: nested subsets of the ε values.
inline std::vector<std::vector<Cd>> start_solutions_equivariant(const ProblemSpec& spec) {
  const ProblemSpec s = validate_spec(spec);
  if (!s.equivariant()) throw Error(ErrorCode::EquivariantParamsDegenerate, "equivariant start needs distinct ε");
  const int k = s.k();
  // chains[i] holds S_k, S_{k-1}, ..., built top-down as index lists into ε.
  std::vector<std::vector<std::vector<int>>> chains;
  for (const auto& top : index_subsets(s.ambient_rank, s.rank(k))) chains.push_back({top});
  for (int j = k - 1; j >= 1; --j) {
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& ch : chains) {
      const auto& parent = ch.back();
      for (const auto& sub : index_subsets(static_cast<int>(parent.size()), s.rank(j))) {
        auto c = ch;
        std::vector<int> picked;
        for (int i : sub) picked.push_back(parent[static_cast<std::size_t>(i)]);
        c.push_back(std::move(picked));
        next.push_back(std::move(c));
      }
    }
    chains = std::move(next);
  }
  std::vector<std::vector<Cd>> out;
  for (const auto& ch : chains) {
    std::vector<Cd> v;
    for (int j = 1; j <= k; ++j)
      for (int i : ch[static_cast<std::size_t>(k - j)]) v.push_back(Cd::from(s.eps[static_cast<std::size_t>(i)]));
    out.push_back(std::move(v));
  }
  return out;
}

/// Quadratic Bézier arc 0 -> 1 bowing through the control point p.
struct TArc {
  Cd p{0.5, 0.0};

  [[nodiscard]] Cd at(double l) const {
    return p * (2.0 * l * (1.0 - l)) + Cd(l * l);
  }
  [[nodiscard]] Cd derivative(double l) const { return p * (2.0 - 4.0 * l) + Cd(2.0 * l); }

  static TArc random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::bernoulli_distribution side(0.5);
    const double h = 0.3 * u(rng) * (side(rng) ? 1.0 : -1.0);
    return TArc{Cd(0.5, h)};
  }
};

/// A homotopy in one parameter τ along an arc; τ = 1 is the target system.
struct HomotopyFamily {
  SystemKernel<double> kernel;
  SolveMethod method;

  void evaluate(const std::vector<Cd>& z, const Cd& tau, std::vector<Cd>* h, Matrix<double>* jac,
                std::vector<Cd>* dtau) const {
    const Cd one(1.0);
    if (method == SolveMethod::Degeneration) kernel.evaluate(z, tau, one, h, jac, dtau, nullptr);
    else kernel.evaluate(z, one, tau, h, jac, nullptr, dtau);
  }
};

namespace detail {

inline double vec_norm(const std::vector<Cd>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x.to_std()));
  return m;
}

/// Newton at fixed τ. Returns true on convergence within max_iter steps.
inline bool newton_correct(const HomotopyFamily& fam, std::vector<Cd>& z, const Cd& tau, int max_iter, double tol,
                           double first_step_bound) {
  std::vector<Cd> h;
  Matrix<double> jac;
  double prev = INFINITY;
  for (int it = 0; it < max_iter; ++it) {
    fam.evaluate(z, tau, &h, &jac, nullptr);
    LuDecomposition<double> lu(jac);
    if (lu.singular()) return false;
    const auto dz = lu.solve(h);
    const double step = vec_norm(dz);
    if (!std::isfinite(step)) return false;
    if (it == 0 && step > first_step_bound) return false;
    if (it > 0 && step > 0.5 * prev) return false;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= dz[i];
    if (step <= tol * (1.0 + vec_norm(z))) return true;
    prev = step;
  }
  return false;
}

}  // namespace detail

/// Euler predictor / Newton corrector along λ in [0, 1], τ = arc(λ).
inline HomotopyPath track_path(const HomotopyFamily& fam, const std::vector<Cd>& start, const TArc& arc,
                               const SolverOptions& opts) {
  HomotopyPath path;
  path.start = start;
  std::vector<Cd> z = start;
  double lambda = 0.0;
  double h = opts.initial_step;
  int streak = 0;
  std::vector<Cd> dtau;
  Matrix<double> jac;
  const LevelLayout& layout = fam.kernel.layout();
  while (lambda < 1.0) {
    if (path.steps_taken >= opts.max_steps) {
      path.status = PathStatus::StepLimitExceeded;
      return path;
    }
    ++path.steps_taken;
    h = std::min(h, 1.0 - lambda);
    fam.evaluate(z, arc.at(lambda), nullptr, &jac, &dtau);
    LuDecomposition<double> lu(jac);
    bool ok = !lu.singular();
    std::vector<Cd> trial = z;
    if (ok) {
      const Cd dl = arc.derivative(lambda);
      for (auto& v : dtau) v = v * dl;
      const auto dz = lu.solve(dtau);
      for (std::size_t i = 0; i < z.size(); ++i) trial[i] -= dz[i] * h;
      const double scale = 1.0 + detail::vec_norm(z);
      const double next = lambda + h >= 1.0 - 1e-15 ? 1.0 : lambda + h;
      // Clustered entries (small ε) need a correction radius below their spacing.
      const double radius = std::min(opts.corrector_radius * scale, 0.25 * min_separation(layout, z));
      ok = detail::newton_correct(fam, trial, arc.at(next), 3, 1e-9, radius);
      if (ok) {
        lambda = next;
        z = std::move(trial);
        if (++streak >= 3) {
          h = std::min(h * 1.5, opts.max_step);
          streak = 0;
        }
        if (detail::vec_norm(z) > opts.divergence_bound) {
          path.status = PathStatus::Diverged;
          return path;
        }
        continue;
      }
    }
    ++path.failures;
    streak = 0;
    h *= 0.5;
    if (h < opts.min_step) {
      const double sep = min_separation(layout, z);
      path.status = sep <= opts.tol_sep_scale * (1.0 + detail::vec_norm(z)) ? PathStatus::CollidedWithDelta
                                                                            : PathStatus::StepLimitExceeded;
      return path;
    }
  }
  // Endpoint polish on the target system.
  detail::newton_correct(fam, z, Cd(1.0), 8, 1e-14, INFINITY);
  BetheSolution<double> end;
  end.z = z;
  std::vector<Cd> res;
  fam.evaluate(z, Cd(1.0), &res, nullptr, nullptr);
  end.residual_norm = detail::vec_norm(res);
  end.min_separation = min_separation(layout, z);
  path.end = end;
  path.status = end.min_separation <= opts.tol_sep_scale * (1.0 + detail::vec_norm(z)) ? PathStatus::CollidedWithDelta
                                                                                       : PathStatus::Converged;
  return path;
}

/// Newton refinement on the target system in precision R, until the update
/// stops shrinking.
template <class R>
std::vector<Complex<R>> polish(const BetheSystem<R>& sys, std::vector<Complex<R>> z, int max_iter = 12) {
  double prev = INFINITY;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<Complex<R>> h;
    Matrix<R> jac;
    sys.kernel().evaluate(z, Complex<R>(R(1.0)), Complex<R>(R(1.0)), &h, &jac, nullptr, nullptr);
    LuDecomposition<R> lu(jac);
    if (lu.singular()) break;
    const auto dz = lu.solve(h);
    double step = 0.0;
    for (const auto& v : dz) step = std::max(step, num::to_double(hqvi::abs(v)));
    if (!std::isfinite(step) || step > 2.0 * prev) break;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= dz[i];
    if (step <= 4.0 * num::to_double(num::epsilon<R>()) * (1.0 + max_abs(z))) break;
    prev = step;
  }
  return z;
}

/// Sort each level by the rounded (real, imaginary) key.
template <class R>
void canonicalize(const LevelLayout& layout, std::vector<Complex<R>>& z, double tol_sep) {
  for (int j = 1; j <= layout.levels(); ++j) {
    auto first = z.begin() + static_cast<long>(layout.offset(j));
    auto last = first + static_cast<long>(layout.size(j));
    std::sort(first, last, [tol_sep](const Complex<R>& a, const Complex<R>& b) {
      const double ar = std::round(num::to_double(a.re) / tol_sep), br = std::round(num::to_double(b.re) / tol_sep);
      if (ar != br) return ar < br;
      const double ai = std::round(num::to_double(a.im) / tol_sep), bi = std::round(num::to_double(b.im) / tol_sep);
      if (ai != bi) return ai < bi;
      return std::make_pair(num::to_double(a.re), num::to_double(a.im)) <
             std::make_pair(num::to_double(b.re), num::to_double(b.im));
    });
  }
}

/// True when b is a level-wise permutation of a up to tol.
template <class R>
bool same_orbit(const LevelLayout& layout, const std::vector<Complex<R>>& a, const std::vector<Complex<R>>& b,
                double tol) {
  for (int j = 1; j <= layout.levels(); ++j) {
    const std::size_t off = layout.offset(j), n = layout.size(j);
    std::vector<bool> used(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      bool found = false;
      for (std::size_t t = 0; t < n && !found; ++t) {
        if (used[t]) continue;
        if (num::to_double(hqvi::abs(a[off + s] - b[off + t])) <= tol) {
          used[t] = true;
          found = true;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

/// All non-degenerate solutions at q (PaperSign), one per orbit.
template <class R = double>
SolutionSet<R> solve(const ProblemSpec& spec_in, const std::vector<std::complex<double>>& q, SolveMethod method,
                     const SolverOptions& opts = {}) {
  const ProblemSpec spec = validate_spec(spec_in);
  if (static_cast<int>(q.size()) != spec.k()) throw Error(ErrorCode::InvalidArgument, "need one q per level");
  if (method == SolveMethod::Degeneration && spec.equivariant())
    throw Error(ErrorCode::InvalidArgument, "degeneration method requires ε = 0");
  if (method == SolveMethod::Equivariant && !spec.equivariant())
    throw Error(ErrorCode::EquivariantParamsDegenerate, "equivariant method requires distinct nonzero ε");
  for (const auto& v : q)
    if (std::abs(v) == 0.0) throw Error(ErrorCode::ZeroParameter, "all q_j must be nonzero");

  const BetheSystem<double> target(spec, q, SignMode::PaperSign);
  const BetheSystem<R> target_r(spec, q, SignMode::PaperSign);
  const HomotopyFamily fam{target.kernel(), method};
  const auto starts = method == SolveMethod::Degeneration
                          ? start_solutions_degeneration(spec, sign_convert_q(spec, q, SignMode::PaperSign,
                                                                              SignMode::DegenerationSign))
                          : start_solutions_equivariant(spec);

  SolutionSet<R> out;
  out.orbit_weight = orbit_weight(spec);
  out.expected_orbit_count = expected_orbit_count(spec);
  const double tol_resid = target.tol_resid(opts.tol_resid_scale);

  // Endpoints are in bijection with start points only when every path follows
  // the same arc, so a retry redraws the arc for the whole set.
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
  SolverOptions careful = opts;
  careful.max_step = opts.max_step * 0.1;
  careful.initial_step = opts.initial_step * 0.1;
  careful.corrector_radius = opts.corrector_radius * 0.1;
  std::size_t failed_last = starts.size();
  for (int round = 0; round <= opts.retries; ++round) {
    if (round > 0) ++out.diagnostics.retries_used;
    const TArc arc = TArc::random(rng);
    std::vector<BetheSolution<R>> found;
    std::size_t failed = 0;
    for (const auto& start_point : starts) {
      std::optional<BetheSolution<R>> accepted;
      for (int pass = 0; pass < 2 && !accepted; ++pass) {
        const HomotopyPath path = track_path(fam, start_point, arc, pass == 0 ? opts : careful);
        ++out.diagnostics.paths_tracked;
        out.diagnostics.total_steps += path.steps_taken;
        if (path.status != PathStatus::Converged) continue;
        std::vector<Complex<R>> z;
        for (const auto& v : path.end->z) z.push_back(Complex<R>::from(v));
        z = polish(target_r, std::move(z));
        BetheSolution<R> sol = target_r.make_solution(std::move(z));
        const double tol_sep = opts.tol_sep_scale * (1.0 + max_abs(sol.z));
        if (!(sol.residual_norm < tol_resid) || !(sol.min_separation > tol_sep)) continue;
        canonicalize(target_r.layout(), sol.z, tol_sep);
        const bool dup = std::any_of(found.begin(), found.end(), [&](const auto& other) {
          return same_orbit(target_r.layout(), other.z, sol.z, tol_sep);
        });
        if (dup) continue;
        sol.near_degenerate = sol.min_separation <= 10.0 * tol_sep;
        accepted = std::move(sol);
      }
      if (accepted) found.push_back(std::move(*accepted));
      else ++failed;
    }
    failed_last = failed;
    if (found.size() > out.representatives.size()) out.representatives = std::move(found);
    if (failed == 0 && static_cast<long>(out.representatives.size()) == out.expected_orbit_count) break;
  }

  out.diagnostics.failed_paths = static_cast<int>(failed_last);
  for (const auto& s : out.representatives) {
    out.diagnostics.worst_residual = std::max(out.diagnostics.worst_residual, s.residual_norm);
    out.diagnostics.worst_condition = std::max(out.diagnostics.worst_condition, s.jacobian_condition);
    if (s.near_degenerate) ++out.diagnostics.near_degenerate;
  }
  // Deterministic order: by the canonical coordinates.
  std::sort(out.representatives.begin(), out.representatives.end(), [](const auto& a, const auto& b) {
    for (std::size_t i = 0; i < a.z.size(); ++i) {
      const double ar = num::to_double(a.z[i].re), br = num::to_double(b.z[i].re);
      if (ar != br) return ar < br;
      const double ai = num::to_double(a.z[i].im), bi = num::to_double(b.z[i].im);
      if (ai != bi) return ai < bi;
    }
    return false;
  });
  out.complete = static_cast<long>(out.representatives.size()) == out.expected_orbit_count;
  if (!out.complete)
    throw Error(ErrorCode::IncompleteSolutionSet,
                "found " + std::to_string(out.representatives.size()) + " of " +
                    std::to_string(out.expected_orbit_count) + " solution orbits");
  return out;
}

}  // namespace hqvi
