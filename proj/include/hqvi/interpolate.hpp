#pragma once

// Sampling, least-squares fitting and exact rounding of generating polynomials.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <type_traits>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "hqvi/evaluator.hpp"

namespace hqvi {

enum class Precision { F64, DD };

struct ComputeOptions {
  int samples = 0;  // 0: 2|S| + 4
  std::uint64_t seed = 0x5eed;
  int retries = 3;
  int threads = 1;
  std::optional<int> max_degree;
  double radius_ratio_limit = 1e2;
  SolverOptions solver;
};

/// Per-coordinate radii: log-spaced in [0.5, 2], pulled toward 1 until the
/// monomial magnitudes over the support span at most `limit`.
inline std::vector<double> choose_radii(int k, const std::vector<Multidegree>& support, double limit) {
  std::vector<double> logr(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j)
    logr[static_cast<std::size_t>(j)] = k == 1 ? 0.0 : std::log(0.5) + std::log(4.0) * j / (k - 1);
  for (int iter = 0; iter < 200; ++iter) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& d : support) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += d[static_cast<std::size_t>(j)] * logr[static_cast<std::size_t>(j)];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (support.empty() || hi - lo <= std::log(limit)) break;
    for (auto& v : logr) v *= 0.8;
  }
  std::vector<double> out;
  for (double v : logr) out.push_back(std::exp(v));
  return out;
}

inline std::vector<std::vector<std::complex<double>>> sample_parameters(int k, int count, std::uint64_t seed,
                                                                        const std::vector<double>& radii) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<std::complex<double>>> out;
  for (int m = 0; m < count; ++m) {
    std::vector<std::complex<double>> q;
    for (int j = 0; j < k; ++j) q.push_back(std::polar(radii[static_cast<std::size_t>(j)], 2.0 * std::numbers::pi * u(rng)));
    out.push_back(std::move(q));
  }
  return out;
}

inline std::vector<std::vector<std::complex<double>>> sample_parameters(int k, int count, std::uint64_t seed) {
  std::vector<double> radii;
  for (int j = 0; j < k; ++j) radii.push_back(k == 1 ? 1.0 : 0.5 * std::pow(4.0, static_cast<double>(j) / (k - 1)));
  return sample_parameters(k, count, seed, radii);
}

template <class R>
Integer to_integer(const R& x);

template <>
inline Integer to_integer<double>(const double& x) {
  return Integer(std::nearbyint(x));
}

template <>
inline Integer to_integer<DoubleDouble>(const DoubleDouble& x) {
  const DoubleDouble r = num::nearbyint(x);
  return Integer(r.hi()) + Integer(std::nearbyint(r.lo()));
}

/// Nearest R to an integer (exact while it fits the significand).
template <class R>
R integer_to_real(const Integer& c) {
  const double hi = c.template convert_to<double>();
  if constexpr (std::is_same_v<R, double>) return hi;
  else return R(hi) + R((c - Integer(hi)).template convert_to<double>());
}

template <class R>
struct Sample {
  std::vector<std::complex<double>> q;
  Complex<R> value;
};

template <class R>
Complex<R> monomial(const std::vector<std::complex<double>>& q, const Multidegree& d) {
  Complex<R> v(R(1.0));
  for (std::size_t j = 0; j < d.size(); ++j) v *= integer_power(Complex<R>::from(q[j]), d[j]);
  return v;
}

/// Least-squares fit over the support, rounded to integers and checked on
/// the last two samples.
template <class R>
GeneratingPolynomial fit_polynomial(int k, const std::vector<Multidegree>& support, const std::vector<Sample<R>>& samples) {
  GeneratingPolynomial poly(k);
  if (support.empty()) return poly;
  const std::size_t holdout = 2;
  if (samples.size() < support.size() + holdout)
    throw Error(ErrorCode::InvalidArgument, "need at least |support| + 2 samples");
  const std::size_t m = samples.size() - holdout;
  const std::size_t n = support.size();
  Matrix<R> v(m, n);
  std::vector<R> colscale(n, R(0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      v(i, c) = monomial<R>(samples[i].q, support[c]);
      colscale[c] = std::max(colscale[c], hqvi::abs(v(i, c)));
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < n; ++c) v(i, c) = v(i, c) * (R(1.0) / colscale[c]);
  std::vector<Complex<R>> rhs;
  for (std::size_t i = 0; i < m; ++i) rhs.push_back(samples[i].value);
  const auto sol = least_squares(v, rhs);
  if (!sol) throw Error(ErrorCode::RoundingUnsafe, "sample matrix is rank deficient");

  double worst_abs = 0.0;
  double worst_rel = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const Complex<R> coeff = (*sol)[c] * (R(1.0) / colscale[c]);
    const R rounded = num::nearbyint(coeff.re);
    const double err = num::to_double(hqvi::abs(coeff - Complex<R>(rounded)));
    const double mag = num::to_double(hqvi::abs(coeff));
    worst_abs = std::max(worst_abs, err);
    worst_rel = std::max(worst_rel, err / (1.0 + mag));
    if (!(err < 1e-3 * (1.0 + mag)) || !(err < 0.25))
      throw Error(ErrorCode::RoundingUnsafe, "coefficient is not close to an integer");
    poly.set(support[c], to_integer(rounded));
  }
  double resid = 0.0, scale = 0.0;
  for (std::size_t i = m; i < samples.size(); ++i) {
    Complex<R> pred;
    for (const auto& [d, c] : poly.terms()) {
      pred += Complex<R>(integer_to_real<R>(c)) * monomial<R>(samples[i].q, d);
    }
    resid = std::max(resid, num::to_double(hqvi::abs(pred - samples[i].value)));
    scale = std::max(scale, num::to_double(hqvi::abs(samples[i].value)));
  }
  const double rel = resid / std::max(scale, 1e-300);
  if (!(rel < 1e-6) && !(resid < 1e-9)) throw Error(ErrorCode::ResidualTooLarge, "held-out samples disagree with the fit");
  poly.metadata.diagnostics["max_rounding_error"] = worst_abs;
  poly.metadata.diagnostics["max_relative_rounding_error"] = worst_rel;
  poly.metadata.diagnostics["holdout_relative_residual"] = rel;
  return poly;
}

/// Runs f(0..count-1) on up to `threads` workers.
template <class F>
void parallel_for(int count, int threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, count); ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace detail {

template <class R>
GeneratingPolynomial compute_degree_zero(const ProblemSpec& spec, const Insertion& insertion, const ComputeOptions& opts) {
  GeneratingPolynomial poly(spec.k());
  const DegreeSupport support = degree_support(spec, insertion, opts.max_degree);
  if (support.chain_bound_used) poly.metadata.flags.push_back("chain_bound_used");
  if (support.degrees.empty()) return poly;
  const std::size_t count = opts.samples > 0 ? static_cast<std::size_t>(opts.samples) : 2 * support.degrees.size() + 4;
  const std::size_t needed = support.degrees.size() + 2;
  const std::vector<double> radii = choose_radii(spec.k(), support.degrees, opts.radius_ratio_limit);

  std::optional<Error> last_error;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    const std::uint64_t seed = mix_seed(opts.seed, static_cast<std::uint64_t>(attempt));
    const auto qs = sample_parameters(spec.k(), static_cast<int>(std::max(count, needed)), seed, radii);
    std::vector<std::optional<Sample<R>>> slots(qs.size());
    std::vector<SolveDiagnostics> diag(qs.size());
    std::vector<double> cond(qs.size(), 0.0);
    parallel_for(static_cast<int>(qs.size()), opts.threads, [&](int i) {
      std::vector<std::complex<double>> q = qs[static_cast<std::size_t>(i)];
      std::mt19937_64 rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int tries = 0; tries <= opts.retries; ++tries) {
        try {
          SolverOptions so = opts.solver;
          so.seed = mix_seed(seed, 5000 + static_cast<std::uint64_t>(i) * 16 + static_cast<std::uint64_t>(tries));
          const auto sols = solve<R>(spec, q, SolveMethod::Degeneration, so);
          const auto pv = eval_point(spec, insertion, q, sols, so.tol_sep_scale);
          slots[static_cast<std::size_t>(i)] = Sample<R>{q, pv.value};
          diag[static_cast<std::size_t>(i)] = sols.diagnostics;
          cond[static_cast<std::size_t>(i)] = pv.worst_condition;
          return;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::IncompleteSolutionSet && e.code() != ErrorCode::JNearZero) throw;
          for (std::size_t j = 0; j < q.size(); ++j) q[j] = std::polar(radii[j], 2.0 * std::numbers::pi * u(rng));
        }
      }
    });
    std::vector<Sample<R>> samples;
    SolveDiagnostics total;
    double worst_cond = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) continue;
      samples.push_back(*slots[i]);
      total.paths_tracked += diag[i].paths_tracked;
      total.retries_used += diag[i].retries_used;
      total.total_steps += diag[i].total_steps;
      total.worst_residual = std::max(total.worst_residual, diag[i].worst_residual);
      worst_cond = std::max(worst_cond, cond[i]);
    }
    if (samples.size() < needed) {
      last_error = Error(ErrorCode::IncompleteSolutionSet, "too few usable parameter samples");
      continue;
    }
    try {
      GeneratingPolynomial fitted = fit_polynomial<R>(spec.k(), support.degrees, samples);
      fitted.metadata.flags = poly.metadata.flags;
      auto& dg = fitted.metadata.diagnostics;
      dg["samples"] = static_cast<double>(samples.size());
      dg["support_size"] = static_cast<double>(support.degrees.size());
      dg["paths_tracked"] = static_cast<double>(total.paths_tracked);
      dg["path_retries"] = static_cast<double>(total.retries_used);
      dg["predictor_steps"] = static_cast<double>(total.total_steps);
      dg["worst_residual"] = total.worst_residual;
      dg["worst_condition"] = worst_cond;
      dg["fit_attempts"] = static_cast<double>(attempt + 1);
      for (const auto& [d, c] : fitted.terms())
        if (c < 0) {
          fitted.metadata.flags.push_back("negative_coefficient");
          break;
        }
      return fitted;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RoundingUnsafe && e.code() != ErrorCode::ResidualTooLarge) throw;
      last_error = e;
    }
  }
  throw *last_error;
}

}  // namespace detail

/// End-to-end: support, sampling, solving, evaluation and exact fitting.
template <class R = double>
GeneratingPolynomial compute(const ProblemSpec& spec_in, const Insertion& insertion, const ComputeOptions& opts = {}) {
  const ProblemSpec spec = validate_spec(spec_in);
  if (spec.equivariant())
    throw Error(ErrorCode::Unsupported, "polynomial recovery is non-equivariant; use solve for ε != 0");
  const DegreeReduction red = reduce_bundle_degree(spec, insertion);
  GeneratingPolynomial poly = detail::compute_degree_zero<R>(red.spec, red.insertion, opts);
  // Quotient degrees on the modified bundle may be negative, so no divisibility is required.
  Multidegree down = red.divisor;
  for (auto& x : down) x = -x;
  GeneratingPolynomial out = poly.shifted(down);
  out.metadata = poly.metadata;
  out.metadata.spec_hash = fnv1a(spec.canonical_string());
  out.metadata.insertion_hash = fnv1a(insertion.to_string());
  return out;
}

/// Runs in the requested precision. In F64 mode a failed rounding gate is
/// retried once in double-double, and the result is flagged.
inline GeneratingPolynomial compute(const ProblemSpec& spec, const Insertion& insertion, const ComputeOptions& opts,
                                   Precision precision) {
  if (precision == Precision::DD) return compute<DoubleDouble>(spec, insertion, opts);
  try {
    return compute<double>(spec, insertion, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RoundingUnsafe && e.code() != ErrorCode::ResidualTooLarge) throw;
  }
  GeneratingPolynomial out = compute<DoubleDouble>(spec, insertion, opts);
  out.metadata.flags.push_back("precision_escalated");
  return out;
}

}  // namespace hqvi
