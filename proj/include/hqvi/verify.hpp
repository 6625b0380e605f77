#pragma once

// The acceptance matrix: oracle comparisons, identity checks and numerical
// hygiene. Shared by `hqvi verify` and the acceptance test binary.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hqvi/identities.hpp"
#include "hqvi/oracles.hpp"
#include "hqvi/serialize.hpp"

namespace hqvi {

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::uint64_t seed2 = 8;
  int threads = 1;
  Precision precision = Precision::F64;
};

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace verify_detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

inline ProblemSpec make_spec(int g, int n, std::vector<int> ranks, int e = 0) {
  ProblemSpec s;
  s.genus = g;
  s.ambient_rank = n;
  s.ranks = std::move(ranks);
  s.bundle_degree = e;
  return s;
}

inline std::string spec_label(const ProblemSpec& s) {
  std::string out = "g=" + std::to_string(s.genus) + " n=" + std::to_string(s.ambient_rank) + " r=(";
  for (std::size_t i = 0; i < s.ranks.size(); ++i) out += (i ? "," : "") + std::to_string(s.ranks[i]);
  out += ")";
  if (s.bundle_degree != 0) out += " e=" + std::to_string(s.bundle_degree);
  return out;
}

inline ComputeOptions compute_options(const VerifyOptions& v, std::uint64_t salt = 0) {
  ComputeOptions o;
  o.seed = mix_seed(v.seed, salt);
  o.threads = v.threads;
  return o;
}

/// Runs body, turning exceptions into a failed result.
inline CheckResult run_check(const std::string& group, const std::string& name,
                             const std::function<bool(std::string&)>& body, double time_limit = 0.0) {
  CheckResult r;
  r.group = group;
  r.name = name;
  const auto t0 = Clock::now();
  try {
    r.passed = body(r.detail);
  } catch (const Error& e) {
    r.passed = false;
    r.detail = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.seconds = since(t0);
  if (time_limit > 0.0 && r.seconds > time_limit) {
    r.passed = false;
    r.detail += " (exceeded " + std::to_string(time_limit) + " s)";
  }
  return r;
}

inline bool expect_equal(const GeneratingPolynomial& got, const GeneratingPolynomial& want, std::string& detail) {
  if (got == want) {
    detail = got.to_string();
    return true;
  }
  detail = "got " + got.to_string() + ", expected " + want.to_string();
  return false;
}

inline Insertion elem_power(int i, int j, int power) {
  return Insertion::monomial(std::vector<Primitive>(static_cast<std::size_t>(power), Primitive::elem_sym(i, j)));
}

/// Multiplies `base` by c_1 at level 1 until its degree reaches an attainable
/// virtual dimension, at least `extra` steps of d above the minimum.
inline Insertion pad_to_support(const ProblemSpec& spec, const Insertion& base, int extra) {
  const int have = base.degree(spec);
  const long v0 = virtual_dimension(spec, Multidegree(static_cast<std::size_t>(spec.k()), 0));
  int g = 0;
  for (int i = 1; i <= spec.k(); ++i) g = std::gcd(g, spec.rho(i));
  long target = std::max<long>(have, v0);
  while ((target - v0) % g != 0) ++target;
  target += static_cast<long>(extra) * g;
  return base.times(Primitive::elem_sym(1, 1), static_cast<int>(target - have));
}

}  // namespace verify_detail

// 1. Genus-13 polynomial for the chain (1, 2).
inline std::vector<CheckResult> verify_golden(const VerifyOptions& v) {
  using namespace verify_detail;
  return {run_check(
      "golden", "g=13 n=3 r=(1,2) insertion 1",
      [&](std::string& d) {
        const auto p = compute(make_spec(13, 3, {1, 2}), Insertion(), compute_options(v), v.precision);
        GeneratingPolynomial want(2);
        want.set({10, 8}, Integer("13060694016"));
        want.set({9, 9}, Integer("261213880320"));
        want.set({8, 10}, Integer("13060694016"));
        return expect_equal(p, want, d);
      },
      60.0)};
}

// 2. Chain (1, n-1) against the binomial closed form.
inline std::vector<CheckResult> verify_two_step(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 2));
  for (int n : {3, 4})
    for (int g : {0, 1, 2})
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<int> m(static_cast<std::size_t>(n - 1));
        std::uniform_int_distribution<int> mdist(0, n == 3 ? 2 : 1);
        for (auto& x : m) x = mdist(rng);
        int l = std::uniform_int_distribution<int>(0, 3)(rng);
        long num = l + static_cast<long>(2 * n - 3) * (g - 1);
        for (std::size_t i = 0; i < m.size(); ++i) num += static_cast<long>(i + 1) * m[i];
        while (num < 0 || num % (n - 1) != 0) {
          ++l;
          ++num;
        }
        std::vector<Primitive> prims(static_cast<std::size_t>(l), Primitive::elem_sym(1, 1));
        for (std::size_t i = 0; i < m.size(); ++i)
          for (int p = 0; p < m[i]; ++p) prims.push_back(Primitive::elem_sym(static_cast<int>(i + 1), 2));
        const Insertion ins = Insertion::monomial(prims);
        const ProblemSpec spec = make_spec(g, n, {1, n - 1});
        out.push_back(run_check(
            "two_step", spec_label(spec) + " " + ins.to_string(),
            [&](std::string& d) {
              return expect_equal(compute(spec, ins, compute_options(v, 200 + out.size()), v.precision),
                                  oracle_two_step(g, n, l, m), d);
            },
            30.0));
      }
  return out;
}

// 3. Punctual chains (n, ..., n) against the product of α_j, at two genera.
inline std::vector<CheckResult> verify_punctual(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 3));
  for (const auto& [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}})
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<std::vector<int>> m(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(n), 0));
      std::vector<Primitive> prims;
      for (int j = 1; j <= k; ++j) {
        const int top = std::uniform_int_distribution<int>(0, k == 3 ? 1 : 2)(rng);
        m[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(n - 1)] = top;
        for (int p = 0; p < top; ++p) prims.push_back(Primitive::elem_sym(n, j));
      }
      if (rep == 4) {
        // One pattern with a lower Chern class, which must give zero.
        const int j = std::uniform_int_distribution<int>(1, k)(rng);
        m[static_cast<std::size_t>(j - 1)][0] += n;
        for (int p = 0; p < n; ++p) prims.push_back(Primitive::elem_sym(1, j));
      }
      const Insertion ins = Insertion::monomial(prims);
      std::vector<int> ranks(static_cast<std::size_t>(k), n);
      out.push_back(run_check("punctual", "n=" + std::to_string(n) + " k=" + std::to_string(k) + " " + ins.to_string(),
                              [&](std::string& d) {
                                const auto want = oracle_points(n, k, m);
                                const auto p0 = compute(make_spec(0, n, ranks), ins, compute_options(v, 300), v.precision);
                                const auto p5 = compute(make_spec(5, n, ranks), ins, compute_options(v, 301), v.precision);
                                if (!(p0 == p5)) {
                                  d = "genus 0 gives " + p0.to_string() + ", genus 5 gives " + p5.to_string();
                                  return false;
                                }
                                return expect_equal(p0, want, d);
                              }));
    }
  return out;
}

// 4. Single-step chains against the root-sum closed form.
inline std::vector<CheckResult> verify_quot_k1(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 4));
  auto add = [&](int g, int n, int r, std::vector<int> m) {
    std::vector<Primitive> prims;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int p = 0; p < m[i]; ++p) prims.push_back(Primitive::elem_sym(static_cast<int>(i + 1), 1));
    const Insertion ins = prims.empty() ? Insertion() : Insertion::monomial(prims);
    const ProblemSpec spec = make_spec(g, n, {r});
    out.push_back(run_check("quot_k1", spec_label(spec) + " " + ins.to_string(), [&, m](std::string& d) {
      return expect_equal(compute(spec, ins, compute_options(v, 400 + out.size()), v.precision),
                          oracle_quot_k1_polynomial(g, n, r, m), d);
    }));
  };
  for (const auto& [n, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}})
    for (int g : {0, 1, 2})
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<int> m(static_cast<std::size_t>(r), 0);
        for (auto& x : m) x = std::uniform_int_distribution<int>(0, 2)(rng);
        long deg = 0;
        for (std::size_t i = 0; i < m.size(); ++i) deg += static_cast<long>(i + 1) * m[i];
        const long v0 = static_cast<long>(1 - g) * r * (n - r);
        while (deg < v0 || (deg - v0) % n != 0) {
          ++m[0];
          ++deg;
        }
        add(g, n, r, m);
      }
  // Integrals on projective space.
  for (int n : {2, 3, 4}) {
    out.push_back(run_check("quot_k1", "P^" + std::to_string(n - 1) + " c1^" + std::to_string(n - 1), [&, n](std::string& d) {
      GeneratingPolynomial want(1);
      want.set({0}, 1);
      return expect_equal(compute(make_spec(0, n, {1}), elem_power(1, 1, n - 1), compute_options(v, 450), v.precision),
                          want, d);
    }));
  }
  for (int dd = 0; dd <= 3; ++dd) {
    out.push_back(run_check("quot_k1", "P^1 c1^" + std::to_string(2 * dd + 1), [&, dd](std::string& d) {
      GeneratingPolynomial want(1);
      want.set({dd}, 1);
      return expect_equal(
          compute(make_spec(0, 2, {1}), elem_power(1, 1, 2 * dd + 1), compute_options(v, 460), v.precision), want, d);
    }));
  }
  return out;
}

// 5. Orbit counts at random parameter points.
inline std::vector<CheckResult> verify_counts(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 5));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> logr(std::log(0.5), std::log(2.0));
  const int trials = 25;
  for (const auto& [ranks, n] : std::vector<std::pair<std::vector<int>, int>>{
           {{1}, 2}, {{2}, 3}, {{1, 2}, 3}, {{2, 3}, 4}}) {
    const ProblemSpec spec = make_spec(0, n, ranks);
    out.push_back(run_check("counts", spec_label(spec).substr(4), [&](std::string& d) {
      long full = 1;
      for (int j = 1; j <= spec.k(); ++j)
        for (int i = spec.rank(j + 1) - spec.rank(j) + 1; i <= spec.rank(j + 1); ++i) full *= i;
      int failures = 0;
      for (int t = 0; t < trials; ++t) {
        std::vector<std::complex<double>> q;
        for (int j = 0; j < spec.k(); ++j) q.push_back(std::polar(std::exp(logr(rng)), phase(rng)));
        SolverOptions so;
        so.seed = mix_seed(v.seed, 500 + static_cast<std::uint64_t>(t));
        try {
          const auto sols = solve<double>(spec, q, SolveMethod::Degeneration, so);
          if (static_cast<long>(sols.representatives.size()) * sols.orbit_weight != full) ++failures;
        } catch (const Error&) {
          ++failures;
        }
      }
      d = std::to_string(expected_orbit_count(spec)) + " orbits, " + std::to_string(full) + " solutions; " +
          std::to_string(failures) + "/" + std::to_string(trials) + " failures";
      return failures * 100 < trials;
    }));
  }
  return out;
}

// 6. Equivariant values extrapolated to ε = 0 against the non-equivariant value.
inline std::vector<CheckResult> verify_equivariant(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 6));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const std::vector<std::pair<int, Insertion>> cases{
      {0, elem_power(1, 1, 2)},
      {1, elem_power(1, 1, 3)},
      {1, Insertion::monomial({Primitive::elem_sym(1, 1), Primitive::elem_sym(2, 1)})},
      {2, elem_power(1, 1, 1)},
      {2, elem_power(2, 1, 2)}};
  for (const auto& [g, ins] : cases) {
    // Random directions with well separated weights.
    std::vector<std::complex<double>> eps;
    while (true) {
      eps.clear();
      double nn = 0.0;
      for (int i = 0; i < 3; ++i) {
        eps.emplace_back(unit(rng), unit(rng));
        nn += std::norm(eps.back());
      }
      for (auto& e : eps) e *= 1e-2 / std::sqrt(nn);
      double sep = INFINITY;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) sep = std::min(sep, std::abs(eps[static_cast<std::size_t>(a)] - eps[static_cast<std::size_t>(b)]));
      if (sep > 3e-3) break;
    }
    const std::vector<std::complex<double>> q{std::polar(1.0, phase(rng))};
    const ProblemSpec base = make_spec(g, 3, {2});
    out.push_back(run_check("equivariant", spec_label(base) + " " + ins.to_string(), [&, eps, q, base, ins](std::string& d) {
      SolverOptions so;
      so.seed = v.seed;
      const auto s0 = solve<double>(base, q, SolveMethod::Degeneration, so);
      const std::complex<double> v0 = eval_point(base, ins, q, s0).value.to_std();
      std::complex<double> vals[3];
      const double scales[3] = {1.0, 0.5, 0.25};
      for (int i = 0; i < 3; ++i) {
        ProblemSpec se = base;
        for (const auto& e : eps) se.eps.push_back(e * scales[i]);
        const auto sols = solve<double>(se, q, SolveMethod::Equivariant, so);
        vals[i] = eval_point(se, ins, q, sols).value.to_std();
      }
      const std::complex<double> extrapolated = (8.0 * vals[2] - 6.0 * vals[1] + vals[0]) / 3.0;
      const double rel = std::abs(extrapolated - v0) / std::abs(v0);
      d = "relative difference " + scientific(rel);
      return rel < 1e-5;
    }));
  }
  return out;
}

/// The identity test matrix: chains with k <= 2, n <= 4 and genera 0..3.
/// Insertions are random monomials of an attainable degree, preferring ones
/// with a nonzero polynomial.
inline std::vector<std::pair<ProblemSpec, Insertion>> identity_matrix(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<std::pair<ProblemSpec, Insertion>> out;
  std::mt19937_64 rng(mix_seed(v.seed, 7));
  const std::vector<std::pair<int, std::vector<int>>> chains{{2, {1}}, {3, {1}}, {3, {2}}, {4, {2}},
                                                             {3, {1, 2}}, {4, {1, 3}}, {4, {2, 3}}, {2, {2, 2}}};
  for (const auto& [n, ranks] : chains)
    for (int g = 0; g <= 3; ++g) {
      const ProblemSpec spec = make_spec(g, n, ranks);
      std::vector<Primitive> prims;
      for (int j = 1; j <= spec.k(); ++j)
        for (int i = 1; i <= spec.rank(j); ++i) prims.push_back(Primitive::elem_sym(i, j));
      Insertion chosen;
      for (int attempt = 0; attempt < 12; ++attempt) {
        const Insertion ins = pad_to_support(spec, Insertion(), attempt < 10 ? 1 + attempt % 2 : 0);
        const int target = ins.degree(spec);
        std::vector<Primitive> picked;
        int have = 0;
        while (have < target) {
          const Primitive& p = prims[std::uniform_int_distribution<std::size_t>(0, prims.size() - 1)(rng)];
          if (have + p.degree(spec) > target) continue;
          picked.push_back(p);
          have += p.degree(spec);
        }
        chosen = picked.empty() ? Insertion() : Insertion::monomial(picked);
        if (!compute(spec, chosen, compute_options(v, 77), v.precision).terms().empty()) break;
      }
      out.emplace_back(spec, chosen);
    }
  return out;
}

// 7a. Twisting by the cross-level Euler class.
inline std::vector<CheckResult> verify_twisting(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  for (const auto& [spec, ins] : identity_matrix(v))
    for (int l = 1; l <= spec.k(); ++l)
      out.push_back(run_check("twisting", spec_label(spec) + " " + ins.to_string() + " l=" + std::to_string(l),
                              [&, l](std::string& d) {
                                const auto rep = check_twisting(spec, ins, l, compute_options(v, 700), v.precision);
                                d = rep.rhs.to_string();
                                if (!rep.passed) d = "lhs " + rep.lhs.to_string() + " rhs " + rep.rhs.to_string();
                                return rep.passed;
                              }));
  return out;
}

// 7b. Elementary modification lowering the bundle degree.
inline std::vector<CheckResult> verify_elementary_modification(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  for (const auto& [spec, ins] : identity_matrix(v))
    out.push_back(run_check("elementary_modification", spec_label(spec) + " " + ins.to_string(), [&](std::string& d) {
      const auto rep = check_elementary_modification(spec, ins, compute_options(v, 710), v.precision);
      d = rep.rhs.to_string();
      if (!rep.passed) d = "lhs " + rep.lhs.to_string() + " rhs " + rep.rhs.to_string();
      return rep.passed;
    }));
  return out;
}

// 7c. Vanishing when a tail of relative dimensions is negative, and the
// genus-13 degree where a single negative step does not force vanishing.
inline std::vector<CheckResult> verify_vanishing(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  const ProblemSpec g13 = make_spec(13, 3, {1, 2});
  out.push_back(run_check("vanishing", "g=13 n=3 r=(1,2) all degrees meeting the hypothesis", [&](std::string& d) {
    const auto p = compute(g13, Insertion(), compute_options(v, 720), v.precision);
    int checked = 0;
    for (const auto& deg : degree_support(g13, Insertion()).degrees) {
      if (!vanishing_hypothesis(g13, deg)) continue;
      ++checked;
      if (p.coefficient(deg) != 0) {
        d = "nonzero coefficient at " + degree_key(deg);
        return false;
      }
    }
    d = std::to_string(checked) + " degrees vanish, including (12,6)";
    return checked > 0 && vanishing_hypothesis(g13, {12, 6});
  }));
  out.push_back(run_check("vanishing", "g=13 n=3 r=(1,2) d=(9,9) does not vanish", [&](std::string& d) {
    const auto p = compute(g13, Insertion(), compute_options(v, 721), v.precision);
    const bool single_negative = relative_virtual_dimension(g13, {9, 9}, 1) < 0;
    d = "coefficient " + p.coefficient({9, 9}).str();
    return single_negative && !vanishing_hypothesis(g13, {9, 9}) && p.coefficient({9, 9}) == Integer("261213880320");
  }));
  for (const auto& [spec, ins] : identity_matrix(v)) {
    out.push_back(run_check("vanishing", spec_label(spec) + " " + ins.to_string(), [&](std::string& d) {
      ComputeOptions co = compute_options(v, 730);
      const auto p = compute(spec, ins, co, v.precision);
      int checked = 0;
      for (const auto& deg : degree_support(spec, ins).degrees) {
        if (!vanishing_hypothesis(spec, deg)) continue;
        ++checked;
        const auto rep = check_vanishing(spec, ins, deg, co, v.precision);
        if (!rep.passed) {
          d = "nonzero coefficient at " + degree_key(deg);
          return false;
        }
      }
      for (const auto& [deg, c] : p.terms())
        if (virtual_dimension(spec, deg) != ins.degree(spec)) {
          d = "coefficient outside the support at " + degree_key(deg);
          return false;
        }
      d = std::to_string(checked) + " vanishing degrees";
      return true;
    }));
  }
  return out;
}

// Factorization through the last Quot step (genus >= 2).
inline std::vector<CheckResult> verify_maximal_subsheaf(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  out.push_back(run_check("maximal_subsheaf", "m(3,0,2,13) m(2,-8,1,13) = 6^13", [&](std::string& d) {
    const ProblemSpec spec = make_spec(13, 3, {1, 2});
    const auto f = oracle_maximal_subsheaf_factor(spec, Insertion(), {10, 8});
    const auto reduced = compute(f.reduced, Insertion(), compute_options(v, 800), v.precision);
    const Integer product = f.factor * reduced.coefficient(f.reduced_degree);
    d = f.factor.str() + " * " + reduced.coefficient(f.reduced_degree).str() + " = " + product.str();
    return f.factor == integer_pow(3, 13) && product == integer_pow(6, 13);
  }));
  // The last step has virtual dimension zero only when 3 divides 2(g-1).
  for (const auto& [g, ins] : std::vector<std::pair<int, Insertion>>{
           {4, elem_power(1, 1, 1)}, {4, elem_power(1, 1, 3)}, {7, elem_power(1, 1, 2)}}) {
    const ProblemSpec spec = make_spec(g, 3, {1, 2});
    out.push_back(run_check("maximal_subsheaf", spec_label(spec) + " " + ins.to_string(), [&, spec, ins](std::string& d) {
      const auto full = compute(spec, ins, compute_options(v, 810), v.precision);
      int checked = 0;
      for (const auto& deg : degree_support(spec, ins).degrees) {
        if (relative_virtual_dimension(spec, deg, spec.k()) != 0) continue;
        const auto f = oracle_maximal_subsheaf_factor(spec, ins, deg);
        const auto reduced = compute(f.reduced, ins, compute_options(v, 811), v.precision);
        ++checked;
        if (full.coefficient(deg) != f.factor * reduced.coefficient(f.reduced_degree)) {
          d = "mismatch at " + degree_key(deg);
          return false;
        }
      }
      d = std::to_string(checked) + " degrees factor";
      return checked > 0;
    }));
  }
  return out;
}

// 8. Seed invariance and reproducible output.
inline std::vector<CheckResult> verify_determinism(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  const std::vector<std::pair<ProblemSpec, Insertion>> cases{
      {make_spec(13, 3, {1, 2}), Insertion()},
      {make_spec(1, 4, {1, 3}), elem_power(1, 1, 3)},
      {make_spec(0, 3, {2}), elem_power(1, 1, 5)}};
  for (const auto& [spec, ins] : cases) {
    out.push_back(run_check("determinism", spec_label(spec) + " " + ins.to_string(), [&, spec, ins](std::string& d) {
      ComputeOptions a;
      a.seed = v.seed;
      a.threads = v.threads;
      ComputeOptions b = a;
      b.seed = v.seed2;
      const auto pa = compute(spec, ins, a, v.precision);
      const auto pb = compute(spec, ins, b, v.precision);
      if (!(pa == pb)) {
        d = "seed " + std::to_string(v.seed) + " gives " + pa.to_string() + ", seed " + std::to_string(v.seed2) +
            " gives " + pb.to_string();
        return false;
      }
      const std::string j1 = polynomial_json(pa, spec, ins).dump(2);
      const std::string j2 = polynomial_json(compute(spec, ins, a, v.precision), spec, ins).dump(2);
      d = j1 == j2 ? "identical across seeds; JSON byte-identical" : "JSON differs between identical runs";
      return j1 == j2;
    }));
  }
  return out;
}

// 9. Jacobian against finite differences, exact J symmetry, endpoint residuals.
inline std::vector<CheckResult> verify_hygiene(const VerifyOptions& v) {
  using namespace verify_detail;
  std::vector<CheckResult> out;
  std::mt19937_64 rng(mix_seed(v.seed, 9));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::vector<ProblemSpec> specs{make_spec(0, 2, {1}), make_spec(0, 3, {1, 2}), make_spec(0, 4, {2, 3}),
                                       make_spec(0, 4, {1, 2, 3}), make_spec(0, 3, {3, 3})};
  out.push_back(run_check("hygiene", "Jacobian vs central differences at 100 points", [&](std::string& d) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      ProblemSpec spec = specs[static_cast<std::size_t>(t) % specs.size()];
      if (t % 2 == 1)
        for (int i = 0; i < spec.ambient_rank; ++i) spec.eps.emplace_back(unit(rng), unit(rng));
      std::vector<std::complex<double>> q;
      for (int j = 0; j < spec.k(); ++j) q.emplace_back(2.0 * unit(rng), 2.0 * unit(rng));
      const BetheSystem<double> sys(spec, q, SignMode::PaperSign);
      std::vector<Cd> z;
      for (std::size_t i = 0; i < sys.total_vars(); ++i) z.emplace_back(3.0 * unit(rng), 3.0 * unit(rng));
      const auto jac = sys.jacobian(z);
      for (std::size_t c = 0; c < z.size(); ++c) {
        const Cd dir(unit(rng), unit(rng));
        const double h = 1e-6 * (1.0 + std::abs(z[c].to_std()));
        auto zp = z, zm = z;
        zp[c] += dir * h;
        zm[c] -= dir * h;
        const auto fp = sys.eval(zp), fm = sys.eval(zm);
        double diff = 0.0, scale = 0.0;
        for (std::size_t r = 0; r < z.size(); ++r) {
          const Cd fd = (fp[r] - fm[r]) / Cd(2.0 * h);
          diff = std::max(diff, std::abs((fd - jac(r, c) * dir).to_std()));
          scale = std::max(scale, std::abs((jac(r, c) * dir).to_std()));
        }
        worst = std::max(worst, diff / std::max(scale, 1.0));
      }
    }
    d = "worst relative column error " + scientific(worst);
    return worst < 1e-6;
  }));
  out.push_back(run_check("hygiene", "J factor exactly invariant under level permutations", [&](std::string& d) {
    int checked = 0;
    for (const auto& spec : {make_spec(0, 3, {1, 2}), make_spec(0, 4, {2, 3}), make_spec(0, 4, {2}), make_spec(0, 3, {2, 2})}) {
      std::vector<std::complex<double>> q{std::polar(1.1, 0.4)};
      if (spec.k() == 2) q.push_back(std::polar(0.8, -1.3));
      SolverOptions so;
      so.seed = v.seed;
      const auto sols = solve<double>(spec, q, SolveMethod::Degeneration, so);
      const BetheSystem<double> sys(spec, q, SignMode::PaperSign);
      for (const auto& s : sols.representatives) {
        const auto j0 = eval_J_factor(sys, s);
        for (int rep = 0; rep < 5; ++rep) {
          BetheSolution<double> p = s;
          for (int l = 1; l <= sys.layout().levels(); ++l)
            std::shuffle(p.z.begin() + static_cast<long>(sys.layout().offset(l)),
                         p.z.begin() + static_cast<long>(sys.layout().offset(l) + sys.layout().size(l)), rng);
          const auto j1 = eval_J_factor(sys, p);
          ++checked;
          if (!(j1.mantissa() == j0.mantissa()) || j1.exponent() != j0.exponent()) {
            d = "J changed under a permutation";
            return false;
          }
        }
      }
    }
    d = std::to_string(checked) + " permuted solutions";
    return true;
  }));
  out.push_back(run_check("hygiene", "accepted endpoints below the residual tolerance", [&](std::string& d) {
    int checked = 0;
    double worst_ratio = 0.0;
    for (const auto& spec : specs) {
      for (int t = 0; t < 10; ++t) {
        std::vector<std::complex<double>> q;
        for (int j = 0; j < spec.k(); ++j) q.push_back(std::polar(std::exp(unit(rng)), 3.0 * unit(rng)));
        SolverOptions so;
        so.seed = mix_seed(v.seed, 900 + static_cast<std::uint64_t>(t));
        const auto sols = solve<double>(spec, q, SolveMethod::Degeneration, so);
        const BetheSystem<double> sys(spec, q, SignMode::PaperSign);
        for (const auto& s : sols.representatives) {
          ++checked;
          const double ratio = sys.residual_norm(s.z) / sys.tol_resid();
          worst_ratio = std::max(worst_ratio, ratio);
          const double tol_sep = 1e-6 * (1.0 + max_abs(s.z));
          if (!(ratio < 1.0) || !(min_separation(sys.layout(), s.z) > tol_sep)) {
            d = "endpoint outside tolerance";
            return false;
          }
        }
      }
    }
    d = std::to_string(checked) + " endpoints, worst residual/tolerance " + std::to_string(worst_ratio);
    return true;
  }));
  return out;
}

/// Named groups in run order.
inline std::vector<std::pair<std::string, std::function<std::vector<CheckResult>(const VerifyOptions&)>>> verify_groups() {
  return {{"golden", verify_golden},
          {"two_step", verify_two_step},
          {"punctual", verify_punctual},
          {"quot_k1", verify_quot_k1},
          {"counts", verify_counts},
          {"equivariant", verify_equivariant},
          {"twisting", verify_twisting},
          {"elementary_modification", verify_elementary_modification},
          {"vanishing", verify_vanishing},
          {"maximal_subsheaf", verify_maximal_subsheaf},
          {"determinism", verify_determinism},
          {"hygiene", verify_hygiene}};
}

}  // namespace hqvi
