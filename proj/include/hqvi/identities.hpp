#pragma once

// Structural identities between generating polynomials, checked exactly.

#include <string>
#include <vector>

#include "hqvi/interpolate.hpp"

namespace hqvi {

struct IdentityReport {
  std::string name;
  bool passed = false;
  Integer max_mismatch = 0;
  GeneratingPolynomial lhs;
  GeneratingPolynomial rhs;
};

/// prod_{i<=l} q_i^{r_i} * B^{Q} == B^{Q * EulerCross(l)}.
inline IdentityReport check_twisting(const ProblemSpec& spec, const Insertion& insertion, int l,
                                     const ComputeOptions& opts = {}, Precision precision = Precision::F64) {
  if (l < 1 || l > spec.k()) throw Error(ErrorCode::InvalidArgument, "twisting level out of range");
  IdentityReport rep;
  rep.name = "twisting";
  Multidegree eta(static_cast<std::size_t>(spec.k()), 0);
  for (int i = 1; i <= l; ++i) eta[static_cast<std::size_t>(i - 1)] = spec.rank(i);
  rep.lhs = compute(spec, insertion, opts, precision).shifted(eta);
  rep.rhs = compute(spec, insertion.times(Primitive::euler_cross(l)), opts, precision);
  rep.max_mismatch = rep.lhs.max_abs_difference(rep.rhs);
  rep.passed = rep.max_mismatch == 0;
  return rep;
}

/// q_1...q_k * B_{e=-1}^{Q} == B_{e=0}^{Q * c_{r_k}(E_k)}.
inline IdentityReport check_elementary_modification(const ProblemSpec& spec, const Insertion& insertion,
                                                    const ComputeOptions& opts = {},
                                                    Precision precision = Precision::F64) {
  if (spec.bundle_degree != 0) throw Error(ErrorCode::InvalidArgument, "expects a degree-zero bundle");
  IdentityReport rep;
  rep.name = "elementary_modification";
  ProblemSpec lowered = spec;
  lowered.bundle_degree = -1;
  rep.lhs = compute(lowered, insertion, opts, precision).shifted(Multidegree(static_cast<std::size_t>(spec.k()), 1));
  rep.rhs = compute(spec, insertion.times(Primitive::elem_sym(spec.rank(spec.k()), spec.k())), opts, precision);
  rep.max_mismatch = rep.lhs.max_abs_difference(rep.rhs);
  rep.passed = rep.max_mismatch == 0;
  return rep;
}

/// True when some tail sum of relative virtual dimensions is negative at d.
inline bool vanishing_hypothesis(const ProblemSpec& spec, const Multidegree& d) {
  long tail = 0;
  for (int j = spec.k(); j >= 1; --j) {
    tail += relative_virtual_dimension(spec, d, j);
    if (tail < 0) return true;
  }
  return false;
}

/// The coefficient at d vanishes whenever the hypothesis above holds.
inline IdentityReport check_vanishing(const ProblemSpec& spec, const Insertion& insertion, const Multidegree& d,
                                      const ComputeOptions& opts = {}, Precision precision = Precision::F64) {
  if (!vanishing_hypothesis(spec, d))
    throw Error(ErrorCode::HypothesisNotMet, "no tail sum of relative dimensions is negative");
  IdentityReport rep;
  rep.name = "vanishing";
  rep.lhs = compute(spec, insertion, opts, precision);
  rep.rhs = GeneratingPolynomial(spec.k());
  rep.max_mismatch = rep.lhs.coefficient(d);
  if (rep.max_mismatch < 0) rep.max_mismatch = -rep.max_mismatch;
  rep.passed = rep.max_mismatch == 0;
  return rep;
}

}  // namespace hqvi
