#pragma once

// Problem description, Chern-class insertions, virtual-dimension arithmetic
// and the integer generating polynomials produced by the pipeline.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hqvi/error.hpp"

namespace hqvi {

using Integer = boost::multiprecision::cpp_int;

/// Exponent vector (d_1, ..., d_k), d_1 first.
using Multidegree = std::vector<int>;

struct ProblemSpec {
  int genus = 0;
  int ambient_rank = 1;
  std::vector<int> ranks;
  int bundle_degree = 0;
  /// Torus weights; empty or all zero means the non-equivariant problem.
  std::vector<std::complex<double>> eps;

  [[nodiscard]] int k() const { return static_cast<int>(ranks.size()); }

  /// r_j with r_0 = 0 and r_{k+1} = n.
  [[nodiscard]] int rank(int j) const {
    if (j <= 0) return 0;
    if (j > k()) return ambient_rank;
    return ranks[static_cast<std::size_t>(j - 1)];
  }

  [[nodiscard]] int total_vars() const {
    int s = 0;
    for (int r : ranks) s += r;
    return s;
  }

  /// r_{j+1} - r_{j-1}: the coefficient of d_j in the virtual dimension.
  [[nodiscard]] int rho(int j) const { return rank(j + 1) - rank(j - 1); }

  [[nodiscard]] int flag_dimension() const {
    int s = 0;
    for (int j = 1; j <= k(); ++j) s += rank(j) * (rank(j + 1) - rank(j));
    return s;
  }

  [[nodiscard]] bool equivariant() const {
    return std::any_of(eps.begin(), eps.end(), [](const auto& e) { return e != std::complex<double>{}; });
  }

  /// ε_s as level k+1 of the system (zeros when non-equivariant).
  [[nodiscard]] std::vector<std::complex<double>> top_values() const {
    if (eps.empty()) return std::vector<std::complex<double>>(static_cast<std::size_t>(ambient_rank));
    return eps;
  }

  [[nodiscard]] std::string canonical_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "g=" << genus << ";n=" << ambient_rank << ";e=" << bundle_degree << ";r=";
    for (std::size_t i = 0; i < ranks.size(); ++i) os << (i ? "," : "") << ranks[i];
    os << ";eps=";
    for (std::size_t i = 0; i < eps.size(); ++i) os << (i ? "," : "") << eps[i].real() << ':' << eps[i].imag();
    return os.str();
  }
};

/// One Chern-class factor: c_i of the dual tautological bundle at level j,
/// or the cross-level Euler class e(E_l^v (x) E_{l+1}) restricted to a point.
struct Primitive {
  enum class Kind { ElemSym, EulerCross };
  Kind kind = Kind::ElemSym;
  int index = 1;  // i for ElemSym; unused for EulerCross
  int level = 1;

  static Primitive elem_sym(int i, int j) { return {Kind::ElemSym, i, j}; }
  static Primitive euler_cross(int l) { return {Kind::EulerCross, 0, l}; }

  [[nodiscard]] int degree(const ProblemSpec& spec) const {
    return kind == Kind::ElemSym ? index : spec.rank(level) * spec.rank(level + 1);
  }

  friend bool operator==(const Primitive& a, const Primitive& b) {
    return a.kind == b.kind && a.index == b.index && a.level == b.level;
  }
  friend bool operator<(const Primitive& a, const Primitive& b) {
    return std::tie(a.kind, a.level, a.index) < std::tie(b.kind, b.level, b.index);
  }
};

struct InsertionTerm {
  long long coefficient = 1;
  std::vector<Primitive> primitives;  // sorted multiset

  [[nodiscard]] int degree(const ProblemSpec& spec) const {
    int d = 0;
    for (const auto& p : primitives) d += p.degree(spec);
    return d;
  }
};

/// Integer linear combination of products of primitives.
class Insertion {
public:
  Insertion() : terms_{InsertionTerm{}} {}

  /// The zero class (no terms).
  static Insertion zero() {
    Insertion z;
    z.terms_.clear();
    return z;
  }

  static Insertion monomial(std::vector<Primitive> prims, long long coefficient = 1) {
    Insertion out = zero();
    out.add_term(InsertionTerm{coefficient, std::move(prims)});
    return out;
  }

  void add_term(InsertionTerm t) {
    std::sort(t.primitives.begin(), t.primitives.end());
    if (t.coefficient == 0) return;
    for (auto& existing : terms_) {
      if (existing.primitives == t.primitives) {
        existing.coefficient += t.coefficient;
        if (existing.coefficient == 0)
          terms_.erase(std::find_if(terms_.begin(), terms_.end(),
                                    [&](const InsertionTerm& x) { return x.primitives == t.primitives; }));
        return;
      }
    }
    terms_.push_back(std::move(t));
    std::sort(terms_.begin(), terms_.end(),
              [](const InsertionTerm& a, const InsertionTerm& b) { return a.primitives < b.primitives; });
  }

  [[nodiscard]] const std::vector<InsertionTerm>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  /// Product with a single primitive (or its power).
  [[nodiscard]] Insertion times(const Primitive& p, int power = 1) const {
    Insertion out = zero();
    for (auto t : terms_) {
      for (int i = 0; i < power; ++i) t.primitives.push_back(p);
      out.add_term(std::move(t));
    }
    return out;
  }

  [[nodiscard]] Insertion times(const Insertion& other) const {
    Insertion out = zero();
    for (const auto& a : terms_)
      for (const auto& b : other.terms_) {
        InsertionTerm t{a.coefficient * b.coefficient, a.primitives};
        t.primitives.insert(t.primitives.end(), b.primitives.begin(), b.primitives.end());
        out.add_term(std::move(t));
      }
    return out;
  }

  [[nodiscard]] bool touches_level(int level) const {
    for (const auto& t : terms_)
      for (const auto& p : t.primitives)
        if (p.level == level || (p.kind == Primitive::Kind::EulerCross && p.level + 1 == level)) return true;
    return false;
  }

  /// Checks index ranges against the spec and returns the common degree.
  [[nodiscard]] int degree(const ProblemSpec& spec) const {
    int deg = -1;
    for (const auto& t : terms_) {
      for (const auto& p : t.primitives) {
        if (p.level < 1 || p.level > spec.k())
          throw Error(ErrorCode::InvalidArgument, "insertion level " + std::to_string(p.level) + " out of range");
        if (p.kind == Primitive::Kind::ElemSym && (p.index < 1 || p.index > spec.rank(p.level)))
          throw Error(ErrorCode::InvalidArgument, "c" + std::to_string(p.index) + "[" + std::to_string(p.level) +
                                                      "] exceeds the rank at that level");
      }
      const int d = t.degree(spec);
      if (deg >= 0 && d != deg) throw Error(ErrorCode::InsertionInhomogeneous, "insertion terms have different degrees");
      deg = d;
    }
    return deg < 0 ? 0 : deg;
  }

  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      long long c = t.coefficient;
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      if (!first || c < 0) c = c < 0 ? -c : c;
      first = false;
      if (t.primitives.empty()) { os << c; continue; }
      if (c != 1) os << c << '*';
      for (std::size_t i = 0; i < t.primitives.size();) {
        std::size_t j = i;
        while (j < t.primitives.size() && t.primitives[j] == t.primitives[i]) ++j;
        const auto& p = t.primitives[i];
        if (i) os << '*';
        if (p.kind == Primitive::Kind::ElemSym) os << 'c' << p.index << '[' << p.level << ']';
        else os << "X[" << p.level << ']';
        if (j - i > 1) os << '^' << (j - i);
        i = j;
      }
    }
    return os.str();
  }

  friend bool operator==(const Insertion& a, const Insertion& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coefficient != b.terms_[i].coefficient || a.terms_[i].primitives != b.terms_[i].primitives)
        return false;
    return true;
  }

private:
  std::vector<InsertionTerm> terms_;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct PolynomialMetadata {
  std::uint64_t spec_hash = 0;
  std::uint64_t insertion_hash = 0;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> flags;
};

/// Sparse integer polynomial in q_1..q_k. Only nonzero coefficients are stored.
class GeneratingPolynomial {
public:
  GeneratingPolynomial() = default;
  explicit GeneratingPolynomial(int num_vars) : num_vars_(num_vars) {}

  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] const std::map<Multidegree, Integer>& terms() const { return coeffs_; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  [[nodiscard]] Integer coefficient(const Multidegree& d) const {
    auto it = coeffs_.find(d);
    return it == coeffs_.end() ? Integer(0) : it->second;
  }

  void set(const Multidegree& d, const Integer& c) {
    check_arity(d);
    if (c == 0) coeffs_.erase(d);
    else coeffs_[d] = c;
  }

  void add(const Multidegree& d, const Integer& c) { set(d, coefficient(d) + c); }

  /// Multiply by q^shift.
  [[nodiscard]] GeneratingPolynomial shifted(const Multidegree& shift) const {
    GeneratingPolynomial out(num_vars_);
    for (const auto& [d, c] : coeffs_) {
      Multidegree e = d;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += shift[i];
      out.coeffs_[e] = c;
    }
    return out;
  }

  /// Divide by q^shift; throws NotDivisible if some term has a smaller exponent.
  [[nodiscard]] GeneratingPolynomial divided_by_monomial(const Multidegree& shift) const {
    for (const auto& [d, c] : coeffs_)
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] < shift[i]) throw Error(ErrorCode::NotDivisible, "polynomial is not divisible by the monomial");
    Multidegree neg = shift;
    for (auto& x : neg) x = -x;
    return shifted(neg);
  }

  [[nodiscard]] GeneratingPolynomial times(const GeneratingPolynomial& o) const {
    GeneratingPolynomial out(num_vars_);
    for (const auto& [da, ca] : coeffs_)
      for (const auto& [db, cb] : o.coeffs_) {
        Multidegree d = da;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += db[i];
        out.add(d, ca * cb);
      }
    return out;
  }

  [[nodiscard]] GeneratingPolynomial scaled(const Integer& s) const {
    GeneratingPolynomial out(num_vars_);
    for (const auto& [d, c] : coeffs_) out.set(d, c * s);
    return out;
  }

  [[nodiscard]] Integer max_abs_difference(const GeneratingPolynomial& o) const {
    Integer worst = 0;
    auto consider = [&](const Multidegree& d) {
      Integer diff = coefficient(d) - o.coefficient(d);
      if (diff < 0) diff = -diff;
      if (diff > worst) worst = diff;
    };
    for (const auto& [d, c] : coeffs_) consider(d);
    for (const auto& [d, c] : o.coeffs_) consider(d);
    return worst;
  }

  [[nodiscard]] std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [d, c] : coeffs_) {
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << '-';
      first = false;
      const Integer a = c < 0 ? Integer(-c) : c;
      bool constant = std::all_of(d.begin(), d.end(), [](int x) { return x == 0; });
      if (a != 1 || constant) os << a;
      bool need_star = a != 1;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0) continue;
        if (need_star) os << '*';
        os << 'q' << (i + 1);
        if (d[i] != 1) os << '^' << d[i];
        need_star = true;
      }
    }
    return os.str();
  }

  friend bool operator==(const GeneratingPolynomial& a, const GeneratingPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  PolynomialMetadata metadata;

private:
  void check_arity(const Multidegree& d) const {
    if (static_cast<int>(d.size()) != num_vars_)
      throw Error(ErrorCode::InvalidArgument, "multidegree has wrong number of entries");
  }

  int num_vars_ = 0;
  std::map<Multidegree, Integer> coeffs_;
};

/// Confirms the spec invariants and returns a normalized copy (ε snapped to an
/// empty vector when all entries vanish).
inline ProblemSpec validate_spec(const ProblemSpec& spec) {
  ProblemSpec out = spec;
  if (spec.genus < 0) throw Error(ErrorCode::InvalidArgument, "genus must be non-negative");
  if (spec.ambient_rank < 1) throw Error(ErrorCode::InvalidArgument, "ambient rank must be positive");
  if (spec.ranks.empty()) throw Error(ErrorCode::RankChainInvalid, "rank chain must be non-empty");
  int prev = 1;
  for (int r : spec.ranks) {
    if (r < prev) throw Error(ErrorCode::RankChainInvalid, "ranks must be positive and nondecreasing");
    prev = r;
  }
  if (spec.ranks.back() > spec.ambient_rank)
    throw Error(ErrorCode::RankChainInvalid, "largest rank exceeds the ambient rank");

  if (!spec.eps.empty()) {
    if (static_cast<int>(spec.eps.size()) != spec.ambient_rank)
      throw Error(ErrorCode::InvalidArgument, "need exactly n equivariant parameters");
    const bool all_zero =
        std::all_of(spec.eps.begin(), spec.eps.end(), [](const auto& e) { return std::abs(e) < 1e-14; });
    if (all_zero) {
      out.eps.clear();
    } else {
      for (std::size_t a = 0; a < spec.eps.size(); ++a)
        for (std::size_t b = a + 1; b < spec.eps.size(); ++b)
          if (std::abs(spec.eps[a] - spec.eps[b]) < 1e-10)
            throw Error(ErrorCode::EquivariantParamsDegenerate, "equivariant parameters must be pairwise distinct");
    }
  }
  return out;
}

/// Expected dimension of the Hyperquot scheme at multidegree d.
inline long virtual_dimension(const ProblemSpec& spec, const Multidegree& d) {
  long v = static_cast<long>(1 - spec.genus) * spec.flag_dimension() +
           static_cast<long>(spec.bundle_degree) * (spec.rank(1) - spec.ambient_rank);
  for (int i = 1; i <= spec.k(); ++i) v += static_cast<long>(d[static_cast<std::size_t>(i - 1)]) * spec.rho(i);
  return v;
}

/// Relative virtual dimension of the j-th step in the tower of relative Quot schemes.
inline long relative_virtual_dimension(const ProblemSpec& spec, const Multidegree& d, int j) {
  if (j < 1 || j > spec.k() || static_cast<int>(d.size()) != spec.k())
    throw Error(ErrorCode::InvalidArgument, "level or multidegree out of range");
  const long rj = spec.rank(j);
  const long rn = spec.rank(j + 1);
  const long dj = d[static_cast<std::size_t>(j - 1)];
  const long dn = j < spec.k() ? d[static_cast<std::size_t>(j)] : 0;
  return ((1 - spec.genus) * rj - spec.bundle_degree) * (rn - rj) + rn * dj - rj * dn;
}

struct DegreeSupport {
  std::vector<Multidegree> degrees;
  /// Set when a repeated-rank level was bounded by d_i <= d_{i-1}.
  bool chain_bound_used = false;
};

/// All d in N^k whose virtual dimension equals the insertion degree.
inline DegreeSupport degree_support(const ProblemSpec& spec, const Insertion& insertion, std::optional<int> cap = {}) {
  DegreeSupport out;
  if (insertion.is_zero()) return out;
  const long delta = insertion.degree(spec);
  Multidegree zero(static_cast<std::size_t>(spec.k()), 0);
  const long target = delta - virtual_dimension(spec, zero);
  if (target < 0) return out;
  const int k = spec.k();
  for (int i = 1; i <= k; ++i) {
    if (spec.rho(i) == 0) {
      if (i == 1 && !cap) throw Error(ErrorCode::UnboundedSupport, "no bound for a level with zero weight");
      if (!cap) out.chain_bound_used = true;
    }
  }
  Multidegree d(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int i, long remaining) -> void {
    if (i > k) {
      if (remaining == 0) out.degrees.push_back(d);
      return;
    }
    const int rho = spec.rho(i);
    long bound;
    if (cap) bound = *cap;
    else if (rho > 0) bound = remaining / rho;
    else bound = d[static_cast<std::size_t>(i - 2)];
    for (long v = 0; v <= bound; ++v) {
      if (static_cast<long>(rho) * v > remaining) break;
      d[static_cast<std::size_t>(i - 1)] = static_cast<int>(v);
      self(self, i + 1, remaining - rho * v);
    }
    d[static_cast<std::size_t>(i - 1)] = 0;
  };
  rec(rec, 1, target);
  std::sort(out.degrees.begin(), out.degrees.end());
  return out;
}

/// Rewrites a problem with deg V = e < 0 as the degree-zero problem it is
/// equivalent to: B_e^Q * (q_1...q_k)^{|e|} = B_0^{Q * c_{r_k}(E_k^v)^{|e|}}.
struct DegreeReduction {
  ProblemSpec spec;        // bundle_degree == 0
  Insertion insertion;     // original insertion times c_{r_k}[k]^{|e|}
  Multidegree divisor;     // (|e|, ..., |e|)
};

inline DegreeReduction reduce_bundle_degree(const ProblemSpec& spec, const Insertion& insertion) {
  if (spec.bundle_degree > 0)
    throw Error(ErrorCode::Unsupported, "positive bundle degree: twist V to degree <= 0 first");
  const int steps = -spec.bundle_degree;
  DegreeReduction out{spec, insertion, Multidegree(static_cast<std::size_t>(spec.k()), steps)};
  out.spec.bundle_degree = 0;
  if (steps > 0) out.insertion = insertion.times(Primitive::elem_sym(spec.rank(spec.k()), spec.k()), steps);
  return out;
}

}  // namespace hqvi
