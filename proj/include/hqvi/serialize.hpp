#pragma once

// JSON and CSV forms of results. Everything written here is a function of
// the inputs and the seed only, so output is reproducible byte for byte.

#include <complex>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hqvi/evaluator.hpp"

namespace hqvi {

inline constexpr const char* kSchema = "hqvi/1";

inline nlohmann::json complex_json(std::complex<double> c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline nlohmann::json spec_json(const ProblemSpec& spec) {
  nlohmann::json j;
  j["genus"] = spec.genus;
  j["n"] = spec.ambient_rank;
  j["ranks"] = spec.ranks;
  j["degree_e"] = spec.bundle_degree;
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : spec.eps) eps.push_back(complex_json(e));
  j["eps"] = eps;
  return j;
}

inline std::string degree_key(const Multidegree& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

inline nlohmann::json polynomial_json(const GeneratingPolynomial& poly, const ProblemSpec& spec,
                                      const Insertion& insertion) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["command"] = "compute";
  j["spec"] = spec_json(spec);
  j["insertion"] = insertion.to_string();
  nlohmann::json coeffs = nlohmann::json::array();
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [d, c] : poly.terms()) {
    coeffs.push_back({{"degree", d}, {"coefficient", c.str()}});
    table[degree_key(d)] = c.str();
  }
  j["coefficients"] = coeffs;
  j["table"] = table;
  j["polynomial"] = poly.to_string();
  std::ostringstream hs;
  hs << std::hex << poly.metadata.spec_hash << ':' << poly.metadata.insertion_hash;
  j["hash"] = hs.str();
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : poly.metadata.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;
  j["flags"] = poly.metadata.flags;
  return j;
}

inline std::string polynomial_csv(const GeneratingPolynomial& poly) {
  std::ostringstream os;
  for (int i = 1; i <= poly.num_vars(); ++i) os << 'd' << i << ',';
  os << "coefficient\n";
  for (const auto& [d, c] : poly.terms()) {
    for (int v : d) os << v << ',';
    os << c << '\n';
  }
  return os.str();
}

template <class R>
nlohmann::json solution_set_json(const ProblemSpec& spec, const std::vector<std::complex<double>>& q,
                                  const SolutionSet<R>& sols, SolveMethod method, double tol_sep_scale) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["command"] = "solve";
  j["spec"] = spec_json(spec);
  nlohmann::json qj = nlohmann::json::array();
  for (const auto& v : q) qj.push_back(complex_json(v));
  j["q"] = qj;
  j["method"] = method == SolveMethod::Degeneration ? "degeneration" : "equivariant";
  j["orbit_weight"] = sols.orbit_weight;
  j["expected_orbit_count"] = sols.expected_orbit_count;
  j["solution_count"] = static_cast<long>(sols.representatives.size()) * sols.orbit_weight;
  const BetheSystem<R> sys(spec, q, SignMode::PaperSign);
  const LevelLayout& layout = sys.layout();
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& s : sols.representatives) {
    nlohmann::json r;
    nlohmann::json levels = nlohmann::json::array();
    for (int l = 1; l <= layout.levels(); ++l) {
      nlohmann::json lv = nlohmann::json::array();
      for (std::size_t i = 0; i < layout.size(l); ++i) lv.push_back(complex_json(s.z[layout.offset(l) + i].to_std()));
      levels.push_back(lv);
    }
    r["levels"] = levels;
    r["residual"] = s.residual_norm;
    r["min_separation"] = s.min_separation;
    r["condition"] = s.jacobian_condition;
    r["near_degenerate"] = s.near_degenerate;
    r["J"] = complex_json(eval_J_factor(sys, s, tol_sep_scale).value().to_std());
    reps.push_back(r);
  }
  j["representatives"] = reps;
  j["diagnostics"] = {{"paths_tracked", sols.diagnostics.paths_tracked},
                      {"retries_used", sols.diagnostics.retries_used},
                      {"failed_paths", sols.diagnostics.failed_paths},
                      {"near_degenerate", sols.diagnostics.near_degenerate},
                      {"worst_residual", sols.diagnostics.worst_residual},
                      {"worst_condition", sols.diagnostics.worst_condition},
                      {"predictor_steps", sols.diagnostics.total_steps}};
  return j;
}

inline nlohmann::json error_json(const std::string& code, const std::string& message) {
  return {{"schema", kSchema}, {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace hqvi
