#pragma once

// Command-line front end: hqvi {compute,solve,verify} [options].
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include "hqvi/insertion_io.hpp"
#include "hqvi/serialize.hpp"
#include "hqvi/verify.hpp"

namespace hqvi::cli {

namespace po = boost::program_options;

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "1.5", "-2i", "0.7+0.2i", "1e-3-4e-2i", "i".
inline std::complex<double> parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError("empty complex number");
  auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw UsageError("bad complex number '" + raw + "'");
    }
    if (used != t.size()) throw UsageError("bad complex number '" + raw + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // The imaginary part starts at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split_list(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      throw UsageError("bad integer list '" + s + "'");
    }
    if (used != t.size()) throw UsageError("bad integer list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::complex<double>> parse_complex_list(const std::string& s) {
  std::vector<std::complex<double>> out;
  for (const auto& t : split_list(s)) out.push_back(parse_complex(t));
  return out;
}

inline std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad seed '" + s + "'");
  }
  if (used != s.size()) throw UsageError("bad seed '" + s + "'");
  return v;
}

inline po::options_description spec_options() {
  po::options_description o("Problem");
  o.add_options()
      ("job", po::value<std::string>(), "JSON job file with genus, n, ranks, degree_e, insertion, eps")
      ("genus", po::value<int>(), "genus of the curve")
      ("n", po::value<int>(), "rank of the ambient bundle")
      ("ranks", po::value<std::string>(), "rank chain, e.g. 1,2")
      ("degree-e", po::value<int>(), "degree of the ambient bundle")
      ("eps", po::value<std::string>(), "equivariant weights, comma list of complex numbers");
  return o;
}

inline po::options_description run_options() {
  po::options_description o("Run");
  o.add_options()
      ("seed", po::value<std::string>(), "random seed (falls back to HQVI_SEED)")
      ("threads", po::value<int>(), "worker threads (default: logical cores)")
      ("retries", po::value<int>(), "solver and fit retries")
      ("out", po::value<std::string>(), "write output to this file")
      ("format", po::value<std::string>()->default_value("json"), "json or csv")
      ("help,h", "show help");
  return o;
}

struct Job {
  ProblemSpec spec;
  std::string insertion = "1";
};

inline Job read_job(const po::variables_map& vm) {
  Job job;
  bool have_genus = false, have_n = false, have_ranks = false;
  if (vm.count("job")) {
    std::ifstream in(vm["job"].as<std::string>());
    if (!in) throw UsageError("cannot open job file '" + vm["job"].as<std::string>() + "'");
    nlohmann::json j;
    try {
      in >> j;
      if (j.contains("genus")) job.spec.genus = j["genus"].get<int>(), have_genus = true;
      if (j.contains("n")) job.spec.ambient_rank = j["n"].get<int>(), have_n = true;
      if (j.contains("ranks")) job.spec.ranks = j["ranks"].get<std::vector<int>>(), have_ranks = true;
      if (j.contains("degree_e")) job.spec.bundle_degree = j["degree_e"].get<int>();
      if (j.contains("insertion")) job.insertion = j["insertion"].get<std::string>();
      if (j.contains("eps"))
        for (const auto& e : j["eps"]) {
          if (e.is_string()) job.spec.eps.push_back(parse_complex(e.get<std::string>()));
          else if (e.is_array() && e.size() == 2) job.spec.eps.emplace_back(e[0].get<double>(), e[1].get<double>());
          else job.spec.eps.emplace_back(e.get<double>(), 0.0);
        }
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad job file: ") + e.what());
    }
  }
  if (vm.count("genus")) job.spec.genus = vm["genus"].as<int>(), have_genus = true;
  if (vm.count("n")) job.spec.ambient_rank = vm["n"].as<int>(), have_n = true;
  if (vm.count("ranks")) job.spec.ranks = parse_int_list(vm["ranks"].as<std::string>()), have_ranks = true;
  if (vm.count("degree-e")) job.spec.bundle_degree = vm["degree-e"].as<int>();
  if (vm.count("eps")) job.spec.eps = parse_complex_list(vm["eps"].as<std::string>());
  if (vm.count("insertion")) job.insertion = vm["insertion"].as<std::string>();
  if (!have_genus || !have_n || !have_ranks) throw UsageError("--genus, --n and --ranks are required");
  return job;
}

inline std::optional<std::uint64_t> read_seed(const po::variables_map& vm, const char* name = "seed") {
  if (vm.count(name)) return parse_seed(vm[name].as<std::string>());
  if (const char* env = std::getenv("HQVI_SEED"); env && *env) return parse_seed(env);
  return std::nullopt;
}

inline int read_threads(const po::variables_map& vm) {
  if (vm.count("threads")) {
    const int t = vm["threads"].as<int>();
    if (t < 1) throw UsageError("--threads must be positive");
    return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline std::string read_format(const po::variables_map& vm) {
  const std::string f = vm["format"].as<std::string>();
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

inline Precision read_precision(const po::variables_map& vm) {
  const std::string p = vm["precision"].as<std::string>();
  if (p == "f64") return Precision::F64;
  if (p == "dd") return Precision::DD;
  throw UsageError("--precision must be f64 or dd");
}

inline SolveMethod read_method(const po::variables_map& vm) {
  const std::string m = vm["method"].as<std::string>();
  if (m == "degeneration") return SolveMethod::Degeneration;
  if (m == "equivariant") return SolveMethod::Equivariant;
  throw UsageError("--method must be degeneration or equivariant");
}

inline void emit(const po::variables_map& vm, const std::string& text, std::ostream& out) {
  if (vm.count("out")) {
    std::ofstream f(vm["out"].as<std::string>(), std::ios::binary);
    if (!f) throw UsageError("cannot write '" + vm["out"].as<std::string>() + "'");
    f << text;
  } else {
    out << text;
  }
}

inline po::variables_map parse(const po::options_description& desc, const std::vector<std::string>& args) {
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).run(), vm);
  po::notify(vm);
  return vm;
}

inline int cmd_compute(const std::vector<std::string>& args, std::ostream& out) {
  po::options_description desc("hqvi compute");
  desc.add(spec_options()).add(run_options());
  desc.add_options()
      ("insertion", po::value<std::string>(), "insertion, e.g. \"c1[1]^3*c2[2]\" (default 1)")
      ("method", po::value<std::string>()->default_value("degeneration"), "solver method")
      ("samples", po::value<int>(), "number of sample points")
      ("precision", po::value<std::string>()->default_value("f64"), "f64 or dd")
      ("max-degree", po::value<int>(), "cap on the first degree when the support is unbounded");
  const auto vm = parse(desc, args);
  if (vm.count("help")) {
    out << desc << "\n";
    return kExitOk;
  }
  const Job job = read_job(vm);
  const Insertion ins = parse_insertion(job.insertion);
  if (read_method(vm) != SolveMethod::Degeneration)
    throw Error(ErrorCode::Unsupported, "compute uses the degeneration solver");
  ComputeOptions opts;
  if (auto s = read_seed(vm)) opts.seed = *s;
  opts.threads = read_threads(vm);
  if (vm.count("samples")) opts.samples = vm["samples"].as<int>();
  if (vm.count("retries")) opts.retries = opts.solver.retries = vm["retries"].as<int>();
  if (vm.count("max-degree")) opts.max_degree = vm["max-degree"].as<int>();
  const std::string format = read_format(vm);
  const auto poly = compute(job.spec, ins, opts, read_precision(vm));
  emit(vm, format == "csv" ? polynomial_csv(poly) : polynomial_json(poly, job.spec, ins).dump(2) + "\n", out);
  return kExitOk;
}

inline int cmd_solve(const std::vector<std::string>& args, std::ostream& out) {
  po::options_description desc("hqvi solve");
  desc.add(spec_options()).add(run_options());
  desc.add_options()
      ("q", po::value<std::string>(), "quantum parameters, comma list of complex numbers")
      ("method", po::value<std::string>()->default_value("degeneration"), "degeneration or equivariant")
      ("precision", po::value<std::string>()->default_value("f64"), "f64 or dd");
  const auto vm = parse(desc, args);
  if (vm.count("help")) {
    out << desc << "\n";
    return kExitOk;
  }
  const Job job = read_job(vm);
  if (!vm.count("q")) throw UsageError("--q is required");
  const auto q = parse_complex_list(vm["q"].as<std::string>());
  const SolveMethod method = read_method(vm);
  SolverOptions so;
  if (auto s = read_seed(vm)) so.seed = *s;
  if (vm.count("retries")) so.retries = vm["retries"].as<int>();
  if (read_format(vm) != "json") throw UsageError("solve writes json only");
  std::string text;
  if (read_precision(vm) == Precision::F64) {
    text = solution_set_json(job.spec, q, solve<double>(job.spec, q, method, so), method, so.tol_sep_scale).dump(2);
  } else {
    text = solution_set_json(job.spec, q, solve<DoubleDouble>(job.spec, q, method, so), method, so.tol_sep_scale).dump(2);
  }
  emit(vm, text + "\n", out);
  return kExitOk;
}

inline int cmd_verify(const std::vector<std::string>& args, std::ostream& out) {
  po::options_description desc("hqvi verify");
  desc.add_options()
      ("only", po::value<std::string>(), "comma list of check groups")
      ("seed", po::value<std::string>(), "first seed (falls back to HQVI_SEED)")
      ("seed2", po::value<std::string>(), "second seed for the seed-invariance checks")
      ("precision", po::value<std::string>()->default_value("f64"), "f64 or dd")
      ("threads", po::value<int>(), "worker threads (default: logical cores)")
      ("out", po::value<std::string>(), "write output to this file")
      ("format", po::value<std::string>()->default_value("text"), "text or json")
      ("list", "list check groups")
      ("help,h", "show help");
  const auto vm = parse(desc, args);
  const auto groups = verify_groups();
  if (vm.count("help")) {
    out << desc << "\n";
    return kExitOk;
  }
  if (vm.count("list")) {
    for (const auto& [name, f] : groups) out << name << "\n";
    return kExitOk;
  }
  VerifyOptions v;
  if (auto s = read_seed(vm)) v.seed = *s;
  if (vm.count("seed2")) v.seed2 = parse_seed(vm["seed2"].as<std::string>());
  if (v.seed2 == v.seed) throw UsageError("--seed2 must differ from --seed");
  v.threads = read_threads(vm);
  v.precision = read_precision(vm);
  const std::string format = vm["format"].as<std::string>();
  if (format != "text" && format != "json") throw UsageError("--format must be text or json");
  std::vector<std::string> only;
  if (vm.count("only")) {
    only = split_list(vm["only"].as<std::string>());
    for (const auto& name : only)
      if (std::none_of(groups.begin(), groups.end(), [&](const auto& g) { return g.first == name; }))
        throw UsageError("unknown check group '" + name + "'");
  }
  std::vector<CheckResult> results;
  for (const auto& [name, f] : groups) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    for (auto& r : f(v)) results.push_back(std::move(r));
  }
  const long failed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return !r.passed; });
  std::ostringstream os;
  if (format == "json") {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["command"] = "verify";
    j["seed"] = v.seed;
    j["seed2"] = v.seed2;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results)
      arr.push_back({{"group", r.group}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    j["checks"] = arr;
    j["passed"] = static_cast<long>(results.size()) - failed;
    j["failed"] = failed;
    os << j.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(24) << r.group << r.name << "  [" << r.detail
         << "] " << std::fixed << std::setprecision(3) << r.seconds << "s\n";
    os << results.size() - static_cast<std::size_t>(failed) << " passed, " << failed << " failed\n";
  }
  emit(vm, os.str(), out);
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

inline const char* kUsage =
    "usage: hqvi <command> [options]\n"
    "commands:\n"
    "  compute   generating polynomial of virtual intersection numbers\n"
    "  solve     solutions of the Bethe-type system at explicit q\n"
    "  verify    run the oracle and identity checks\n"
    "run `hqvi <command> --help` for options\n";

/// Entry point. Results go to `out`; on failure a JSON error object goes to
/// `out` and a one-line message to `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const std::string& name, const std::string& msg) {
    out << error_json(name, msg).dump(2) << "\n";
    err << "hqvi: " << msg << "\n";
    return code;
  };
  if (argv.empty() || argv[0] == "--help" || argv[0] == "-h") {
    (argv.empty() ? err : out) << kUsage;
    return argv.empty() ? kExitUsage : kExitOk;
  }
  const std::string cmd = argv[0];
  const std::vector<std::string> rest(argv.begin() + 1, argv.end());
  try {
    if (cmd == "compute") return cmd_compute(rest, out);
    if (cmd == "solve") return cmd_solve(rest, out);
    if (cmd == "verify") return cmd_verify(rest, out);
    return fail(kExitUsage, "USAGE", "unknown command '" + cmd + "'");
  } catch (const UsageError& e) {
    return fail(kExitUsage, "USAGE", e.what());
  } catch (const po::error& e) {
    return fail(kExitUsage, "USAGE", e.what());
  } catch (const Error& e) {
    return fail(is_input_error(e.code()) ? kExitUsage : kExitNumeric, error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumeric, "INTERNAL", e.what());
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace hqvi::cli
