// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hqvi/cli.hpp"

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> groups;
};

// Runs `hqvi compute` in process twice with a fixed seed and compares the bytes.
hqvi::CheckResult cli_byte_identical() {
  hqvi::CheckResult r;
  r.group = "determinism";
  r.name = "compute output byte-identical across runs";
  const std::vector<std::string> args{"compute", "--genus", "13", "--n", "3", "--ranks", "1,2",
                                      "--insertion", "1", "--seed", "42", "--threads", "2"};
  std::ostringstream a, b, err;
  const int ca = hqvi::cli::run(args, a, err);
  const int cb = hqvi::cli::run(args, b, err);
  r.passed = ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
  r.detail = r.passed ? std::to_string(a.str().size()) + " bytes" : "exit " + std::to_string(ca) + "/" + std::to_string(cb);
  return r;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "genus-13 golden polynomial", {"golden"}},
      {2, "two-step oracle sweep", {"two_step"}},
      {3, "punctual sweep, genus independence", {"punctual"}},
      {4, "single-step closed form", {"quot_k1"}},
      {5, "solution counts", {"counts"}},
      {6, "equivariant limit", {"equivariant"}},
      {7, "identity suite", {"twisting", "elementary_modification", "vanishing"}},
      {8, "determinism and seed invariance", {"determinism"}},
      {9, "numerical hygiene", {"hygiene"}}};

  hqvi::VerifyOptions v;
  v.threads = 1;
  std::map<std::string, std::vector<hqvi::CheckResult>> by_group;
  for (const auto& [name, run] : hqvi::verify_groups()) by_group[name] = run(v);
  by_group["determinism"].push_back(cli_byte_identical());

  bool all = true;
  for (const auto& c : criteria) {
    int passed = 0, total = 0;
    double seconds = 0.0;
    std::vector<const hqvi::CheckResult*> failures;
    for (const auto& g : c.groups)
      for (const auto& r : by_group[g]) {
        ++total;
        seconds += r.seconds;
        if (r.passed) ++passed;
        else failures.push_back(&r);
      }
    const bool ok = total > 0 && passed == total;
    all = all && ok;
    std::cout << "criterion " << c.number << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << " (" << passed << "/"
              << total << " checks, " << seconds << " s)\n";
    for (const auto* f : failures) std::cout << "    failed: " << f->group << " | " << f->name << " | " << f->detail << "\n";
  }
  // Factorization checks are reported but belong to no numbered criterion.
  int extra_pass = 0;
  for (const auto& r : by_group["maximal_subsheaf"]) extra_pass += r.passed ? 1 : 0;
  std::cout << "extra: maximal subsheaf factorization " << extra_pass << "/" << by_group["maximal_subsheaf"].size()
            << "\n";
  return all && extra_pass == static_cast<int>(by_group["maximal_subsheaf"].size()) ? 0 : 1;
}
