#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gausspack/io.hpp"

// Acceptance checks grouped into suites. Each check compares a closed form
// against an independent oracle or a literal constant.
namespace gausspack::verify {

struct CheckResult {
  std::string suite;
  std::string criterion;  // "AC1" .. "AC10"
  std::string name;
  double measured = 0.0;   // error (or runtime in seconds for timing gates)
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int threads = 0;
};

// "min", "moments", "fock", "evolve"; "all" runs every one of them.
const std::vector<std::string>& suite_names();
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opt = {});

struct CriterionSummary {
  std::string criterion;
  bool passed = true;
  int checks = 0;
  int failed = 0;
  // Largest measured / tolerance ratio among the checks.
  double worst_ratio = 0.0;
  std::string worst_name;
  double seconds = 0.0;
};
std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& results);

io::json report(const std::vector<CheckResult>& results, std::string_view suite, const VerifyOptions& opt);

}  // namespace gausspack::verify
