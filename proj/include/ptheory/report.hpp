#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ptheory/scalar.hpp"

namespace ptheory {

/// Outcome of one law check: the law's statement, pass/fail/skip, cases run,
/// worst residual seen, and a serialized counterexample when failing.
struct CheckResult {
  std::string name;
  std::string law;
  std::string status = "pass";  // pass | fail | skip
  int cases = 0;
  double max_residual = 0.0;
  nlohmann::json counterexample;  // null unless status == fail

  bool failed() const { return status == "fail"; }

  void record(double r) { max_residual = std::max(max_residual, r); }
  void fail_with(nlohmann::json example) {
    status = "fail";
    if (counterexample.is_null()) counterexample = std::move(example);
  }
  /// Tally one case: residual r against bound; stores the example on first failure.
  void tally(double r, double bound, nlohmann::json example) {
    ++cases;
    record(r);
    if (r > bound) fail_with(std::move(example));
  }
};

struct Report {
  std::string suite;
  std::string instance;
  std::uint64_t seed = 0;
  Tolerance tol;
  std::vector<CheckResult> checks;

  bool passed() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }

  nlohmann::json to_json() const;
  std::string to_markdown() const;
};

nlohmann::json reports_to_json(const std::vector<Report>& reports);
std::string reports_to_json_string(const std::vector<Report>& reports);
std::string reports_to_markdown(const std::vector<Report>& reports);

}  // namespace ptheory
