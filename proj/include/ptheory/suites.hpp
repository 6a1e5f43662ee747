#pragma once

#include <iosfwd>

#include "ptheory/kernels.hpp"

namespace ptheory {

/// Run configuration shared by the CLI and the test drivers.
struct RunConfig {
  std::string instance = "cpm-c";
  int max_dim = 3;
  int cases = 100;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string suite = "all";   // statedagger | dilation | cpm | axioms | kernels | all
  std::string format = "json";  // json | md
  std::string out;              // empty writes to stdout
};

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

Report run_statedagger_suite(const Theory& th, const RunConfig& cfg);
Report run_dilation_suite(const CpmTheory& th, const RunConfig& cfg);
Report run_cpm_suite(const CpmTheory& th, const RunConfig& cfg);
Report run_axioms_suite(const CpmTheory& th, const RunConfig& cfg);
Report run_kernels_suite(const Theory& th, const RunConfig& cfg);

/// Suites valid for the instance (respecting the selection); throws
/// UsageError for unknown tags or invalid instance/suite pairs.
std::vector<Report> run_suites(const RunConfig& cfg);

/// Full driver: executes, renders, writes. Exit code 0 all-pass, 1 any
/// failure, 2 usage error (with a message on `diag`).
int run(const RunConfig& cfg, std::ostream& output, std::ostream& diag);

}  // namespace ptheory
