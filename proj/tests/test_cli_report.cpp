#include <doctest.h>

#include <sstream>

#include "ptheory/suites.hpp"

using namespace ptheory;

namespace {

RunConfig quick_config(const std::string& instance, const std::string& suite) {
  RunConfig cfg;
  cfg.instance = instance;
  cfg.suite = suite;
  cfg.cases = 12;
  cfg.max_dim = 2;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("run exit codes") {
  std::ostringstream out, diag;
  CHECK(run(quick_config("rel", "statedagger"), out, diag) == 0);

  // The purification suites need a CPM instance.
  CHECK(run(quick_config("matc", "axioms"), out, diag) == 2);
  CHECK(run(quick_config("matc", "dilation"), out, diag) == 2);
  CHECK(run(quick_config("matr", "kernels"), out, diag) == 2);
  CHECK(run(quick_config("nonsense", "statedagger"), out, diag) == 2);
  CHECK(run(quick_config("rel", "nonsense"), out, diag) == 2);

  RunConfig bad = quick_config("cpm-c", "cpm");
  bad.cases = 0;
  CHECK(run(bad, out, diag) == 2);
  bad = quick_config("cpm-c", "cpm");
  bad.tol = -1.0;
  CHECK(run(bad, out, diag) == 2);
}

TEST_CASE("suite selection per instance") {
  RunConfig cfg = quick_config("matc", "all");
  std::vector<Report> reports = run_suites(cfg);
  REQUIRE(reports.size() == 1);  // only statedagger applies
  CHECK(reports[0].suite == "statedagger");

  cfg = quick_config("rel", "all");
  reports = run_suites(cfg);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].suite == "statedagger");
  CHECK(reports[1].suite == "kernels");
}

TEST_CASE("reports are byte-identical across runs with one config") {
  RunConfig cfg = quick_config("cpm-c", "cpm");
  std::string first = reports_to_json_string(run_suites(cfg));
  std::string second = reports_to_json_string(run_suites(cfg));
  CHECK(first == second);
  CHECK(first.find("\"suite\": \"cpm\"") != std::string::npos);

  // A different seed changes sampled content but not validity.
  cfg.seed = 8;
  std::string third = reports_to_json_string(run_suites(cfg));
  CHECK(third != first);
}

TEST_CASE("markdown rendering has one row per check") {
  RunConfig cfg = quick_config("rel", "statedagger");
  std::vector<Report> reports = run_suites(cfg);
  std::string md = reports_to_markdown(reports);
  std::size_t rows = 0;
  for (std::size_t pos = md.find("\n| "); pos != std::string::npos; pos = md.find("\n| ", pos + 1))
    ++rows;
  // One row per check plus the header row (the separator has no space).
  CHECK(rows == reports[0].checks.size() + 1);
}

TEST_CASE("failing checks carry counterexamples that re-verify") {
  // Force a failure through the transpose control on the complex instance.
  CpmTheory cpm(Kind::complex_);
  Report rep;
  rep.tol = Tolerance{1e-9, 1e-9};
  check_cp_state_dagger(rep, transpose_state_dagger(), cpm, Rng(3), 40, 3, rep.tol);
  REQUIRE_FALSE(rep.passed());

  const CheckResult* failing = nullptr;
  for (const CheckResult& c : rep.checks)
    if (c.failed()) failing = &c;
  REQUIRE(failing != nullptr);
  REQUIRE_FALSE(failing->counterexample.is_null());

  // The stored pair still disagrees when replayed: equal marginals, unequal
  // transpose-contracted partial inner products.
  Morphism psi = morphism_from_json(failing->counterexample.at("psi"));
  Morphism phi = morphism_from_json(failing->counterexample.at("phi"));
  REQUIRE(psi.cod() == phi.cod());
  REQUIRE(psi.cod().factor_count() == 2);
  const std::size_t da = static_cast<std::size_t>(psi.cod().factors()[0].dim);
  const std::size_t db = static_cast<std::size_t>(psi.cod().factors()[1].dim);
  auto gram = [&](const Morphism& s, bool conjugated) {
    DenseTensor g = DenseTensor::matrix(Kind::complex_, da, da);
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t ap = 0; ap < da; ++ap)
        for (std::size_t b = 0; b < db; ++b) {
          cval other = s.data().data[ap * db + b];
          g.at(a, ap) += s.data().data[a * db + b] * (conjugated ? std::conj(other) : other);
        }
    return g;
  };
  CHECK(residual(gram(psi, true), gram(phi, true)) < 1e-7);    // marginals agree
  CHECK(residual(gram(psi, false), gram(phi, false)) > 1e-7);  // transpose contraction differs
  nlohmann::json j = rep.to_json();
  bool embedded = false;
  for (const auto& c : j.at("checks"))
    if (c.contains("counterexample")) embedded = true;
  CHECK(embedded);
}

TEST_CASE("json report schema carries the run configuration") {
  RunConfig cfg = quick_config("rel", "kernels");
  std::vector<Report> reports = run_suites(cfg);
  nlohmann::json j = reports_to_json(reports);
  REQUIRE(j.is_array());
  CHECK(j[0].at("instance") == "rel");
  CHECK(j[0].at("seed") == 7);
  CHECK(j[0].at("tolerance").at("absolute") == 1e-9);
  CHECK(j[0].at("passed") == true);
  for (const auto& c : j[0].at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.contains("law"));
    CHECK(c.contains("status"));
    CHECK(c.contains("cases"));
    CHECK(c.contains("max_residual"));
  }
}
