#include "ptheory/suites.hpp"

#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

namespace ptheory {

namespace {

Report fresh_report(const std::string& suite, const Theory& th, const RunConfig& cfg) {
  Report r;
  r.suite = suite;
  r.instance = th.tag();
  r.seed = cfg.seed;
  r.tol = Tolerance{cfg.tol, cfg.tol};
  return r;
}

Rng suite_rng(const RunConfig& cfg, const std::string& suite) {
  return Rng(mix_seed(cfg.seed, "suite-" + suite));
}

bool is_cpm(const std::string& tag) { return tag == "cpm-c" || tag == "cpm-r"; }

}  // namespace

Report run_statedagger_suite(const Theory& th, const RunConfig& cfg) {
  Report rep = fresh_report("statedagger", th, cfg);
  const Tolerance tol = rep.tol;
  Rng rng = suite_rng(cfg, "statedagger");

  check_theory_coherence(rep, th, rng.fork("coherence"), cfg.cases, cfg.max_dim, tol);

  StateDaggerAssignment sd = adjoint_state_dagger();
  check_state_dagger(rep, sd, th, rng.fork("laws"), cfg.cases, cfg.max_dim, tol);

  DualFactory duals = caching_duals(standard_duals(th));
  DaggerStructure derived =
      derive_global_dagger(rep, sd, duals, th, rng.fork("derive"), cfg.cases, cfg.max_dim, tol);

  CheckResult oracle{"oracle-agreement", "derived dagger equals the instance adjoint"};
  CheckResult dual_free{"dual-choice-independence",
                        "derivation agrees across standard and permuted state-dagger duals"};
  CheckResult bside{"codomain-side-characterization",
                    "sd(name(f^d)) matches the codomain-dual presentation of f"};
  DualFactory twisted = caching_duals(permuted_duals(th, cfg.seed + 1));
  Rng orng = rng.fork("oracle");
  for (int c = 0; c < cfg.cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(orng.integer(cfg.max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(orng.integer(cfg.max_dim)));
    Morphism f = th.sample_morphism(orng, a, b);
    Morphism derived_f = derived.apply(f);
    oracle.tally(residual(derived_f, oracle_adjoint(f)),
                 tol.absolute + tol.relative * frobenius_norm(f.data()),
                 nlohmann::json{{"f", morphism_to_json(f)}});
    dual_free.tally(residual(derive_dagger(f, sd, twisted), derived_f),
                    tol.absolute + tol.relative * frobenius_norm(f.data()),
                    nlohmann::json{{"f", morphism_to_json(f)}});
    bside.tally(derive_dagger_bside_residual(f, derived_f, sd, duals),
                tol.absolute + tol.relative * frobenius_norm(f.data()),
                nlohmann::json{{"f", morphism_to_json(f)}});
  }
  rep.add(std::move(oracle));
  rep.add(std::move(dual_free));
  rep.add(std::move(bside));
  return rep;
}

Report run_dilation_suite(const CpmTheory& th, const RunConfig& cfg) {
  Report rep = fresh_report("dilation", th, cfg);
  const Tolerance tol = rep.tol;
  Rng rng = suite_rng(cfg, "dilation");

  check_purification(rep, th, rng.fork("purification"), cfg.cases, cfg.max_dim, tol);

  StateDaggerAssignment sharp = sharp_state_dagger(th, tol);
  DilationStructure ds = purification_dilation(th, tol);
  check_dag_resp_state(rep, sharp, ds, rng.fork("resp"), cfg.cases, cfg.max_dim, tol);

  StateDaggerAssignment extended = extend_state_dagger(sharp, ds);
  CheckResult on_states{"extension-on-states", "extended dagger equals the adjoint on states"};
  Rng srng = rng.fork("states");
  for (int c = 0; c < cfg.cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(srng.integer(cfg.max_dim)));
    Morphism rho = th.sample_cp_state(srng, a);
    on_states.tally(residual(extended.apply(rho), oracle_adjoint(rho)),
                    1e2 * (tol.absolute + tol.relative * frobenius_norm(rho.data())),
                    nlohmann::json{{"rho", morphism_to_json(rho)}});
  }
  rep.add(std::move(on_states));

  DualFactory duals = caching_duals(standard_duals(th));
  DaggerStructure dg = derive_global_dagger(rep, extended, duals, th, rng.fork("derive"),
                                            cfg.cases, cfg.max_dim, tol);
  CheckResult oracle{"extension-oracle", "the dagger extended along dilations is the adjoint"};
  Rng orng = rng.fork("oracle");
  for (int c = 0; c < cfg.cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(orng.integer(cfg.max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(orng.integer(cfg.max_dim)));
    Morphism f = th.sample_causal(orng, a, b);
    oracle.tally(residual(dg.apply(f), oracle_adjoint(f)),
                 1e2 * (tol.absolute + tol.relative * frobenius_norm(f.data())),
                 nlohmann::json{{"f", morphism_to_json(f)}});
  }
  rep.add(std::move(oracle));
  return rep;
}

Report run_cpm_suite(const CpmTheory& th, const RunConfig& cfg) {
  Report rep = fresh_report("cpm", th, cfg);
  const Tolerance tol = rep.tol;
  Rng rng = suite_rng(cfg, "cpm");

  check_cp_axiom(rep, th, rng.fork("axiom"), cfg.cases, cfg.max_dim, tol);
  check_cp_state_dagger(rep, adjoint_state_dagger(), th, rng.fork("statedagger"), cfg.cases,
                        cfg.max_dim, tol);

  // Negative control: over C the plain transpose must be rejected by the
  // marginal/partial-inner-product equivalence.
  CheckResult control{"transpose-control",
                      "the non-conjugating assignment is caught over the complex field"};
  ++control.cases;
  if (th.kind() == Kind::complex_) {
    Report probe = fresh_report("control", th, cfg);
    check_cp_state_dagger(probe, transpose_state_dagger(), th, rng.fork("control"), cfg.cases,
                          cfg.max_dim, tol);
    bool caught = false;
    for (const CheckResult& c : probe.checks)
      if (c.name == "cp-state-dagger" && c.failed() && !c.counterexample.is_null()) caught = true;
    if (!caught) control.fail_with(nlohmann::json{{"expected", "a recorded counterexample"}});
  } else {
    control.status = "skip";  // transpose is the adjoint over R
  }
  rep.add(std::move(control));
  return rep;
}

Report run_axioms_suite(const CpmTheory& th, const RunConfig& cfg) {
  ReconstructionConfig rc;
  rc.seed = cfg.seed;
  rc.cases = cfg.cases;
  rc.oracle_samples = std::max(cfg.cases, 100);
  rc.tol = Tolerance{cfg.tol, cfg.tol};
  std::vector<int> dims;
  if (cfg.max_dim >= 3)
    dims = {2, 3};
  else
    for (int d = 1; d <= cfg.max_dim; ++d) dims.push_back(d);
  ReconstructionResult result = reconstruct_dagger_compact(th, dims, rc);
  Report rep = result.report;
  rep.suite = "axioms";
  rep.seed = cfg.seed;
  return rep;
}

Report run_kernels_suite(const Theory& th, const RunConfig& cfg) {
  Report rep = fresh_report("kernels", th, cfg);
  const Tolerance tol = rep.tol;
  Rng rng = suite_rng(cfg, "kernels");

  // Universal property over a handful of concrete morphisms.
  Rng krng = rng.fork("universal");
  for (int c = 0; c < std::min(cfg.cases, 4); ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(krng.integer(cfg.max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(krng.integer(cfg.max_dim)));
    Morphism f = th.sample_morphism(krng, a, b);
    check_kernel_universal(rep, f, kernel(f, th, tol), th, krng.fork("inner"),
                           std::min(cfg.cases, 32), tol);
  }

  check_split_kernels(rep, th, rng.fork("split"), cfg.cases, cfg.max_dim, tol);
  check_kernel_composition(rep, th, rng.fork("composition"), cfg.cases, cfg.max_dim, tol);
  check_pure_exclusion(rep, th, rng.fork("exclusion"), std::min(cfg.cases, 32), cfg.max_dim, tol);
  check_zero_propagation(rep, th, rng.fork("zero"), cfg.cases, std::min(cfg.max_dim, 3), tol);
  if (th.layer() == Layer::doubled) {
    const auto& cpm = dynamic_cast<const CpmTheory&>(th);
    check_sharp_kernel_agreement(rep, cpm, rng.fork("sharp"), cfg.cases, cfg.max_dim, tol);
    check_predual_from_purification(rep, cpm, cfg.max_dim, tol);
  }
  return rep;
}

std::vector<Report> run_suites(const RunConfig& cfg) {
  std::unique_ptr<Theory> instance = [&] {
    try {
      return make_instance(cfg.instance);
    } catch (const TheoryError& e) {
      throw UsageError(e.what());
    }
  }();
  if (cfg.max_dim < 1) throw UsageError("--max-dim must be at least 1");
  if (cfg.cases < 1) throw UsageError("--cases must be at least 1");
  if (cfg.tol <= 0.0 && instance->kind() != Kind::boolean)
    throw UsageError("--tol must be positive for float instances");
  if (cfg.format != "json" && cfg.format != "md") throw UsageError("--report must be json or md");

  const bool cpm = is_cpm(cfg.instance);
  const bool rel = cfg.instance == "rel";
  const auto supported = [&](const std::string& suite) {
    if (suite == "statedagger") return true;
    if (suite == "dilation" || suite == "cpm" || suite == "axioms") return cpm;
    if (suite == "kernels") return cpm || rel;
    throw UsageError("unknown suite: " + suite);
  };

  std::vector<std::string> selected;
  if (cfg.suite == "all") {
    for (const char* s : {"statedagger", "dilation", "cpm", "axioms", "kernels"})
      if (supported(s)) selected.push_back(s);
  } else {
    if (!supported(cfg.suite))
      throw UsageError("suite '" + cfg.suite + "' requires a " +
                       (cfg.suite == "kernels" ? "Rel or CPM" : "CPM") + " instance, got '" +
                       cfg.instance + "'");
    selected.push_back(cfg.suite);
  }

  std::vector<Report> reports;
  for (const std::string& s : selected) {
    if (s == "statedagger") reports.push_back(run_statedagger_suite(*instance, cfg));
    if (s == "dilation")
      reports.push_back(run_dilation_suite(dynamic_cast<const CpmTheory&>(*instance), cfg));
    if (s == "cpm")
      reports.push_back(run_cpm_suite(dynamic_cast<const CpmTheory&>(*instance), cfg));
    if (s == "axioms")
      reports.push_back(run_axioms_suite(dynamic_cast<const CpmTheory&>(*instance), cfg));
    if (s == "kernels") reports.push_back(run_kernels_suite(*instance, cfg));
  }
  return reports;
}

int run(const RunConfig& cfg, std::ostream& output, std::ostream& diag) {
  std::vector<Report> reports;
  try {
    reports = run_suites(cfg);
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\n"
         << "instances: rel | matc | matr | cpm-c | cpm-r\n"
         << "suites:    statedagger | dilation | cpm | axioms | kernels | all\n";
    return 2;
  }

  std::string rendered =
      cfg.format == "md" ? reports_to_markdown(reports) : reports_to_json_string(reports);
  if (cfg.out.empty()) {
    output << rendered;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      diag << "cannot write report to " << cfg.out << "\n";
      return 2;
    }
    file << rendered;
  }

  for (const Report& r : reports)
    if (!r.passed()) return 1;
  return 0;
}

}  // namespace ptheory
