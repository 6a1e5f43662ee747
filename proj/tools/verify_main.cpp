#include <CLI11.hpp>
#include <iostream>

#include "ptheory/suites.hpp"

int main(int argc, char** argv) {
  ptheory::RunConfig cfg;
  CLI::App app{"Process-theory law verifier over finite relations, matrices, and CP maps"};
  app.add_option("--instance", cfg.instance, "rel | matc | matr | cpm-c | cpm-r")
      ->default_val(cfg.instance);
  app.add_option("--max-dim", cfg.max_dim, "largest system dimension sampled")
      ->default_val(cfg.max_dim);
  app.add_option("--cases", cfg.cases, "sampled cases per check")->default_val(cfg.cases);
  app.add_option("--seed", cfg.seed, "random seed")->default_val(cfg.seed);
  app.add_option("--tol", cfg.tol, "absolute/relative comparison tolerance")
      ->default_val(cfg.tol);
  app.add_option("--suite", cfg.suite, "statedagger | dilation | cpm | axioms | kernels | all")
      ->default_val(cfg.suite);
  app.add_option("--report", cfg.format, "json | md")->default_val(cfg.format);
  app.add_option("--out", cfg.out, "report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return ptheory::run(cfg, std::cout, std::cerr);
}
