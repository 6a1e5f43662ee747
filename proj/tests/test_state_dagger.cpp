#include <doctest.h>

#include "ptheory/instances.hpp"
#include "ptheory/state_dagger.hpp"

using namespace ptheory;

TEST_CASE("state dagger laws hold for the involutive assignments") {
  Tolerance tol;
  for (const char* tag : {"matc", "matr", "rel", "cpm-c"}) {
    auto th = make_instance(tag);
    Report rep;
    check_state_dagger(rep, adjoint_state_dagger(), *th, Rng(2), 40, 3, tol);
    CHECK_MESSAGE(rep.passed(), tag);
  }
  // The plain transpose also satisfies the assignment laws over C; it
  // generates the transpose dagger rather than the adjoint.
  MatTheory mat(Kind::complex_);
  Report rep;
  check_state_dagger(rep, transpose_state_dagger(), mat, Rng(2), 40, 3, tol);
  CHECK(rep.passed());
}

TEST_CASE("state dagger duals") {
  MatTheory mat(Kind::complex_);
  DualPresentation d = standard_dual(mat, mat.simple(2));
  CHECK(check_state_dagger_dual(adjoint_state_dagger(), d, Tolerance{}));

  RelTheory rel;
  CHECK(check_state_dagger_dual(adjoint_state_dagger(), standard_dual(rel, rel.simple(3)),
                                Tolerance{}));

  // Permutation-twisted presentations remain state-dagger duals.
  DualFactory twisted = permuted_duals(mat, 99);
  CHECK(check_state_dagger_dual(adjoint_state_dagger(), twisted(mat.simple(3)), Tolerance{}));

  // Phase-twisted cup against the untwisted cap is rejected.
  SystemObject two = mat.simple(2);
  DenseTensor cup = DenseTensor::matrix(Kind::complex_, 4, 1);
  cup.data = {1.0, 0.0, 0.0, std::polar(1.0, 0.9)};
  DualPresentation bad{two, two.dual(),
                       Morphism(SystemObject::unit(), two.dual().tensor(two), Layer::single, cup),
                       standard_dual(mat, two).cap};
  CHECK_FALSE(check_state_dagger_dual(adjoint_state_dagger(), bad, Tolerance{}));
}

TEST_CASE("derive_dagger reproduces the adjoint on examples") {
  MatTheory mat(Kind::complex_);
  DualFactory duals = standard_duals(mat);
  StateDaggerAssignment sd = adjoint_state_dagger();

  SystemObject two = mat.simple(2);
  CHECK(residual(derive_dagger(mat.id(two), sd, duals), mat.id(two)) < 1e-12);

  DenseTensor f = DenseTensor::matrix(Kind::complex_, 2, 2);
  f.at(0, 1) = 1.0;  // [[0,1],[0,0]]
  Morphism fm(two, two, Layer::single, f);
  Morphism fd = derive_dagger(fm, sd, duals);
  CHECK(fd.data().at(1, 0) == cval(1, 0));
  CHECK(fd.data().at(0, 1) == cval(0, 0));

  RelTheory rel;
  SystemObject ra = rel.simple(2), rb = rel.simple(2);
  DenseTensor r = DenseTensor::matrix(Kind::boolean, 2, 2);
  r.at(1, 0) = 1.0;  // (a1, b2)
  r.at(1, 1) = 1.0;  // (a2, b2)
  Morphism rm(ra, rb, Layer::single, r);
  Morphism conv = derive_dagger(rm, sd, standard_duals(rel));
  CHECK(approx_eq(conv, oracle_adjoint(rm), Tolerance{}));
}

TEST_CASE("derived dagger equals the oracle across instances") {
  Tolerance tol;
  for (const char* tag : {"matc", "matr", "rel", "cpm-c", "cpm-r"}) {
    auto th = make_instance(tag);
    StateDaggerAssignment sd = adjoint_state_dagger();
    DualFactory duals = caching_duals(standard_duals(*th));
    Report rep;
    DaggerStructure dg =
        derive_global_dagger(rep, sd, duals, *th, Rng(4), 30, 3, tol);
    CHECK_MESSAGE(rep.passed(), tag);
    Rng rng(91);
    for (int t = 0; t < 25; ++t) {
      Morphism f = th->sample_morphism(rng, th->simple(1 + t % 3), th->simple(1 + (t / 2) % 3));
      CHECK(residual(dg.apply(f), oracle_adjoint(f)) <
            1e-9 * (1.0 + frobenius_norm(f.data())));
    }
  }
}

TEST_CASE("dual choice independence") {
  Tolerance tol;
  for (const char* tag : {"matc", "rel", "cpm-c"}) {
    auto th = make_instance(tag);
    StateDaggerAssignment sd = adjoint_state_dagger();
    DualFactory standard = caching_duals(standard_duals(*th));
    DualFactory twisted = caching_duals(permuted_duals(*th, 1234));
    Rng rng(7);
    for (int t = 0; t < 30; ++t) {
      SystemObject a = th->simple(1 + static_cast<int>(rng.integer(3)));
      SystemObject b = th->simple(1 + static_cast<int>(rng.integer(3)));
      Morphism f = th->sample_morphism(rng, a, b);
      double gap = residual(derive_dagger(f, sd, standard), derive_dagger(f, sd, twisted));
      CHECK_MESSAGE(gap < 1e-9 * (1.0 + frobenius_norm(f.data())), tag);
    }
  }
}

TEST_CASE("codomain-side characterization agrees") {
  MatTheory mat(Kind::complex_);
  StateDaggerAssignment sd = adjoint_state_dagger();
  DualFactory duals = standard_duals(mat);
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    Morphism f = mat.sample_morphism(rng, mat.simple(2), mat.simple(3));
    Morphism fd = derive_dagger(f, sd, duals);
    CHECK(derive_dagger_bside_residual(f, fd, sd, duals) < 1e-10);
  }
}

TEST_CASE("composite duals pass snakes and the dual law") {
  CpmTheory cpm(Kind::complex_);
  DualPresentation da = standard_dual(cpm, cpm.simple(2));
  DualPresentation db = standard_dual(cpm, cpm.simple(3));
  DualPresentation dab = composite_dual(da, db);
  CHECK(snake_residual(dab) < 1e-12);
  CHECK(check_state_dagger_dual(adjoint_state_dagger(), dab, Tolerance{}));
  CHECK(dab.object == cpm.simple(2).tensor(cpm.simple(3)));
  CHECK(dab.dual_object == dab.object.dual());
}

TEST_CASE("derive_dagger requires matching dual and state shapes") {
  MatTheory mat(Kind::complex_);
  DualPresentation d3 = standard_dual(mat, mat.simple(3));
  Morphism f = Morphism(mat.simple(2), mat.simple(2), Layer::single,
                        DenseTensor::identity(Kind::complex_, 2));
  CHECK_THROWS_AS(name_morphism(f, d3), TheoryError);
}
