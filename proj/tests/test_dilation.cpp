#include <doctest.h>

#include <cmath>

#include "ptheory/axioms.hpp"

using namespace ptheory;

namespace {

Morphism doubled_vector(const CpmTheory& cpm, const SystemObject& a,
                        std::initializer_list<cval> entries) {
  DenseTensor w = DenseTensor::matrix(cpm.kind(), a.data_dim(Layer::single), 1);
  std::copy(entries.begin(), entries.end(), w.data.begin());
  return cpm_lift(Morphism(SystemObject::unit(), a, Layer::single, w));
}

}  // namespace

TEST_CASE("is_dilation") {
  CpmTheory cpm(Kind::complex_);
  SystemObject q = cpm.simple(2), e = cpm.simple(2);
  Rng rng(3);

  Morphism rho = cpm.sample_cp_state(rng, q);
  Morphism causal = cpm.sample_causal(rng, SystemObject::unit(), e);
  CHECK(is_dilation(tensor_product(rho, causal), rho, cpm, Tolerance{}));

  // The Bell state dilates the completely mixed state.
  const double s = 1.0 / std::sqrt(2.0);
  Morphism bell = doubled_vector(cpm, q.tensor(e), {s, 0, 0, s});
  Morphism mixed_half = scale_morphism(cpm.mixed(q), 0.5);
  CHECK(is_dilation(bell, mixed_half, cpm, Tolerance{}));
  CHECK_FALSE(is_dilation(doubled_vector(cpm, q.tensor(e), {1, 0, 0, 0}), mixed_half, cpm,
                          Tolerance{}));
}

TEST_CASE("purify on closed-form states") {
  CpmTheory cpm(Kind::complex_);
  SystemObject q = cpm.simple(2);
  Tolerance tol;

  SUBCASE("pure input keeps a one-dimensional ancilla") {
    Morphism rho = doubled_vector(cpm, q, {1, 0});
    auto [psi, env] = purify(rho, cpm, tol);
    CHECK(env.dim() == 1);
    CHECK(is_dilation(psi, rho, cpm, tol));
    CHECK(choi_rank(psi, tol) == 1);
    // The purification is |0> (x) e1 up to phase.
    DenseTensor w = pure_state_vector(psi, tol);
    CHECK(std::abs(w.data[0]) == doctest::Approx(1.0));
    CHECK(std::abs(w.data[1]) == doctest::Approx(0.0));
  }
  SUBCASE("maximally mixed input gives the normalized Bell pair") {
    DenseTensor half = scale(DenseTensor::identity(Kind::complex_, 2), 0.5);
    Morphism rho = state_of_density(cpm, q, half);
    auto [psi, env] = purify(rho, cpm, tol);
    CHECK(env.dim() == 2);
    CHECK(is_dilation(psi, rho, cpm, tol));
    DenseTensor w = pure_state_vector(psi, tol);
    // sum_i sqrt(1/2)|i, e_i> up to the eigenbasis order and phases.
    CHECK(std::abs(w.data[0]) + std::abs(w.data[1]) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(w.data[2]) + std::abs(w.data[3]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  SUBCASE("unnormalised states purify without rescaling") {
    DenseTensor two = DenseTensor::matrix(Kind::complex_, 2, 2);
    two.at(0, 0) = 2.0;
    Morphism rho = state_of_density(cpm, q, two);
    auto [psi, env] = purify(rho, cpm, tol);
    CHECK(env.dim() == 1);
    CHECK(is_dilation(psi, rho, cpm, tol));
    DenseTensor w = pure_state_vector(psi, tol);
    CHECK(std::abs(w.data[0]) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("zero state") {
    Morphism zero = cpm.zero(SystemObject::unit(), q);
    auto [psi, env] = purify(zero, cpm, tol);
    CHECK(env.is_unit());
    CHECK(frobenius_norm(psi.data()) == 0.0);
  }
  SUBCASE("padding grows the ancilla") {
    Morphism rho = doubled_vector(cpm, q, {1, 0});
    auto [psi, env] = purify(rho, cpm, tol, 2);
    CHECK(env.dim() == 2);
    CHECK(is_dilation(psi, rho, cpm, tol));
  }
  SUBCASE("non-PSD input is rejected") {
    DenseTensor bad = DenseTensor::matrix(Kind::complex_, 2, 2);
    bad.at(0, 0) = 1.0;
    bad.at(1, 1) = -1.0;
    CHECK_THROWS_AS(purify(state_of_density(cpm, q, bad), cpm, tol), TheoryError);
  }
}

TEST_CASE("purify then marginalize is the identity on random densities") {
  for (Kind kind : {Kind::complex_, Kind::real}) {
    CpmTheory cpm(kind);
    Rng rng(5);
    for (int t = 0; t < 15; ++t) {
      SystemObject a = cpm.simple(1 + t % 4);
      Morphism rho = cpm.sample_cp_state(rng, a);
      auto [psi, env] = purify(rho, cpm, Tolerance{});
      CHECK(residual(marginalize(psi, a, env, cpm), rho) < 1e-10 * (1 + frobenius_norm(rho.data())));
      CHECK(choi_rank(psi, Tolerance{}) <= 1);
    }
  }
}

TEST_CASE("connecting_iso on closed-form purifications") {
  CpmTheory cpm(Kind::complex_);
  SystemObject q = cpm.simple(2), e = cpm.simple(2);
  Tolerance tol;
  const double s = 1.0 / std::sqrt(2.0);
  Morphism bell = doubled_vector(cpm, q.tensor(e), {s, 0, 0, s});

  SUBCASE("identical purifications give the identity") {
    Morphism u = connecting_iso(bell, bell, q, e, cpm, tol);
    CHECK(residual(u, Morphism(e, e, Layer::single, DenseTensor::identity(Kind::complex_, 2))) <
          1e-9);
  }
  SUBCASE("Bell versus bit-flipped Bell gives the flip") {
    Morphism flipped = doubled_vector(cpm, q.tensor(e), {0, s, s, 0});
    Morphism u = connecting_iso(bell, flipped, q, e, cpm, tol);
    CHECK(std::abs(u.data().at(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(u.data().at(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(u.data().at(0, 0)) == doctest::Approx(0.0));
    Morphism back = compose(tensor_product(cpm.id(q), cpm_lift(u)), bell);
    CHECK(residual(back, flipped) < 1e-9);
  }
  SUBCASE("marginal mismatch is an error") {
    Morphism other = doubled_vector(cpm, q.tensor(e), {1, 0, 0, 0});
    CHECK_THROWS_AS(connecting_iso(bell, other, q, e, cpm, tol), TheoryError);
  }
  SUBCASE("unequal ancilla dimension cannot even be expressed") {
    Morphism small = doubled_vector(cpm, q.tensor(cpm.simple(1)), {1, 0});
    CHECK_THROWS_AS(connecting_iso(bell, small, q, e, cpm, tol), TheoryError);
  }
}

TEST_CASE("extension along purification reproduces the adjoint on states") {
  CpmTheory cpm(Kind::complex_);
  Tolerance tol;
  StateDaggerAssignment extended =
      extend_state_dagger(sharp_state_dagger(cpm, tol), purification_dilation(cpm, tol));
  SystemObject q = cpm.simple(2);

  // |0><0| extends to the corner effect.
  Morphism rho0 = doubled_vector(cpm, q, {1, 0});
  Morphism eff = extended.apply(rho0);
  CHECK(residual(eff, oracle_adjoint(rho0)) < 1e-10);

  // The completely mixed state extends to discarding.
  Morphism eff_mixed = extended.apply(cpm.mixed(q));
  CHECK(residual(eff_mixed, cpm.discard(q)) < 1e-10);

  // Pure states: the extension collapses to the sharp dagger itself.
  Rng rng(11);
  Morphism psi = cpm.sample_pure_state(rng, q);
  CHECK(residual(extended.apply(psi), extended_sharp(psi, cpm, tol)) < 1e-9);

  // The extension is a state dagger on the ambient instance.
  Report rep;
  check_state_dagger(rep, extended, cpm, Rng(13), 30, 3, tol);
  CHECK(rep.passed());
}

TEST_CASE("dag-resp-state holds in CPM and in Rel") {
  CpmTheory cpm(Kind::complex_);
  Tolerance tol;
  Report rep;
  check_dag_resp_state(rep, sharp_state_dagger(cpm, tol), purification_dilation(cpm, tol),
                       Rng(17), 30, 3, tol);
  CHECK(rep.passed());

  // Rel: the whole category is its own dilation structure.
  RelTheory rel;
  DilationStructure ds;
  ds.ambient = &rel;
  ds.pure_member = [](const Morphism&) { return true; };
  ds.dilate = [&rel](const Morphism& rho) {
    SystemObject env = rel.simple(1);
    DenseTensor point(Kind::boolean, {1, 1});
    point.data[0] = 1.0;
    return std::make_pair(
        tensor_product(rho, Morphism(SystemObject::unit(), env, Layer::single, point)), env);
  };
  Report rel_rep;
  check_dag_resp_state(rel_rep, adjoint_state_dagger(), ds, Rng(19), 30, 3, Tolerance{});
  CHECK(rel_rep.passed());
}

TEST_CASE("purification checker passes on both CPM instances") {
  for (Kind kind : {Kind::complex_, Kind::real}) {
    CpmTheory cpm(kind);
    Report rep;
    check_purification(rep, cpm, Rng(23), 40, 3, Tolerance{});
    CHECK_MESSAGE(rep.passed(), kind_name(kind));
  }
}
