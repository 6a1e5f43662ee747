#include <doctest.h>

#include <cmath>

#include "ptheory/instances.hpp"
#include "ptheory/state_dagger.hpp"

using namespace ptheory;

namespace {

Morphism rel_morphism(const SystemObject& dom, const SystemObject& cod,
                      std::initializer_list<std::pair<int, int>> pairs) {
  DenseTensor m = DenseTensor::matrix(Kind::boolean, cod.data_dim(Layer::single),
                                      dom.data_dim(Layer::single));
  for (auto [a, b] : pairs) m.at(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = 1.0;
  return Morphism(dom, cod, Layer::single, m);
}

}  // namespace

TEST_CASE("compose basics") {
  RelTheory rel;
  SystemObject a = rel.simple(2), b = rel.simple(3), c = rel.simple(2);
  Morphism r = rel_morphism(a, b, {{0, 1}});  // a1 -> b2
  Morphism s = rel_morphism(b, c, {{1, 1}});  // b2 -> c2
  Morphism rs = compose(s, r);
  CHECK(approx_eq(rs, rel_morphism(a, c, {{0, 1}}), Tolerance{}));
  CHECK(approx_eq(compose(rel.id(b), r), r, Tolerance{}));

  MatTheory mat(Kind::complex_);
  DenseTensor eff = DenseTensor::matrix(Kind::complex_, 1, 2);
  eff.data = {1, 0};
  DenseTensor st = DenseTensor::matrix(Kind::complex_, 2, 1);
  st.data = {0, 1};
  Morphism scalar = compose(Morphism(mat.simple(2), SystemObject::unit(), Layer::single, eff),
                            Morphism(SystemObject::unit(), mat.simple(2), Layer::single, st));
  CHECK(scalar.scalar_value() == cval(0, 0));

  CHECK_THROWS_AS(compose(r, r), TheoryError);  // boundary mismatch
}

TEST_CASE("tensor_product basics") {
  MatTheory mat(Kind::complex_);
  DenseTensor s0 = DenseTensor::matrix(Kind::complex_, 2, 1);
  s0.data = {1, 0};
  DenseTensor s1 = DenseTensor::matrix(Kind::complex_, 2, 1);
  s1.data = {0, 1};
  Morphism st0(SystemObject::unit(), mat.simple(2), Layer::single, s0);
  Morphism st1(SystemObject::unit(), mat.simple(2), Layer::single, s1);
  Morphism pair = tensor_product(st0, st1);
  REQUIRE(pair.data().rows() == 4);
  CHECK(pair.data().data[1] == cval(1, 0));  // index pairing (0,1) -> 1
  CHECK(pair.data().data[0] == cval(0, 0));

  Morphism unit_scalar = mat.id_scalar();
  CHECK(approx_eq(tensor_product(st0, unit_scalar), st0, Tolerance{}));

  RelTheory rel;
  SystemObject a = rel.simple(2), b = rel.simple(3);
  Morphism split = tensor_product(rel.discard(a), rel.discard(b));
  CHECK(approx_eq(split, rel.discard(a.tensor(b)), Tolerance{}));

  CpmTheory cpm(Kind::complex_);
  Morphism csplit = tensor_product(cpm.discard(cpm.simple(2)), cpm.discard(cpm.simple(3)));
  CHECK(approx_eq(csplit, cpm.discard(cpm.simple(2).tensor(cpm.simple(3))), Tolerance{}));
}

TEST_CASE("standard duals and snakes") {
  MatTheory mat(Kind::complex_);
  SUBCASE("dimension one collapses to the unit scalar") {
    DualPresentation d = standard_dual(mat, mat.simple(1));
    CHECK(d.cup.data().data[0] == cval(1, 0));
    CHECK(d.cup.data().size() == 1);
  }
  SUBCASE("dimension two delta cup") {
    DualPresentation d = standard_dual(mat, mat.simple(2));
    REQUIRE(d.cup.data().size() == 4);
    CHECK(d.cup.data().data[0] == cval(1, 0));
    CHECK(d.cup.data().data[1] == cval(0, 0));
    CHECK(d.cup.data().data[2] == cval(0, 0));
    CHECK(d.cup.data().data[3] == cval(1, 0));
    CHECK(check_snakes(d, Tolerance{}));
  }
  SUBCASE("Rel cup relates the point to the diagonal") {
    RelTheory rel;
    DualPresentation d = standard_dual(rel, rel.simple(2));
    CHECK(d.cup.data().data[0] == cval(1, 0));
    CHECK(d.cup.data().data[3] == cval(1, 0));
    CHECK(d.cup.data().data[1] == cval(0, 0));
    CHECK(check_snakes(d, Tolerance{}));
  }
  SUBCASE("doubled layer and composite objects") {
    CpmTheory cpm(Kind::complex_);
    for (const SystemObject& a :
         {cpm.simple(2), cpm.simple(3), cpm.simple(2).tensor(cpm.simple(3))}) {
      DualPresentation d = standard_dual(cpm, a);
      CHECK(snake_residual(d) < 1e-12);
    }
  }
}

TEST_CASE("primed cup and cap") {
  MatTheory mat(Kind::complex_);
  DualPresentation d2 = standard_dual(mat, mat.simple(2));
  Morphism p = primed_cup(d2);
  // The delta vector is symmetric under the swap.
  CHECK(approx_eq(p.data(), d2.cup.data(), Tolerance{}));

  // Mixed factors: compare against the explicit wire permutation.
  SystemObject ab = mat.simple(2).tensor(mat.simple(3));
  DualPresentation d = standard_dual(mat, ab);
  Morphism sw = swap_morphism(Kind::complex_, Layer::single, d.dual_object, d.object);
  Morphism expected = compose(sw, d.cup);
  CHECK(approx_eq(primed_cup(d), expected, Tolerance{}));

  Morphism sw2 = swap_morphism(Kind::complex_, Layer::single, d.dual_object, d.object);
  Morphism expected_cap = compose(d.cap, sw2);
  CHECK(approx_eq(primed_cap(d), expected_cap, Tolerance{}));
}

TEST_CASE("name and unname") {
  MatTheory mat(Kind::complex_);
  SystemObject two = mat.simple(2);
  DualPresentation d = standard_dual(mat, two);

  CHECK(approx_eq(name_morphism(mat.id(two), d), d.cup, Tolerance{}));

  DenseTensor f = DenseTensor::matrix(Kind::complex_, 2, 2);
  f.at(0, 1) = 1.0;  // [[0,1],[0,0]]
  Morphism fm(two, two, Layer::single, f);
  Morphism named = name_morphism(fm, d);
  REQUIRE(named.data().size() == 4);
  CHECK(named.data().data[2] == cval(1, 0));  // entry (a,b) = (1,0) -> flat 2
  CHECK(named.data().data[0] == cval(0, 0));

  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    Morphism g = mat.sample_morphism(rng, two, mat.simple(3));
    Morphism round = unname_morphism(name_morphism(g, d), d, g.cod());
    CHECK(residual(round, g) < 1e-12);
  }
}

TEST_CASE("causality and co-causality") {
  RelTheory rel;
  SystemObject a = rel.simple(2);
  CHECK(is_causal(rel.id(a), rel, Tolerance{}));
  CHECK(is_cocausal(rel.id(a), rel, Tolerance{}));

  CpmTheory cpm(Kind::complex_);
  SystemObject q = cpm.simple(2);
  DenseTensor rho = DenseTensor::matrix(Kind::complex_, 2, 2);
  rho.at(0, 0) = 1.0;
  Morphism state = state_of_density(cpm, q, rho);
  CHECK(is_causal(state, cpm, Tolerance{}));  // trace one

  // The trace effect fails co-causality for dim >= 2; a corner effect passes.
  Morphism trace_eff = cpm.discard(q);
  CHECK_FALSE(is_cocausal(trace_eff, cpm, Tolerance{}));
  CHECK(is_cocausal(cpm.discard(cpm.simple(1)), cpm, Tolerance{}));
  DenseTensor corner = DenseTensor::matrix(Kind::complex_, 2, 2);
  corner.at(0, 0) = 1.0;
  Morphism corner_eff = effect_of_operator(cpm, q, corner);
  CHECK(is_cocausal(corner_eff, cpm, Tolerance{}));
}

TEST_CASE("oracle daggers satisfy the functor and compactness laws") {
  Tolerance tol;
  for (const char* tag : {"matc", "rel", "cpm-c"}) {
    auto th = make_instance(tag);
    Report rep;
    check_dagger_functor(rep, oracle_dagger(), *th, Rng(3), 40, 3, tol);
    check_dagger_compact(rep, oracle_dagger(), standard_duals(*th), *th, objects_up_to(3), tol);
    CHECK_MESSAGE(rep.passed(), tag);
  }
}

TEST_CASE("CPM discard of mixed is the dimension, and still compatible") {
  CpmTheory cpm(Kind::complex_);
  SystemObject q = cpm.simple(2);
  cval loop = compose(cpm.discard(q), cpm.mixed(q)).scalar_value();
  CHECK(loop == cval(2, 0));  // unnormalised completely mixed state
  Report rep;
  check_dagger_compact(rep, oracle_dagger(), standard_duals(cpm), cpm, objects_up_to(3),
                       Tolerance{});
  CHECK(rep.passed());
}

TEST_CASE("transpose dagger passes functor laws but fails phase-twisted dagger duals") {
  MatTheory mat(Kind::complex_);
  DaggerStructure transpose_dg{"oracle-transpose",
                               [](const Morphism& f) { return transpose_data(f); }};
  Report rep;
  check_dagger_functor(rep, transpose_dg, mat, Rng(5), 40, 3, Tolerance{});
  CHECK(rep.passed());  // involution and homomorphism laws hold

  // A dual with a complex phase in the cup separates the adjoint from the
  // transpose: cap = dagger(cup') only holds for the conjugating dagger.
  SystemObject two = mat.simple(2);
  const cval phase = std::polar(1.0, 0.7);
  DenseTensor cup = DenseTensor::matrix(Kind::complex_, 4, 1);
  cup.data = {1.0, 0.0, 0.0, phase};
  DenseTensor cap = DenseTensor::matrix(Kind::complex_, 1, 4);
  cap.data = {1.0, 0.0, 0.0, std::conj(phase)};
  DualPresentation twisted{
      two, two.dual(),
      Morphism(SystemObject::unit(), two.dual().tensor(two), Layer::single, cup),
      Morphism(two.tensor(two.dual()), SystemObject::unit(), Layer::single, cap)};
  REQUIRE(check_snakes(twisted, Tolerance{}));

  Morphism adj_cap = dagger_data(primed_cup(twisted));
  CHECK(residual(adj_cap, twisted.cap) < 1e-12);
  Morphism transpose_cap = transpose_data(primed_cup(twisted));
  CHECK(residual(transpose_cap, twisted.cap) > 0.1);
}

TEST_CASE("theory coherence checks pass on every instance") {
  for (const char* tag : {"rel", "matc", "matr", "cpm-c", "cpm-r"}) {
    auto th = make_instance(tag);
    Report rep;
    check_theory_coherence(rep, *th, Rng(9), 25, 3, Tolerance{});
    CHECK_MESSAGE(rep.passed(), tag);
  }
}
