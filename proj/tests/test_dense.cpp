#include <doctest.h>

#include "ptheory/dense.hpp"
#include "ptheory/rng.hpp"

using namespace ptheory;

namespace {

DenseTensor cmat(std::size_t r, std::size_t c, std::initializer_list<cval> vals) {
  DenseTensor m = DenseTensor::matrix(Kind::complex_, r, c);
  std::copy(vals.begin(), vals.end(), m.data.begin());
  return m;
}

DenseTensor bmat(std::size_t r, std::size_t c, std::initializer_list<int> vals) {
  DenseTensor m = DenseTensor::matrix(Kind::boolean, r, c);
  auto it = vals.begin();
  for (std::size_t i = 0; i < m.size(); ++i, ++it) m.data[i] = *it ? 1.0 : 0.0;
  return m;
}

DenseTensor random_cmat(Rng& rng, std::size_t r, std::size_t c) {
  DenseTensor m = DenseTensor::matrix(Kind::complex_, r, c);
  for (cval& v : m.data) v = rng.gauss_scalar(Kind::complex_);
  return m;
}

// Independent brute-force oracle for the Kronecker entry formula.
DenseTensor kron_oracle(const DenseTensor& x, const DenseTensor& y) {
  DenseTensor z = DenseTensor::matrix(x.kind, x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l)
          z.at(i * y.rows() + k, j * y.cols() + l) = x.at(i, j) * y.at(k, l);
  return z;
}

}  // namespace

TEST_CASE("kron unit axis and entry formula") {
  DenseTensor id1 = DenseTensor::identity(Kind::complex_, 1);
  DenseTensor m = cmat(2, 2, {cval(1, 2), cval(3, 0), cval(0, -1), cval(4, 4)});
  CHECK(approx_eq(kron(id1, m), m, Tolerance{}));
  CHECK(approx_eq(kron(m, id1), m, Tolerance{}));

  DenseTensor x = cmat(2, 2, {0, 1, 1, 0});
  DenseTensor id2 = DenseTensor::identity(Kind::complex_, 2);
  CHECK(approx_eq(kron(x, id2), kron_oracle(x, id2), Tolerance{}));
  // Block-swap permutation.
  DenseTensor p = kron(x, id2);
  CHECK(p.at(0, 2) == cval(1, 0));
  CHECK(p.at(1, 3) == cval(1, 0));
  CHECK(p.at(2, 0) == cval(1, 0));
  CHECK(p.at(3, 1) == cval(1, 0));
  CHECK(p.at(0, 0) == cval(0, 0));
}

TEST_CASE("kron boolean all-true rows") {
  DenseTensor row = bmat(1, 2, {1, 1});
  DenseTensor out = kron(row, row);
  CHECK(out.rows() == 1);
  CHECK(out.cols() == 4);
  for (const cval& v : out.data) CHECK(v == cval(1, 0));
}

TEST_CASE("kron associativity up to reshaping") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    DenseTensor x = random_cmat(rng, 2, 3), y = random_cmat(rng, 3, 2), z = random_cmat(rng, 2, 2);
    CHECK(approx_eq(kron(kron(x, y), z), kron(x, kron(y, z)), Tolerance{}));
  }
}

TEST_CASE("kron rank errors") {
  DenseTensor v(Kind::complex_, {4});
  DenseTensor m = DenseTensor::identity(Kind::complex_, 2);
  CHECK_THROWS_AS(kron(v, m), TheoryError);
}

TEST_CASE("wire_permutation identity and swap fixed points") {
  DenseTensor id = wire_permutation({0}, {3}, Kind::complex_);
  CHECK(approx_eq(id, DenseTensor::identity(Kind::complex_, 3), Tolerance{}));

  DenseTensor sw = wire_permutation({1, 0}, {2, 2}, Kind::complex_);
  // |00> and |11> fixed, |01> <-> |10>.
  CHECK(sw.at(0, 0) == cval(1, 0));
  CHECK(sw.at(3, 3) == cval(1, 0));
  CHECK(sw.at(2, 1) == cval(1, 0));
  CHECK(sw.at(1, 2) == cval(1, 0));
}

TEST_CASE("wire_permutation mixed dims by basis enumeration") {
  DenseTensor p = wire_permutation({1, 0}, {2, 3}, Kind::complex_);
  // P(e_i (x) e_j) = e_j (x) e_i with input flat 3i+j, output flat 2j+i.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t out = 0; out < 6; ++out)
        CHECK(p.at(out, 3 * i + j) == cval(out == 2 * j + i ? 1.0 : 0.0, 0));
}

TEST_CASE("wire_permutation composes") {
  std::vector<std::size_t> dims = {2, 3, 2};
  std::vector<std::size_t> p1 = {1, 2, 0};
  std::vector<std::size_t> p2 = {2, 0, 1};
  std::vector<std::size_t> dims_after_p1(3);
  for (std::size_t i = 0; i < 3; ++i) dims_after_p1[p1[i]] = dims[i];
  std::vector<std::size_t> combined(3);
  for (std::size_t i = 0; i < 3; ++i) combined[i] = p2[p1[i]];
  DenseTensor lhs = wire_permutation(combined, dims, Kind::complex_);
  DenseTensor rhs = matmul(wire_permutation(p2, dims_after_p1, Kind::complex_),
                           wire_permutation(p1, dims, Kind::complex_));
  CHECK(approx_eq(lhs, rhs, Tolerance{}));
}

TEST_CASE("wire_permutation rejects invalid permutations") {
  CHECK_THROWS_AS(wire_permutation({0, 0}, {2, 2}, Kind::boolean), TheoryError);
  CHECK_THROWS_AS(wire_permutation({0, 2}, {2, 2}, Kind::boolean), TheoryError);
}

TEST_CASE("partial_contract examples") {
  DenseTensor v(Kind::complex_, {4});
  v.data = {1, 0, 0, 1};
  SUBCASE("trivial discarded block keeps the vector") {
    DenseTensor row(Kind::complex_, {1});
    row.data = {1.0};
    DenseTensor out = partial_contract(v, {4, 1}, {true, false}, row);
    CHECK(approx_eq(out, v, Tolerance{}));
  }
  SUBCASE("contract second factor") {
    DenseTensor row(Kind::complex_, {2});
    row.data = {1, 1};
    DenseTensor out = partial_contract(v, {2, 2}, {true, false}, row);
    REQUIRE(out.size() == 2);
    CHECK(out.data[0] == cval(1, 0));
    CHECK(out.data[1] == cval(1, 0));
  }
  SUBCASE("boolean singleton") {
    DenseTensor b(Kind::boolean, {4});
    b.data[1] = 1.0;  // the pair (0, 1)
    DenseTensor all(Kind::boolean, {2});
    all.data = {1, 1};
    DenseTensor out = partial_contract(b, {2, 2}, {true, false}, all);
    CHECK(out.data[0] == cval(1, 0));
    CHECK(out.data[1] == cval(0, 0));
  }
  SUBCASE("shape mismatch") {
    DenseTensor row(Kind::complex_, {3});
    CHECK_THROWS_AS(partial_contract(v, {2, 2}, {true, false}, row), TheoryError);
  }
}

TEST_CASE("boolean matmul is relational composition") {
  // {(a,b)} ; {(b,c)} = {(a,c)} with carriers of size 2.
  DenseTensor r = bmat(2, 2, {0, 0, 1, 0});  // a -> b as matrix cod x dom
  DenseTensor s = bmat(2, 2, {0, 0, 0, 1});  // b -> c
  DenseTensor rs = matmul(s, r);
  CHECK(rs.at(1, 0) == cval(1, 0));
  CHECK(rs.at(0, 0) == cval(0, 0));
  CHECK(rs.at(0, 1) == cval(0, 0));
  CHECK(rs.at(1, 1) == cval(0, 0));

  // OR-saturation: two witnesses still give exactly 1.
  DenseTensor t = bmat(2, 2, {1, 1, 1, 1});
  DenseTensor u = bmat(2, 2, {1, 0, 1, 0});
  DenseTensor tu = matmul(t, u);
  CHECK(tu.valid_entries());
  CHECK(tu.at(0, 0) == cval(1, 0));
}

TEST_CASE("parallel kernels match the serial reference") {
  Rng rng(5);
  for (std::size_t n : {8, 64, 160}) {
    DenseTensor a = random_cmat(rng, n, n);
    DenseTensor b = random_cmat(rng, n, n);
    CHECK(residual(matmul(a, b), serial::matmul(a, b)) == 0.0);
  }
  DenseTensor x = random_cmat(rng, 16, 16);
  DenseTensor y = random_cmat(rng, 16, 16);
  CHECK(residual(kron(x, y), serial::kron(x, y)) == 0.0);
}

TEST_CASE("approx_eq tolerance rule") {
  DenseTensor a = DenseTensor::identity(Kind::complex_, 2);
  CHECK(approx_eq(a, a, Tolerance{}));
  DenseTensor b = a;
  b.at(1, 1) += 1e-12;
  CHECK(approx_eq(a, b, Tolerance{1e-9, 0.0}));
  b.at(1, 1) += 1e-3;
  CHECK_FALSE(approx_eq(a, b, Tolerance{1e-9, 1e-9}));

  DenseTensor ba = bmat(1, 2, {1, 0});
  DenseTensor bb = bmat(1, 2, {1, 1});
  CHECK_FALSE(approx_eq(ba, bb, Tolerance{1e9, 1e9}));  // boolean compares exactly
  CHECK(approx_eq(ba, ba, Tolerance{0, 0}));
}

TEST_CASE("matmul boundary errors") {
  DenseTensor a = DenseTensor::matrix(Kind::complex_, 2, 3);
  DenseTensor b = DenseTensor::matrix(Kind::complex_, 2, 2);
  CHECK_THROWS_AS(matmul(a, b), TheoryError);
}
