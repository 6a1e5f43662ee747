#include <doctest.h>

#include <cmath>

#include "ptheory/eig.hpp"
#include "ptheory/rng.hpp"

using namespace ptheory;

namespace {

DenseTensor random_psd(Rng& rng, Kind kind, std::size_t n) {
  DenseTensor w = DenseTensor::matrix(kind, n, n);
  for (cval& v : w.data) v = rng.gauss_scalar(kind);
  return matmul(w, conj_transpose(w));
}

}  // namespace

TEST_CASE("eig_psd on simple diagonals") {
  Tolerance tol;
  DenseTensor id2 = DenseTensor::identity(Kind::complex_, 2);
  EigResult e = eig_psd(id2, tol);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));

  DenseTensor d = DenseTensor::matrix(Kind::real, 2, 2);
  d.at(0, 0) = 2.0;
  EigResult e2 = eig_psd(d, tol);
  CHECK(e2.values[0] == doctest::Approx(2.0));
  CHECK(e2.values[1] == 0.0);  // clamped at the zero threshold
  CHECK(e2.rank(tol) == 1);
  CHECK(e2.vectors.at(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(e2.vectors.at(1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("eig_psd of the half ones matrix") {
  // Characteristic polynomial gives eigenvalues 1 and 0 with the flat
  // eigenvector first.
  DenseTensor m = DenseTensor::matrix(Kind::real, 2, 2);
  for (cval& v : m.data) v = 0.5;
  EigResult e = eig_psd(m, Tolerance{});
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(e.vectors.at(0, 0).real() == doctest::Approx(inv_sqrt2));
  CHECK(e.vectors.at(1, 0).real() == doctest::Approx(inv_sqrt2));
}

TEST_CASE("eig_psd reconstruction and orthonormality") {
  Rng rng(21);
  Tolerance tol;
  for (Kind kind : {Kind::real, Kind::complex_}) {
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 2 + t % 4;
      DenseTensor m = random_psd(rng, kind, n);
      EigResult e = eig_psd(m, tol);
      DenseTensor rebuilt = DenseTensor::matrix(kind, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          cval acc(0, 0);
          for (std::size_t k = 0; k < n; ++k)
            acc += e.values[k] * e.vectors.at(i, k) * conjugate(kind, e.vectors.at(j, k));
          rebuilt.at(i, j) = acc;
        }
      CHECK(residual(rebuilt, m) < 1e-9 * (1.0 + frobenius_norm(m)));
      DenseTensor gram = matmul(conj_transpose(e.vectors), e.vectors);
      CHECK(residual(gram, DenseTensor::identity(kind, n)) < 1e-9);
      // Descending order.
      for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
      // Phase convention: first appreciable component positive real.
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          if (std::abs(e.vectors.at(i, k)) > 1e-7) {
            CHECK(e.vectors.at(i, k).imag() == doctest::Approx(0.0).epsilon(1e-9));
            CHECK(e.vectors.at(i, k).real() > 0.0);
            break;
          }
        }
      }
    }
  }
}

TEST_CASE("eig_psd rejects bad input") {
  DenseTensor nh = DenseTensor::matrix(Kind::complex_, 2, 2);
  nh.at(0, 1) = cval(1, 0);  // not Hermitian
  CHECK_THROWS_AS(eig_psd(nh, Tolerance{}), TheoryError);

  DenseTensor neg = DenseTensor::identity(Kind::real, 2);
  neg.at(1, 1) = -1.0;
  CHECK_THROWS_AS(eig_psd(neg, Tolerance{}), TheoryError);
}

TEST_CASE("nullspace_psd spans the kernel") {
  DenseTensor d = DenseTensor::matrix(Kind::complex_, 3, 3);
  d.at(0, 0) = 2.0;
  DenseTensor basis = nullspace_psd(d, Tolerance{});
  REQUIRE(basis.cols() == 2);
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(basis.at(0, j)) < 1e-9);
  DenseTensor gram = matmul(conj_transpose(basis), basis);
  CHECK(residual(gram, DenseTensor::identity(Kind::complex_, 2)) < 1e-9);
}

TEST_CASE("lstsq solves and ranks a small system") {
  DenseTensor a = DenseTensor::matrix(Kind::real, 3, 2);
  a.at(0, 0) = 1.0;
  a.at(1, 1) = 1.0;
  a.at(2, 0) = 1.0;
  a.at(2, 1) = 1.0;
  DenseTensor b(Kind::real, {3});
  b.data = {1.0, 2.0, 3.0};  // consistent: (1, 2)
  LstsqResult r = lstsq(a, b);
  CHECK(r.rank == 2);
  CHECK(r.solution.data[0].real() == doctest::Approx(1.0));
  CHECK(r.solution.data[1].real() == doctest::Approx(2.0));
  CHECK(r.residual == doctest::Approx(0.0));

  b.data[2] = 5.0;  // inconsistent third equation
  LstsqResult r2 = lstsq(a, b);
  CHECK(r2.residual > 0.1);
}
