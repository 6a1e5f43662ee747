#pragma once

#include <cstddef>
#include <vector>

#include "ptheory/scalar.hpp"

namespace ptheory {

/// Dense row-major tensor over one scalar kind. The multi-index pairing is
/// index(i_1,...,i_n) = ((i_1*d_2 + i_2)*d_3 + ...) throughout the library.
struct DenseTensor {
  Kind kind = Kind::complex_;
  std::vector<std::size_t> shape;
  std::vector<cval> data;

  DenseTensor() = default;
  DenseTensor(Kind k, std::vector<std::size_t> sh);

  static DenseTensor matrix(Kind k, std::size_t rows, std::size_t cols);
  static DenseTensor identity(Kind k, std::size_t n);

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  bool is_matrix() const { return shape.size() == 2; }
  std::size_t rows() const;
  std::size_t cols() const;

  cval& at(std::size_t r, std::size_t c);
  cval at(std::size_t r, std::size_t c) const;

  /// All entries finite; boolean entries exactly 0 or 1.
  bool valid_entries() const;
};

std::size_t flat_index(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& dims);
std::vector<std::size_t> unflatten_index(std::size_t flat, const std::vector<std::size_t>& dims);

double frobenius_norm(const DenseTensor& a);
/// ||a - b||_F over matching shapes.
double residual(const DenseTensor& a, const DenseTensor& b);
bool approx_eq(const DenseTensor& a, const DenseTensor& b, Tolerance tol);

/// Matrix product (OR/AND for boolean). Shapes (m,k)x(k,n) -> (m,n).
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);

/// Kronecker product of rank-2 tensors; entry ((i,k),(j,l)) = x[i,j]*y[k,l]
/// under the row-major pairing.
DenseTensor kron(const DenseTensor& x, const DenseTensor& y);

/// Permutation matrix P with P(v_0 ⊗ ... ⊗ v_{n-1}) = v_{perm^-1(0)} ⊗ ...,
/// i.e. input axis k moves to output position perm[k].
DenseTensor wire_permutation(const std::vector<std::size_t>& perm,
                             const std::vector<std::size_t>& dims, Kind kind);

/// Contract a state vector on factors `extents` against an effect row on the
/// discarded factors (keep[i] == false); returns the vector on the kept ones.
DenseTensor partial_contract(const DenseTensor& v, const std::vector<std::size_t>& extents,
                             const std::vector<bool>& keep, const DenseTensor& dual_row);

DenseTensor transpose(const DenseTensor& m);
DenseTensor conj_transpose(const DenseTensor& m);
DenseTensor scale(const DenseTensor& m, cval factor);

/// Size-preserving shape reinterpretation (row-major layout unchanged).
DenseTensor reshaped(DenseTensor t, std::vector<std::size_t> shape);

/// Serial reference kernels, kept independent of the OpenMP versions so the
/// two can be compared in tests and benchmarks.
namespace serial {
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);
DenseTensor kron(const DenseTensor& x, const DenseTensor& y);
}  // namespace serial

}  // namespace ptheory
