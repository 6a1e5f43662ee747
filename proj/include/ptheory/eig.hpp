#pragma once

#include <vector>

#include "ptheory/dense.hpp"

namespace ptheory {

/// Eigendecomposition of a PSD matrix, eigenvalues descending, eigenvector
/// columns orthonormal. Each column is phase-normalized so its first
/// component above the magnitude threshold is positive real.
struct EigResult {
  std::vector<double> values;
  DenseTensor vectors;  // columns
  int rank(Tolerance tol) const;
};

/// Validates Hermitian symmetry within tol, rejects eigenvalues below
/// -tol.absolute, clamps |lambda| <= tol.absolute to zero.
EigResult eig_psd(const DenseTensor& m, Tolerance tol);

/// Orthonormal columns spanning the zero-eigenvalue space of a PSD matrix.
DenseTensor nullspace_psd(const DenseTensor& m, Tolerance tol);

struct LstsqResult {
  DenseTensor solution;  // real vector
  int rank = 0;
  double residual = 0.0;
};

/// Least-squares solve of a real system a.x = b (a real-kind matrix).
LstsqResult lstsq(const DenseTensor& a, const DenseTensor& b);

}  // namespace ptheory
