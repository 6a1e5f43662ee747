#include "ptheory/eig.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ptheory {

namespace {

constexpr double kPhasePivot = 1e-12;

Eigen::MatrixXcd to_eigen(const DenseTensor& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.at(i, j);
  return e;
}

// Rotate each column so its first component above the pivot threshold is
// positive real; deterministic golden outputs depend on this.
void normalize_phases(DenseTensor& vectors) {
  const std::size_t n = vectors.rows(), c = vectors.cols();
  for (std::size_t j = 0; j < c; ++j) {
    cval pivot(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(vectors.at(i, j)) > kPhasePivot) {
        pivot = vectors.at(i, j);
        break;
      }
    }
    if (pivot == cval(0.0, 0.0)) continue;
    cval phase = std::abs(pivot) / pivot;
    for (std::size_t i = 0; i < n; ++i) vectors.at(i, j) *= phase;
    if (vectors.kind == Kind::real)
      for (std::size_t i = 0; i < n; ++i) vectors.at(i, j) = cval(vectors.at(i, j).real(), 0.0);
  }
}

}  // namespace

int EigResult::rank(Tolerance tol) const {
  int r = 0;
  for (double v : values)
    if (v > tol.absolute) ++r;
  return r;
}

EigResult eig_psd(const DenseTensor& m, Tolerance tol) {
  if (!m.is_matrix() || m.rows() != m.cols()) throw TheoryError("eig_psd: square matrix required");
  if (m.kind == Kind::boolean) throw TheoryError("eig_psd: float kinds only");
  const std::size_t n = m.rows();

  double herm_residual = residual(m, conj_transpose(m));
  if (herm_residual > tol.absolute + tol.relative * frobenius_norm(m))
    throw TheoryError("eig_psd: matrix is not Hermitian within tolerance");

  EigResult out;
  out.vectors = DenseTensor::matrix(m.kind, n, n);
  out.values.resize(n);

  if (m.kind == Kind::real) {
    Eigen::MatrixXd h(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            0.5 * (m.at(i, j).real() + m.at(j, i).real());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw TheoryError("eig_psd: decomposition failed");
    for (std::size_t j = 0; j < n; ++j) {
      const auto src = static_cast<Eigen::Index>(n - 1 - j);  // ascending -> descending
      out.values[j] = solver.eigenvalues()(src);
      for (std::size_t i = 0; i < n; ++i)
        out.vectors.at(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
    }
  } else {
    Eigen::MatrixXcd e = to_eigen(m);
    Eigen::MatrixXcd h = 0.5 * (e + e.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw TheoryError("eig_psd: decomposition failed");
    for (std::size_t j = 0; j < n; ++j) {
      const auto src = static_cast<Eigen::Index>(n - 1 - j);
      out.values[j] = solver.eigenvalues()(src);
      for (std::size_t i = 0; i < n; ++i)
        out.vectors.at(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
    }
  }

  for (double& v : out.values) {
    if (v < -tol.absolute) throw TheoryError("eig_psd: negative eigenvalue beyond tolerance");
    if (std::abs(v) <= tol.absolute) v = 0.0;
  }
  normalize_phases(out.vectors);
  return out;
}

DenseTensor nullspace_psd(const DenseTensor& m, Tolerance tol) {
  EigResult e = eig_psd(m, tol);
  const std::size_t n = m.rows();
  std::size_t null_dim = 0;
  for (double v : e.values)
    if (v == 0.0) ++null_dim;
  DenseTensor basis = DenseTensor::matrix(m.kind, n, null_dim);
  std::size_t col = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (e.values[j] != 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) basis.at(i, col) = e.vectors.at(i, j);
    ++col;
  }
  return basis;
}

LstsqResult lstsq(const DenseTensor& a, const DenseTensor& b) {
  if (a.kind != Kind::real) throw TheoryError("lstsq: real system required");
  const std::size_t rows = a.rows(), cols = a.cols();
  if (b.size() != rows) throw TheoryError("lstsq: rhs length mismatch");
  Eigen::MatrixXd ea(rows, cols);
  Eigen::VectorXd eb(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    eb(static_cast<Eigen::Index>(i)) = b.data[i].real();
    for (std::size_t j = 0; j < cols; ++j)
      ea(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.at(i, j).real();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ea);
  Eigen::VectorXd x = qr.solve(eb);
  LstsqResult out;
  out.rank = static_cast<int>(qr.rank());
  out.solution = DenseTensor(Kind::real, {cols});
  for (std::size_t j = 0; j < cols; ++j) out.solution.data[j] = x(static_cast<Eigen::Index>(j));
  out.residual = (ea * x - eb).norm();
  return out;
}

}  // namespace ptheory
