#include "ptheory/dense.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>

namespace ptheory {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& sh) {
  std::size_t n = 1;
  for (std::size_t d : sh) n *= d;
  return n;
}

inline bool truthy(cval v) { return v.real() != 0.0 || v.imag() != 0.0; }

// Parallelism pays off only for reasonably large outputs; everything at desk
// scale stays on the serial path.
constexpr std::size_t kParallelCutoff = 1 << 14;

}  // namespace

DenseTensor::DenseTensor(Kind k, std::vector<std::size_t> sh)
    : kind(k), shape(std::move(sh)), data(shape_product(shape), cval(0.0, 0.0)) {}

DenseTensor DenseTensor::matrix(Kind k, std::size_t rows, std::size_t cols) {
  return DenseTensor(k, {rows, cols});
}

DenseTensor DenseTensor::identity(Kind k, std::size_t n) {
  DenseTensor m = matrix(k, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data[i * n + i] = 1.0;
  return m;
}

std::size_t DenseTensor::rows() const {
  if (!is_matrix()) throw TheoryError("rows(): tensor is not rank-2");
  return shape[0];
}

std::size_t DenseTensor::cols() const {
  if (!is_matrix()) throw TheoryError("cols(): tensor is not rank-2");
  return shape[1];
}

cval& DenseTensor::at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
cval DenseTensor::at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

bool DenseTensor::valid_entries() const {
  for (const cval& v : data) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    if (kind == Kind::boolean) {
      bool zero = v.real() == 0.0 && v.imag() == 0.0;
      bool one = v.real() == 1.0 && v.imag() == 0.0;
      if (!zero && !one) return false;
    }
  }
  return true;
}

std::size_t flat_index(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& dims) {
  if (idx.size() != dims.size()) throw TheoryError("flat_index: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) flat = flat * dims[i] + idx[i];
  return flat;
}

std::vector<std::size_t> unflatten_index(std::size_t flat, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t i = dims.size(); i-- > 0;) {
    idx[i] = flat % dims[i];
    flat /= dims[i];
  }
  return idx;
}

double frobenius_norm(const DenseTensor& a) {
  double s = 0.0;
  for (const cval& v : a.data) s += std::norm(v);
  return std::sqrt(s);
}

double residual(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape != b.shape) throw TheoryError("residual: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s);
}

bool approx_eq(const DenseTensor& a, const DenseTensor& b, Tolerance tol) {
  if (a.kind != b.kind) throw TheoryError("approx_eq: kind mismatch");
  if (a.shape != b.shape) throw TheoryError("approx_eq: shape mismatch");
  if (a.kind == Kind::boolean) return a.data == b.data;
  double bound = tol.absolute + tol.relative * std::max(frobenius_norm(a), frobenius_norm(b));
  return residual(a, b) <= bound;
}

namespace serial {

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  if (!a.is_matrix() || !b.is_matrix()) throw TheoryError("matmul: rank-2 operands required");
  if (a.kind != b.kind) throw TheoryError("matmul: kind mismatch");
  if (a.cols() != b.rows()) throw TheoryError("matmul: inner dimension mismatch");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseTensor c = DenseTensor::matrix(a.kind, m, n);
  if (a.kind == Kind::boolean) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool hit = false;
        for (std::size_t t = 0; t < k && !hit; ++t)
          hit = truthy(a.data[i * k + t]) && truthy(b.data[t * n + j]);
        c.data[i * n + j] = hit ? 1.0 : 0.0;
      }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t t = 0; t < k; ++t) {
        const cval av = a.data[i * k + t];
        if (av == cval(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) c.data[i * n + j] += av * b.data[t * n + j];
      }
  }
  return c;
}

DenseTensor kron(const DenseTensor& x, const DenseTensor& y) {
  if (!x.is_matrix() || !y.is_matrix()) throw TheoryError("kron: rank-2 operands required");
  if (x.kind != y.kind) throw TheoryError("kron: kind mismatch");
  const std::size_t rx = x.rows(), cx = x.cols(), ry = y.rows(), cy = y.cols();
  DenseTensor z = DenseTensor::matrix(x.kind, rx * ry, cx * cy);
  for (std::size_t i = 0; i < rx; ++i)
    for (std::size_t k = 0; k < ry; ++k)
      for (std::size_t j = 0; j < cx; ++j)
        for (std::size_t l = 0; l < cy; ++l) {
          cval v = x.kind == Kind::boolean
                       ? cval(truthy(x.data[i * cx + j]) && truthy(y.data[k * cy + l]) ? 1.0 : 0.0, 0.0)
                       : x.data[i * cx + j] * y.data[k * cy + l];
          z.data[(i * ry + k) * (cx * cy) + (j * cy + l)] = v;
        }
  return z;
}

}  // namespace serial

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  if (!a.is_matrix() || !b.is_matrix()) throw TheoryError("matmul: rank-2 operands required");
  if (a.kind != b.kind) throw TheoryError("matmul: kind mismatch");
  if (a.cols() != b.rows()) throw TheoryError("matmul: inner dimension mismatch");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (m * n < kParallelCutoff || a.kind == Kind::boolean) return serial::matmul(a, b);
  DenseTensor c = DenseTensor::matrix(a.kind, m, n);
  const std::int64_t rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const cval av = a.data[static_cast<std::size_t>(i) * k + t];
      if (av == cval(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j)
        c.data[static_cast<std::size_t>(i) * n + j] += av * b.data[t * n + j];
    }
  }
  return c;
}

DenseTensor kron(const DenseTensor& x, const DenseTensor& y) {
  if (!x.is_matrix() || !y.is_matrix()) throw TheoryError("kron: rank-2 operands required");
  if (x.kind != y.kind) throw TheoryError("kron: kind mismatch");
  const std::size_t rx = x.rows(), cx = x.cols(), ry = y.rows(), cy = y.cols();
  if (rx * ry * cx * cy < kParallelCutoff || x.kind == Kind::boolean) return serial::kron(x, y);
  DenseTensor z = DenseTensor::matrix(x.kind, rx * ry, cx * cy);
  const std::int64_t outer = static_cast<std::int64_t>(rx * ry);
#pragma omp parallel for schedule(static)
  for (std::int64_t row = 0; row < outer; ++row) {
    const std::size_t i = static_cast<std::size_t>(row) / ry;
    const std::size_t k = static_cast<std::size_t>(row) % ry;
    for (std::size_t j = 0; j < cx; ++j) {
      const cval xv = x.data[i * cx + j];
      if (xv == cval(0.0, 0.0)) continue;
      for (std::size_t l = 0; l < cy; ++l)
        z.data[static_cast<std::size_t>(row) * (cx * cy) + (j * cy + l)] = xv * y.data[k * cy + l];
    }
  }
  return z;
}

DenseTensor wire_permutation(const std::vector<std::size_t>& perm,
                             const std::vector<std::size_t>& dims, Kind kind) {
  const std::size_t n = perm.size();
  if (dims.size() != n) throw TheoryError("wire_permutation: perm/dims length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw TheoryError("wire_permutation: invalid permutation");
    seen[p] = true;
  }
  for (std::size_t d : dims)
    if (d == 0) throw TheoryError("wire_permutation: zero extent");
  std::vector<std::size_t> out_dims(n, 0);
  for (std::size_t i = 0; i < n; ++i) out_dims[perm[i]] = dims[i];
  const std::size_t total = shape_product(dims);
  DenseTensor p = DenseTensor::matrix(kind, total, total);
  std::vector<std::size_t> out_idx(n, 0);
  for (std::size_t col = 0; col < total; ++col) {
    std::vector<std::size_t> in_idx = unflatten_index(col, dims);
    for (std::size_t i = 0; i < n; ++i) out_idx[perm[i]] = in_idx[i];
    p.data[flat_index(out_idx, out_dims) * total + col] = 1.0;
  }
  return p;
}

DenseTensor partial_contract(const DenseTensor& v, const std::vector<std::size_t>& extents,
                             const std::vector<bool>& keep, const DenseTensor& dual_row) {
  if (v.rank() != 1) throw TheoryError("partial_contract: state vector required");
  if (extents.size() != keep.size()) throw TheoryError("partial_contract: extents/keep mismatch");
  if (shape_product(extents) != v.size()) throw TheoryError("partial_contract: extent mismatch");
  std::size_t kept = 1, dropped = 1;
  for (std::size_t i = 0; i < extents.size(); ++i) (keep[i] ? kept : dropped) *= extents[i];
  if (dual_row.size() != dropped) throw TheoryError("partial_contract: effect row length mismatch");

  DenseTensor out(v.kind, {kept});
  const std::size_t n = extents.size();
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    std::vector<std::size_t> idx = unflatten_index(flat, extents);
    std::size_t kflat = 0, dflat = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep[i])
        kflat = kflat * extents[i] + idx[i];
      else
        dflat = dflat * extents[i] + idx[i];
    }
    if (v.kind == Kind::boolean) {
      if (truthy(v.data[flat]) && truthy(dual_row.data[dflat])) out.data[kflat] = 1.0;
    } else {
      out.data[kflat] += v.data[flat] * dual_row.data[dflat];
    }
  }
  return out;
}

DenseTensor transpose(const DenseTensor& m) {
  if (!m.is_matrix()) throw TheoryError("transpose: rank-2 required");
  DenseTensor t = DenseTensor::matrix(m.kind, m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t.data[j * m.rows() + i] = m.data[i * m.cols() + j];
  return t;
}

DenseTensor conj_transpose(const DenseTensor& m) {
  DenseTensor t = transpose(m);
  for (cval& v : t.data) v = conjugate(m.kind, v);
  return t;
}

DenseTensor reshaped(DenseTensor t, std::vector<std::size_t> shape) {
  if (shape_product(shape) != t.size()) throw TheoryError("reshaped: size mismatch");
  t.shape = std::move(shape);
  return t;
}

DenseTensor scale(const DenseTensor& m, cval factor) {
  if (m.kind == Kind::boolean) {
    DenseTensor s = m;
    if (!truthy(factor))
      for (cval& v : s.data) v = 0.0;
    return s;
  }
  DenseTensor s = m;
  for (cval& v : s.data) v *= factor;
  return s;
}

}  // namespace ptheory
