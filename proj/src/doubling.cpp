#include "ptheory/doubling.hpp"

namespace ptheory {

std::size_t doubled_index(const SystemObject& obj, std::size_t ket, std::size_t bra) {
  std::size_t out = 0;
  const auto& factors = obj.factors();
  // Peel digits from the right (row-major pairing).
  std::vector<std::size_t> kdig(factors.size()), bdig(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    const std::size_t d = static_cast<std::size_t>(factors[i].dim);
    kdig[i] = ket % d;
    bdig[i] = bra % d;
    ket /= d;
    bra /= d;
  }
  if (ket != 0 || bra != 0) throw TheoryError("doubled_index: index out of range");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::size_t d = static_cast<std::size_t>(factors[i].dim);
    out = out * (d * d) + (kdig[i] * d + bdig[i]);
  }
  return out;
}

DenseTensor doubled_from_single(const DenseTensor& f, const SystemObject& dom,
                                const SystemObject& cod) {
  if (f.rows() != cod.data_dim(Layer::single) || f.cols() != dom.data_dim(Layer::single))
    throw TheoryError("doubled_from_single: shape mismatch");
  const std::size_t rc = f.rows(), cc = f.cols();
  DenseTensor out =
      DenseTensor::matrix(f.kind, cod.data_dim(Layer::doubled), dom.data_dim(Layer::doubled));
  const std::int64_t kets = static_cast<std::int64_t>(rc);
#pragma omp parallel for schedule(static) if (rc * rc * cc * cc > (1u << 16))
  for (std::int64_t k = 0; k < kets; ++k)
    for (std::size_t b = 0; b < rc; ++b) {
      const std::size_t row = doubled_index(cod, static_cast<std::size_t>(k), b);
      for (std::size_t kp = 0; kp < cc; ++kp) {
        const cval fk = f.data[static_cast<std::size_t>(k) * cc + kp];
        if (fk == cval(0.0, 0.0)) continue;
        for (std::size_t bp = 0; bp < cc; ++bp)
          out.data[row * out.cols() + doubled_index(dom, kp, bp)] =
              fk * conjugate(f.kind, f.data[b * cc + bp]);
      }
    }
  return out;
}

DenseTensor doubled_tensor_reorder(std::size_t n_factors_left, std::size_t n_factors_right,
                                   const std::vector<int>& dims, Kind kind) {
  const std::size_t n = n_factors_left + n_factors_right;
  if (dims.size() != n) throw TheoryError("doubled_tensor_reorder: dims length mismatch");
  if (n == 0) return DenseTensor::identity(kind, 1);
  // Grouped axis order: k_1..k_n, b_1..b_n; interleaved: k_1, b_1, ..., k_n, b_n.
  std::vector<std::size_t> perm(2 * n), extents(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = 2 * i;          // ket axis
    perm[n + i] = 2 * i + 1;  // bra axis
    extents[i] = static_cast<std::size_t>(dims[i]);
    extents[n + i] = static_cast<std::size_t>(dims[i]);
  }
  return wire_permutation(perm, extents, kind);
}

}  // namespace ptheory
