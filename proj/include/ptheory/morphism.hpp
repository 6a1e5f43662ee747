#pragma once

#include <nlohmann/json_fwd.hpp>

#include "ptheory/dense.hpp"
#include "ptheory/object.hpp"

namespace ptheory {

/// A process between system objects: a dense matrix shaped
/// (data_dim(cod), data_dim(dom)) at the morphism's layer. States have
/// dom = I, effects cod = I, scalars both.
class Morphism {
 public:
  Morphism(SystemObject dom, SystemObject cod, Layer layer, DenseTensor data);

  const SystemObject& dom() const { return dom_; }
  const SystemObject& cod() const { return cod_; }
  Layer layer() const { return layer_; }
  Kind kind() const { return data_.kind; }
  const DenseTensor& data() const { return data_; }
  DenseTensor& data() { return data_; }

  bool is_state() const { return dom_.is_unit(); }
  bool is_effect() const { return cod_.is_unit(); }
  bool is_scalar() const { return is_state() && is_effect(); }
  bool is_endo() const { return dom_ == cod_; }

  cval scalar_value() const;

  std::string str() const { return dom_.str() + " -> " + cod_.str(); }

 private:
  SystemObject dom_, cod_;
  Layer layer_;
  DenseTensor data_;
};

/// Sequential composition g after f; boundaries must match factorwise.
Morphism compose(const Morphism& g, const Morphism& f);
/// Parallel composition; objects concatenate, data is the Kronecker product.
Morphism tensor_product(const Morphism& f, const Morphism& g);

Morphism identity_morphism(Kind kind, Layer layer, const SystemObject& a);
Morphism zero_morphism(Kind kind, Layer layer, const SystemObject& dom, const SystemObject& cod);
Morphism scalar_morphism(Kind kind, Layer layer, cval value);
/// The symmetry A ⊗ B -> B ⊗ A as an explicit permutation matrix.
Morphism swap_morphism(Kind kind, Layer layer, const SystemObject& a, const SystemObject& b);

/// Data-level conjugate transpose with dom/cod exchanged. This is the
/// ground-truth adjoint in every built-in instance: relational converse,
/// Hermitian adjoint, and the superoperator adjoint.
Morphism dagger_data(const Morphism& f);
/// Plain transpose (no conjugation), dom/cod exchanged.
Morphism transpose_data(const Morphism& f);

Morphism scale_morphism(const Morphism& f, cval factor);

bool approx_eq(const Morphism& a, const Morphism& b, Tolerance tol);
/// Frobenius distance of the underlying data; boundaries must agree.
double residual(const Morphism& a, const Morphism& b);

/// Shared serialization: {scalar, layer, dom:[{dim,dual}], cod:[{dim,dual}],
/// data: row-major array; complex entries as [re, im]}.
nlohmann::json morphism_to_json(const Morphism& m);
Morphism morphism_from_json(const nlohmann::json& j);

}  // namespace ptheory
