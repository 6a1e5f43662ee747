#pragma once

#include <memory>
#include <vector>

#include "ptheory/doubling.hpp"
#include "ptheory/theory.hpp"

namespace ptheory {

/// Finite sets and relations; boolean matrices with OR/AND arithmetic.
/// Discarding is the all-true row, the completely mixed state the all-true
/// column, and everything is exact.
class RelTheory : public Theory {
 public:
  std::string tag() const override { return "rel"; }
  Kind kind() const override { return Kind::boolean; }
  Layer layer() const override { return Layer::single; }
  bool has_discard() const override { return true; }
  Morphism discard(const SystemObject& a) const override;
  Morphism mixed(const SystemObject& a) const override;
  Morphism sample_morphism(Rng& rng, const SystemObject& dom,
                           const SystemObject& cod) const override;
  Morphism sample_causal(Rng& rng, const SystemObject& dom,
                         const SystemObject& cod) const override;
};

/// All relations dom -> cod (2^(|dom| |cod|) of them); carriers must be small.
std::vector<Morphism> enumerate_relations(const SystemObject& dom, const SystemObject& cod);

/// Matrices over R or C at the single layer; no canonical discarding.
class MatTheory : public Theory {
 public:
  explicit MatTheory(Kind k);
  std::string tag() const override { return kind_ == Kind::real ? "matr" : "matc"; }
  Kind kind() const override { return kind_; }
  Layer layer() const override { return Layer::single; }
  bool has_discard() const override { return false; }
  Morphism sample_morphism(Rng& rng, const SystemObject& dom,
                           const SystemObject& cod) const override;
  /// Orthonormalized Gaussian columns; requires dim cod >= dim dom.
  Morphism sample_isometry(Rng& rng, const SystemObject& dom, const SystemObject& cod) const;
  Morphism sample_unitary(Rng& rng, const SystemObject& a) const;

 private:
  Kind kind_;
};

/// Completely positive maps as superoperators in the doubled layer, over a
/// Mat base. Morphism data is shaped (dim cod^2, dim dom^2) with per-factor
/// adjacent (ket, bra) indices; composition is plain matrix product.
class CpmTheory : public Theory {
 public:
  explicit CpmTheory(Kind k);
  std::string tag() const override { return base_.kind() == Kind::real ? "cpm-r" : "cpm-c"; }
  Kind kind() const override { return base_.kind(); }
  Layer layer() const override { return Layer::doubled; }
  bool has_discard() const override { return true; }
  /// Trace row per factor.
  Morphism discard(const SystemObject& a) const override;
  /// Vectorized identity matrix per factor (unnormalised).
  Morphism mixed(const SystemObject& a) const override;
  /// Generic CP map sampled in Stinespring form V . V^dag.
  Morphism sample_morphism(Rng& rng, const SystemObject& dom,
                           const SystemObject& cod) const override;
  /// Trace-preserving channel from an orthonormalized Stinespring isometry.
  Morphism sample_causal(Rng& rng, const SystemObject& dom,
                         const SystemObject& cod) const override;

  const MatTheory& base() const { return base_; }

  /// Unnormalised density-matrix state W W^dag.
  Morphism sample_cp_state(Rng& rng, const SystemObject& a) const;
  /// Doubling of a Gaussian vector (Kraus-rank-1 state).
  Morphism sample_pure_state(Rng& rng, const SystemObject& a) const;

 private:
  MatTheory base_;
};

/// Doubling functor on a single-layer morphism: X -> F X F^dag.
Morphism cpm_lift(const Morphism& f);

/// Choi matrix C[(i,k),(j,l)] = S[(i,j),(k,l)] of a doubled morphism, on the
/// grouped (out, in) index pairing.
DenseTensor choi_matrix(const Morphism& m);
int choi_rank(const Morphism& m, Tolerance tol);
bool is_completely_positive(const Morphism& m, Tolerance tol);

/// Kraus decomposition from the Choi eigensystem; K_i = sqrt(lambda_i) *
/// unvec(u_i), eigenvalue order descending.
std::vector<DenseTensor> kraus_operators(const Morphism& m, Tolerance tol);

/// Doubled morphism with the given Kraus operators (shape cod.dim x dom.dim).
Morphism morphism_from_kraus(const CpmTheory& th, const std::vector<DenseTensor>& kraus,
                             const SystemObject& dom, const SystemObject& cod);

/// Density matrix of a doubled state (grouped layout), and its inverse.
DenseTensor density_of_state(const Morphism& state);
Morphism state_of_density(const CpmTheory& th, const SystemObject& a, const DenseTensor& rho);

/// The vector carried by a Kraus-rank <= 1 doubled state, phase-normalized;
/// zero vector for the (near-)zero state. Extracted from the dominant
/// column of the rank-one density in O(dim^2); throws when the residual
/// shows the state is not pure.
DenseTensor pure_state_vector(const Morphism& state, Tolerance tol);

/// Effect X -> Tr(H X) of a Hermitian operator H, and the matching state.
Morphism effect_of_operator(const CpmTheory& th, const SystemObject& a, const DenseTensor& h);

/// Ground-truth dagger of every built-in instance: relational converse,
/// Hermitian adjoint, superoperator adjoint.
Morphism oracle_adjoint(const Morphism& f);

/// Instance registry keyed by CLI tag: rel | matc | matr | cpm-c | cpm-r.
std::unique_ptr<Theory> make_instance(const std::string& tag);

}  // namespace ptheory
