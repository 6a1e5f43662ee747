#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ptheory/morphism.hpp"
#include "ptheory/report.hpp"
#include "ptheory/rng.hpp"

namespace ptheory {

/// Capability contract of a concrete symmetric monoidal category with
/// (optional) discarding and completely mixed states. All operations are
/// pure; instances are immutable and safe to share across threads.
class Theory {
 public:
  virtual ~Theory() = default;

  virtual std::string tag() const = 0;
  virtual Kind kind() const = 0;
  virtual Layer layer() const = 0;

  virtual bool has_discard() const = 0;
  virtual Morphism discard(const SystemObject& a) const;
  virtual Morphism mixed(const SystemObject& a) const;

  /// Generic morphism sampler (need not be causal).
  virtual Morphism sample_morphism(Rng& rng, const SystemObject& dom,
                                   const SystemObject& cod) const = 0;
  /// Causal sampler (total relation / channel); throws where undefined.
  virtual Morphism sample_causal(Rng& rng, const SystemObject& dom,
                                 const SystemObject& cod) const;

  Morphism sample_state(Rng& rng, const SystemObject& a) const {
    return sample_morphism(rng, SystemObject::unit(), a);
  }

  Morphism id(const SystemObject& a) const { return identity_morphism(kind(), layer(), a); }
  Morphism zero(const SystemObject& dom, const SystemObject& cod) const {
    return zero_morphism(kind(), layer(), dom, cod);
  }
  Morphism scalar(cval v) const { return scalar_morphism(kind(), layer(), v); }
  Morphism swap(const SystemObject& a, const SystemObject& b) const {
    return swap_morphism(kind(), layer(), a, b);
  }
  Morphism id_scalar() const { return scalar(1.0); }

  SystemObject simple(int dim) const { return SystemObject::simple(dim); }
};

/// Compact dual: cup is a state of A* ⊗ A, cap an effect of A ⊗ A*; the
/// snake equations hold by construction for everything this library returns.
struct DualPresentation {
  SystemObject object;
  SystemObject dual_object;
  Morphism cup;
  Morphism cap;
};

using DualFactory = std::function<DualPresentation(const SystemObject&)>;

/// cup' = swap ∘ cup : I -> A ⊗ A*.
Morphism primed_cup(const DualPresentation& d);
/// cap' = cap ∘ swap : A* ⊗ A -> I.
Morphism primed_cap(const DualPresentation& d);

/// The snake composites as endomorphisms: (cap ⊗ id) ∘ (id ⊗ cup) on A and
/// (id ⊗ cap) ∘ (cup ⊗ id) on A*, contracted without forming the tensors.
Morphism snake_endomorphism(const DualPresentation& d);
Morphism snake_endomorphism_dual(const DualPresentation& d);

double snake_residual(const DualPresentation& d);
bool check_snakes(const DualPresentation& d, Tolerance tol);

/// Delta-pattern dual; at the doubled layer the cup is the doubling of the
/// single-layer delta vector. Snakes are verified before returning.
DualPresentation standard_dual(const Theory& th, const SystemObject& a);
/// Every-object factory of standard duals.
DualFactory standard_duals(const Theory& th);
/// Memoizing wrapper keyed by the object signature; not synchronized.
DualFactory caching_duals(DualFactory inner);

/// name(f) = (id ⊗ f) ∘ cup : the state of A* ⊗ B presenting f : A -> B.
Morphism name_morphism(const Morphism& f, const DualPresentation& d);
/// Inverse of name along the same dual: f = (cap ⊗ id) ∘ (id ⊗ chi).
Morphism unname_morphism(const Morphism& chi, const DualPresentation& d, const SystemObject& cod);

bool is_causal(const Morphism& f, const Theory& th, Tolerance tol);
bool is_cocausal(const Morphism& f, const Theory& th, Tolerance tol);

/// A candidate dagger: contravariant assignment plus where it came from.
struct DaggerStructure {
  std::string provenance;  // oracle | derived-prop1 | extended-thm3 | reconstructed
  std::function<Morphism(const Morphism&)> apply;
};

DaggerStructure oracle_dagger();

/// Symmetric-monoidal instance sanity: interchange, swap naturality and
/// involution, discard/mixed monoidal laws.
void check_theory_coherence(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol);

/// Dagger-functor laws on sampled morphisms: involution, identities,
/// anti-homomorphism over composition, homomorphism over tensor, unitarity
/// of coherence isomorphisms.
void check_dagger_functor(Report& report, const DaggerStructure& dg, const Theory& th, Rng rng,
                          int cases, int max_dim, Tolerance tol);

/// Dagger-dual laws per object: cap = dagger(cup'), dagger(mixed) = discard,
/// and the discard/mixed compatibility composites of the duals.
void check_dagger_compact(Report& report, const DaggerStructure& dg, const DualFactory& duals,
                          const Theory& th, const std::vector<SystemObject>& objects,
                          Tolerance tol);

/// Single-factor objects of dimension 1..max_dim.
std::vector<SystemObject> objects_up_to(int max_dim);

}  // namespace ptheory
