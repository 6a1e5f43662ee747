#pragma once

#include "ptheory/theory.hpp"

namespace ptheory {

/// Per-object mapping of states to effects, the lightweight generator of a
/// full dagger-compact structure via the naming construction.
struct StateDaggerAssignment {
  std::string name;
  std::function<Morphism(const Morphism&)> apply;
};

/// Conjugate transpose of the state data (relational converse on booleans,
/// superoperator adjoint at the doubled layer).
StateDaggerAssignment adjoint_state_dagger();
/// Plain transpose, no conjugation. Satisfies the state-dagger laws (it
/// generates the transpose dagger) but fails the completely positive
/// checks over C; used as the negative control there.
StateDaggerAssignment transpose_state_dagger();

/// Standard duals twisted by a seed-determined permutation on the dual leg;
/// still state-dagger duals for the involutive assignments.
DualFactory permuted_duals(const Theory& th, std::uint64_t seed);

/// Laws of the assignment: unit, tensor multiplicativity, the partial
/// composition exchange, and compatibility with coherence isomorphisms.
void check_state_dagger(Report& report, const StateDaggerAssignment& sd, const Theory& th,
                        Rng rng, int cases, int max_dim, Tolerance tol);

/// cap = sd(cup') for the given presentation.
bool check_state_dagger_dual(const StateDaggerAssignment& sd, const DualPresentation& d,
                             Tolerance tol);
double state_dagger_dual_residual(const StateDaggerAssignment& sd, const DualPresentation& d);

/// The derived dagger of f : A -> B: sd applied to name(f), bent back along
/// the dual of A.
Morphism derive_dagger(const Morphism& f, const StateDaggerAssignment& sd,
                       const DualFactory& duals);

/// Residual of the codomain-side defining property
/// sd(name(f_dag)) = cap' ∘ (id ⊗ f), the cross-check that the derived
/// morphism is the one the dual of B characterizes.
double derive_dagger_bside_residual(const Morphism& f, const Morphism& f_dag,
                                    const StateDaggerAssignment& sd, const DualFactory& duals);

/// Composite dual of A ⊗ B assembled from the factors' duals with a swap.
DualPresentation composite_dual(const DualPresentation& da, const DualPresentation& db);

/// Wraps derive_dagger as a DaggerStructure and verifies: injectivity of sd
/// on samples, all dagger-functor laws, agreement with sd on states,
/// state-dagger-duality of composite duals, and (when the instance has
/// discarding) discard = sd(mixed) plus the dual compatibility conditions.
DaggerStructure derive_global_dagger(Report& report, const StateDaggerAssignment& sd,
                                     const DualFactory& duals, const Theory& th, Rng rng,
                                     int cases, int max_dim, Tolerance tol);

}  // namespace ptheory
