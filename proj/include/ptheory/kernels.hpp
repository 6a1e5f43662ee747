#pragma once

#include "ptheory/axioms.hpp"

namespace ptheory {

/// A causal kernel k : K -> A with its co-causal split partner satisfying
/// partner ∘ k = id. Zero-dimensional kernels ride on a dim-1 carrier with
/// the zero morphism.
struct KernelPresentation {
  Morphism morphism;
  Morphism partner;
  bool trivial_carrier = false;  // the carrier stands in for the zero object
};

/// Kernel of f: in Rel the inclusion of the empty-image elements; in CPM the
/// doubled isometric inclusion of the null space of the Heisenberg unit
/// (the operator presenting discard ∘ f).
KernelPresentation kernel(const Morphism& f, const Theory& th, Tolerance tol);
/// Cokernel, dually through the null space of f ∘ mixed.
KernelPresentation cokernel(const Morphism& f, const Theory& th, Tolerance tol);

/// f ∘ g = 0 iff g factors uniquely through the kernel.
void check_kernel_universal(Report& report, const Morphism& f, const KernelPresentation& k,
                            const Theory& th, Rng rng, int cases, Tolerance tol);

/// Kernels are causal and split by a unique co-causal partner.
void check_split_kernels(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                         Tolerance tol);

/// Nonzero effect annihilating a pure state of a non-trivial object, plus
/// the dual statement for pure effects.
Morphism pure_exclusion_witness(const Morphism& psi, const Theory& th, Tolerance tol);
Morphism pure_exclusion_witness_dual(const Morphism& effect, const Theory& th, Tolerance tol);

/// Sharp effect recovered as the split partner of the state's image kernel;
/// must agree with sharp_effect.
Morphism sharp_from_kernels(const Morphism& psi, const Theory& th, Tolerance tol);

/// Kernels close under tensor, cokernels preserve purity, and the sharp
/// exchange rule over kernel legs holds.
void check_kernel_composition(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                              Tolerance tol);

/// sharp_from_kernels agrees with sharp_effect on causal pure states.
void check_sharp_kernel_agreement(Report& report, const Theory& th, Rng rng, int cases,
                                  int max_dim, Tolerance tol);

/// Witnesses annihilate their states/effects and are nonzero; trivial
/// objects are refused.
void check_pure_exclusion(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                          Tolerance tol);

/// discard ∘ f = 0 implies f = 0: exhaustively in Rel, via the Choi trace
/// bound ||C||_F <= Tr(C) in CPM.
void check_zero_propagation(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol);

/// discard is the unique effect sending every causal pure state to 1
/// (solved as a linear system over the spanning set), and the pre-dual
/// purifies the completely mixed states of both legs.
void check_predual_from_purification(Report& report, const CpmTheory& th, int max_dim,
                                     Tolerance tol);

}  // namespace ptheory
