#pragma once

#include "ptheory/instances.hpp"
#include "ptheory/state_dagger.hpp"

namespace ptheory {

/// Ambient category, pure-subcategory membership predicate, and a dilation
/// oracle assigning each state a pure dilation with its ancilla object.
struct DilationStructure {
  const Theory* ambient = nullptr;
  std::function<bool(const Morphism&)> pure_member;
  std::function<std::pair<Morphism, SystemObject>(const Morphism&)> dilate;
};

/// sigma (a state of A (x) E) dilates rho (a state of A) when discarding E
/// recovers rho. The ancilla factors are the suffix of sigma's codomain.
bool is_dilation(const Morphism& sigma, const Morphism& rho, const Theory& th, Tolerance tol);

/// Marginal of a state over its trailing `env` factors.
Morphism marginalize(const Morphism& sigma, const SystemObject& sys, const SystemObject& env,
                     const Theory& th);

/// Eigendecomposition purification: rho = sum lambda_i v_i v_i^dag gives the
/// doubled vector sum sqrt(lambda_i) v_i (x) e_i on ancilla dimension =
/// numerical rank (optionally padded to at least `pad_to`). The zero state
/// purifies to the zero state with a trivial ancilla.
std::pair<Morphism, SystemObject> purify(const Morphism& rho, const CpmTheory& th, Tolerance tol,
                                         int pad_to = 0);

/// Connecting unitary of two purifications of one state over equal ancilla
/// dimensions: U on E (a base-layer morphism) with (id (x) lift(U)) psi = phi.
/// Built from the shared marginal eigenbasis, completed to a full unitary.
Morphism connecting_iso(const Morphism& psi, const Morphism& phi, const SystemObject& sys,
                        const SystemObject& env, const CpmTheory& th, Tolerance tol);

/// Dilation structure of a CPM instance: dilate = purify, membership = Kraus
/// rank at most one.
DilationStructure purification_dilation(const CpmTheory& th, Tolerance tol);

/// The extension of a pure-subcategory state dagger along dilations:
/// sd(rho) = sd_D(psi) ∘ (id (x) mixed(E)) for psi a dilation of rho.
StateDaggerAssignment extend_state_dagger(const StateDaggerAssignment& sd_pure,
                                          const DilationStructure& ds);

/// The well-definedness condition of the extension: equal-marginal pure
/// states give equal extended effects.
void check_dag_resp_state(Report& report, const StateDaggerAssignment& sd_pure,
                          const DilationStructure& ds, Rng rng, int cases, int max_dim,
                          Tolerance tol);

/// Purification axiom checks: marginal recovery, purity of the output, and
/// essential uniqueness via connecting isometries on padded purifications.
void check_purification(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                        Tolerance tol);

}  // namespace ptheory
