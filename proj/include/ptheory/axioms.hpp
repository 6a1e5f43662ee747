#pragma once

#include <optional>

#include "ptheory/dilation.hpp"

namespace ptheory {

/// Purity decision with a witness: the factorizing causal state when pure,
/// or a non-factorizing minimal Stinespring dilation when not.
struct PurityVerdict {
  bool pure = false;
  std::optional<Morphism> factor_witness;    // causal state completing f (x) rho
  std::optional<Morphism> dilation_witness;  // dilation that fails to factor
};

struct NormalizeResult {
  bool zero = false;
  cval scalar{0.0, 0.0};
  std::optional<Morphism> causal;  // absent for the zero state
};

/// rho = sigma ∘ r with r = discard ∘ rho and sigma causal; the zero state
/// is flagged instead of split.
NormalizeResult normalize(const Morphism& rho, const Theory& th, Tolerance tol);

/// Kraus rank <= 1 in CPM instances, at-most-singleton graph in Rel, plus a
/// definitional dilation spot-check.
PurityVerdict is_pure(const Morphism& f, const Theory& th, Tolerance tol);

/// id_A = mixed ∘ discard.
bool is_trivial(const SystemObject& a, const Theory& th, Tolerance tol);

/// Pure states are closed under normalisation and tensor.
void check_lemma_normalisation(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                               Tolerance tol);

/// The unique pure co-causal effect composing with a causal pure state to 1.
Morphism sharp_effect(const Morphism& psi, const Theory& th, Tolerance tol);
/// Extension to arbitrary pure states: 0 -> 0, otherwise r * sharp of the
/// normalisation.
Morphism extended_sharp(const Morphism& psi, const Theory& th, Tolerance tol);
/// The sharp assignment packaged as a pure-subcategory state dagger.
StateDaggerAssignment sharp_state_dagger(const Theory& th, Tolerance tol);

void check_sharpness(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                     Tolerance tol);
void check_normalisation_unique(Report& report, const CpmTheory& th, Rng rng, int cases,
                                int max_dim, Tolerance tol);
void check_pure_composition(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol);

/// Pure purification of the completely mixed state, playing the cup:
/// the doubling of sum_i |i>|i> on A* (x) A.
Morphism pre_dual(const SystemObject& a, const CpmTheory& th);
void check_pre_duals(Report& report, const CpmTheory& th, int max_dim, Tolerance tol);

/// Doublings of |i>, (|i>+|j>)/sqrt2, and ((|i>+i|j>)/sqrt2 over C).
std::vector<Morphism> pure_state_spanning_set(const SystemObject& a, const CpmTheory& th);
/// True when the endomorphism fixes every spanning state.
bool check_identity_tomography(const Morphism& v, const CpmTheory& th, Tolerance tol);
/// Gram rank of the spanning set's densities: d^2 over C, d(d+1)/2 over R.
void check_tomography_completeness(Report& report, const CpmTheory& th, int max_dim,
                                   Tolerance tol);

/// discard∘lift(F) = discard∘lift(G) iff F^dag F = G^dag G, on engineered
/// positive and negative pairs.
void check_cp_axiom(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                    Tolerance tol);

/// Marginal equality iff equality of sd-partial inner products, plus the
/// swap symmetry special case, for a state dagger on the pure base.
void check_cp_state_dagger(Report& report, const StateDaggerAssignment& sd_base,
                           const CpmTheory& th, Rng rng, int cases, int max_dim, Tolerance tol);

struct ReconstructionConfig {
  std::uint64_t seed = 0;
  int cases = 100;
  int oracle_samples = 200;
  Tolerance tol;
};

struct ReconstructionResult {
  Report report;
  std::optional<DaggerStructure> dagger;
  double snake_deviation = 0.0;   // worst ||V - id|| across objects
  double oracle_residual = 0.0;   // worst distance to the adjoint oracle
  bool ok = false;
};

/// The end-to-end pipeline: axiom checks, pre-dual duals with V = id via
/// identity tomography, dual compatibility, the pure-subcategory dagger,
/// and the dilation extension to every morphism, compared against the
/// adjoint oracle.
ReconstructionResult reconstruct_dagger_compact(const CpmTheory& th, const std::vector<int>& dims,
                                                const ReconstructionConfig& config);

}  // namespace ptheory
