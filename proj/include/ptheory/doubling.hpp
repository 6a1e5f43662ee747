#pragma once

#include "ptheory/dense.hpp"
#include "ptheory/object.hpp"

namespace ptheory {

/// Interleaved doubled index of an object: each factor of dimension d holds
/// an adjacent (ket, bra) pair flattened as ket*d + bra. Maps a flat ket and
/// flat bra over the object's single-layer index space into that layout.
std::size_t doubled_index(const SystemObject& obj, std::size_t ket, std::size_t bra);

/// Doubling F |-> (X -> F X F^dag) written into the interleaved layout:
/// out[(k,b),(k',b')] = F[k,k'] * conj(F[b,b']).
DenseTensor doubled_from_single(const DenseTensor& f, const SystemObject& dom,
                                const SystemObject& cod);

/// Permutation matrix relating the grouped layout of a doubled tensor space
/// (all kets of the left block, all kets of the right, then all bras in the
/// same order) to the interleaved per-factor (ket, bra) layout. `dims` lists
/// the single-layer factor dimensions, left block first. The matrix maps
/// grouped coordinates to interleaved ones.
DenseTensor doubled_tensor_reorder(std::size_t n_factors_left, std::size_t n_factors_right,
                                   const std::vector<int>& dims, Kind kind);

}  // namespace ptheory
