#pragma once

#include <cstdint>
#include <string>

#include "ptheory/scalar.hpp"

namespace ptheory {

/// Deterministic random source. Gaussian variates come from an explicit
/// Box-Muller transform so sampled cases are reproducible byte-for-byte
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double gaussian();
  bool coin();
  std::uint64_t integer(std::uint64_t bound);  // [0, bound)
  cval gauss_scalar(Kind kind);                // real or complex Gaussian

  /// Independent child stream; checks fork by a stable label so report
  /// content does not depend on suite ordering.
  Rng fork(const std::string& label) const;

 private:
  std::uint64_t next_raw();

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, const std::string& label);

}  // namespace ptheory
