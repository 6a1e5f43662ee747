#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptheory {

using cval = std::complex<double>;

/// Error raised when an operation is applied outside its contract
/// (boundary mismatch, unsupported instance, invalid input).
class TheoryError : public std::runtime_error {
 public:
  explicit TheoryError(const std::string& message) : std::runtime_error(message) {}
};

/// Scalar semiring selector. Boolean uses OR as addition and AND as
/// multiplication (entries are exactly 0 or 1); real and complex use
/// ordinary field arithmetic on std::complex<double> storage, where the
/// real kind keeps imaginary parts identically zero.
enum class Kind : std::uint8_t { boolean, real, complex_ };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::boolean: return "boolean";
    case Kind::real: return "real";
    case Kind::complex_: return "complex";
  }
  return "?";
}

inline Kind kind_from_name(const std::string& s) {
  if (s == "boolean") return Kind::boolean;
  if (s == "real") return Kind::real;
  if (s == "complex") return Kind::complex_;
  throw TheoryError("unknown scalar kind: " + s);
}

/// Scalar involution: identity for boolean/real, complex conjugation otherwise.
inline cval conjugate(Kind k, cval v) {
  return k == Kind::complex_ ? std::conj(v) : v;
}

inline bool is_float_kind(Kind k) { return k != Kind::boolean; }

/// Comparison rule: float tensors a, b are equal when
/// ||a - b||_F <= absolute + relative * max(||a||_F, ||b||_F).
/// Boolean tensors compare exactly and ignore the tolerance.
struct Tolerance {
  double absolute = 1e-9;
  double relative = 1e-9;
};

}  // namespace ptheory
