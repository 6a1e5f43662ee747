#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ptheory/scalar.hpp"

namespace ptheory {

/// Wire layer: single carries plain matrices, doubled carries superoperators
/// where each factor of dimension d contributes one axis of extent d*d with
/// adjacent (ket, bra) sub-indices.
enum class Layer : std::uint8_t { single, doubled };

inline const char* layer_name(Layer l) { return l == Layer::single ? "single" : "doubled"; }

inline Layer layer_from_name(const std::string& s) {
  if (s == "single") return Layer::single;
  if (s == "doubled") return Layer::doubled;
  throw TheoryError("unknown layer: " + s);
}

struct Factor {
  int dim = 1;
  bool dual = false;
  bool operator==(const Factor&) const = default;
};

/// Ordered list of atomic system factors; the empty list is the monoidal
/// unit. Tensor concatenates factor lists; duals flip every factor's flag
/// in place, keeping object equality syntactic.
class SystemObject {
 public:
  SystemObject() = default;
  explicit SystemObject(std::vector<Factor> factors) : factors_(std::move(factors)) {
    for (const Factor& f : factors_)
      if (f.dim < 1) throw TheoryError("SystemObject: factor dimension must be positive");
  }

  static SystemObject unit() { return SystemObject(); }
  static SystemObject simple(int dim, bool dual = false) {
    return SystemObject({Factor{dim, dual}});
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }
  bool is_unit() const { return factors_.empty(); }

  int dim() const {
    int d = 1;
    for (const Factor& f : factors_) d *= f.dim;
    return d;
  }

  /// Flat data extent of one factor at the given layer.
  static std::size_t factor_extent(const Factor& f, Layer layer) {
    std::size_t d = static_cast<std::size_t>(f.dim);
    return layer == Layer::doubled ? d * d : d;
  }

  std::size_t data_dim(Layer layer) const {
    std::size_t d = 1;
    for (const Factor& f : factors_) d *= factor_extent(f, layer);
    return d;
  }

  std::vector<std::size_t> axis_extents(Layer layer) const {
    std::vector<std::size_t> ext;
    ext.reserve(factors_.size());
    for (const Factor& f : factors_) ext.push_back(factor_extent(f, layer));
    return ext;
  }

  SystemObject dual() const {
    std::vector<Factor> out = factors_;
    for (Factor& f : out) f.dual = !f.dual;
    return SystemObject(std::move(out));
  }

  SystemObject tensor(const SystemObject& other) const {
    std::vector<Factor> out = factors_;
    out.insert(out.end(), other.factors_.begin(), other.factors_.end());
    return SystemObject(std::move(out));
  }

  bool operator==(const SystemObject&) const = default;

  std::string str() const {
    if (factors_.empty()) return "I";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(factors_[i].dim);
      if (factors_[i].dual) s += "*";
    }
    return s;
  }

 private:
  std::vector<Factor> factors_;
};

}  // namespace ptheory
