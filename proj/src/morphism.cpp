#include "ptheory/morphism.hpp"

#include <nlohmann/json.hpp>

namespace ptheory {

Morphism::Morphism(SystemObject dom, SystemObject cod, Layer layer, DenseTensor data)
    : dom_(std::move(dom)), cod_(std::move(cod)), layer_(layer), data_(std::move(data)) {
  if (!data_.is_matrix()) throw TheoryError("Morphism: rank-2 data required");
  if (data_.rows() != cod_.data_dim(layer_) || data_.cols() != dom_.data_dim(layer_))
    throw TheoryError("Morphism: data shape inconsistent with boundary objects (" + str() + ")");
}

cval Morphism::scalar_value() const {
  if (!is_scalar()) throw TheoryError("scalar_value: morphism is not a scalar");
  return data_.data[0];
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (g.layer() != f.layer() || g.kind() != f.kind())
    throw TheoryError("compose: layer/kind mismatch");
  if (!(f.cod() == g.dom()))
    throw TheoryError("compose: boundary mismatch " + f.str() + " then " + g.str());
  return Morphism(f.dom(), g.cod(), g.layer(), matmul(g.data(), f.data()));
}

Morphism tensor_product(const Morphism& f, const Morphism& g) {
  if (g.layer() != f.layer() || g.kind() != f.kind())
    throw TheoryError("tensor_product: layer/kind mismatch");
  return Morphism(f.dom().tensor(g.dom()), f.cod().tensor(g.cod()), f.layer(),
                  kron(f.data(), g.data()));
}

Morphism identity_morphism(Kind kind, Layer layer, const SystemObject& a) {
  return Morphism(a, a, layer, DenseTensor::identity(kind, a.data_dim(layer)));
}

Morphism zero_morphism(Kind kind, Layer layer, const SystemObject& dom, const SystemObject& cod) {
  return Morphism(dom, cod, layer, DenseTensor::matrix(kind, cod.data_dim(layer), dom.data_dim(layer)));
}

Morphism scalar_morphism(Kind kind, Layer layer, cval value) {
  DenseTensor d = DenseTensor::matrix(kind, 1, 1);
  d.data[0] = value;
  return Morphism(SystemObject::unit(), SystemObject::unit(), layer, d);
}

Morphism swap_morphism(Kind kind, Layer layer, const SystemObject& a, const SystemObject& b) {
  const std::size_t na = a.factor_count(), nb = b.factor_count();
  std::vector<std::size_t> perm(na + nb);
  for (std::size_t i = 0; i < na; ++i) perm[i] = nb + i;
  for (std::size_t j = 0; j < nb; ++j) perm[na + j] = j;
  std::vector<std::size_t> dims = a.tensor(b).axis_extents(layer);
  DenseTensor p = dims.empty() ? DenseTensor::identity(kind, 1) : wire_permutation(perm, dims, kind);
  return Morphism(a.tensor(b), b.tensor(a), layer, std::move(p));
}

Morphism dagger_data(const Morphism& f) {
  return Morphism(f.cod(), f.dom(), f.layer(), conj_transpose(f.data()));
}

Morphism transpose_data(const Morphism& f) {
  return Morphism(f.cod(), f.dom(), f.layer(), transpose(f.data()));
}

Morphism scale_morphism(const Morphism& f, cval factor) {
  return Morphism(f.dom(), f.cod(), f.layer(), scale(f.data(), factor));
}

bool approx_eq(const Morphism& a, const Morphism& b, Tolerance tol) {
  if (!(a.dom() == b.dom()) || !(a.cod() == b.cod()) || a.layer() != b.layer()) return false;
  return approx_eq(a.data(), b.data(), tol);
}

double residual(const Morphism& a, const Morphism& b) {
  if (!(a.dom() == b.dom()) || !(a.cod() == b.cod()))
    throw TheoryError("residual: boundary mismatch");
  return residual(a.data(), b.data());
}

namespace {

nlohmann::json object_to_json(const SystemObject& a) {
  nlohmann::json out = nlohmann::json::array();
  for (const Factor& f : a.factors()) out.push_back({{"dim", f.dim}, {"dual", f.dual}});
  return out;
}

SystemObject object_from_json(const nlohmann::json& j) {
  std::vector<Factor> factors;
  for (const auto& f : j) factors.push_back(Factor{f.at("dim").get<int>(), f.at("dual").get<bool>()});
  return SystemObject(std::move(factors));
}

}  // namespace

nlohmann::json morphism_to_json(const Morphism& m) {
  nlohmann::json data = nlohmann::json::array();
  for (const cval& v : m.data().data) {
    switch (m.kind()) {
      case Kind::boolean: data.push_back(v.real() != 0.0); break;
      case Kind::real: data.push_back(v.real()); break;
      case Kind::complex_: data.push_back(nlohmann::json::array({v.real(), v.imag()})); break;
    }
  }
  return {{"scalar", kind_name(m.kind())},
          {"layer", layer_name(m.layer())},
          {"dom", object_to_json(m.dom())},
          {"cod", object_to_json(m.cod())},
          {"data", data}};
}

Morphism morphism_from_json(const nlohmann::json& j) {
  Kind kind = kind_from_name(j.at("scalar").get<std::string>());
  Layer layer = layer_from_name(j.at("layer").get<std::string>());
  SystemObject dom = object_from_json(j.at("dom"));
  SystemObject cod = object_from_json(j.at("cod"));
  DenseTensor data = DenseTensor::matrix(kind, cod.data_dim(layer), dom.data_dim(layer));
  const nlohmann::json& entries = j.at("data");
  if (entries.size() != data.size()) throw TheoryError("morphism_from_json: data length mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& e = entries[i];
    if (kind == Kind::boolean)
      data.data[i] = e.get<bool>() ? 1.0 : 0.0;
    else if (kind == Kind::real)
      data.data[i] = cval(e.get<double>(), 0.0);
    else
      data.data[i] = cval(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return Morphism(std::move(dom), std::move(cod), layer, std::move(data));
}

}  // namespace ptheory
