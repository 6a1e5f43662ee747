#include "ptheory/instances.hpp"

#include <cmath>

#include "ptheory/eig.hpp"

namespace ptheory {

namespace {

DenseTensor gaussian_matrix(Rng& rng, Kind kind, std::size_t rows, std::size_t cols) {
  DenseTensor m = DenseTensor::matrix(kind, rows, cols);
  for (cval& v : m.data) v = rng.gauss_scalar(kind);
  return m;
}

// Modified Gram-Schmidt; redraws a column from rng when it degenerates.
DenseTensor orthonormalize_columns(DenseTensor m, Rng& rng) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (cols > rows) throw TheoryError("orthonormalize_columns: more columns than rows");
  for (std::size_t j = 0; j < cols; ++j) {
    for (int attempt = 0;; ++attempt) {
      for (std::size_t p = 0; p < j; ++p) {
        cval overlap(0.0, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
          overlap += conjugate(m.kind, m.at(i, p)) * m.at(i, j);
        for (std::size_t i = 0; i < rows; ++i) m.at(i, j) -= overlap * m.at(i, p);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < rows; ++i) norm += std::norm(m.at(i, j));
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (std::size_t i = 0; i < rows; ++i) m.at(i, j) /= norm;
        break;
      }
      if (attempt > 16) throw TheoryError("orthonormalize_columns: degenerate input");
      for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = rng.gauss_scalar(m.kind);
    }
  }
  return m;
}

// Superoperator of X -> Tr_E(V X V^dag) for V : dom -> cod (x) E, written in
// the interleaved doubled layout.
DenseTensor stinespring_superop(const DenseTensor& v, const SystemObject& dom,
                                const SystemObject& cod, std::size_t env_dim) {
  const std::size_t d_in = dom.data_dim(Layer::single);
  const std::size_t d_out = cod.data_dim(Layer::single);
  if (v.rows() != d_out * env_dim || v.cols() != d_in)
    throw TheoryError("stinespring_superop: isometry shape mismatch");
  DenseTensor s =
      DenseTensor::matrix(v.kind, cod.data_dim(Layer::doubled), dom.data_dim(Layer::doubled));
  const std::int64_t outs = static_cast<std::int64_t>(d_out);
#pragma omp parallel for schedule(static) if (d_out * d_out * d_in * d_in * env_dim > (1u << 16))
  for (std::int64_t i = 0; i < outs; ++i)
    for (std::size_t j = 0; j < d_out; ++j) {
      const std::size_t row = doubled_index(cod, static_cast<std::size_t>(i), j);
      for (std::size_t k = 0; k < d_in; ++k)
        for (std::size_t l = 0; l < d_in; ++l) {
          cval acc(0.0, 0.0);
          for (std::size_t e = 0; e < env_dim; ++e)
            acc += v.at(static_cast<std::size_t>(i) * env_dim + e, k) *
                   conjugate(v.kind, v.at(j * env_dim + e, l));
          s.data[row * s.cols() + doubled_index(dom, k, l)] = acc;
        }
    }
  return s;
}

}  // namespace

// ---- Rel ----

Morphism RelTheory::discard(const SystemObject& a) const {
  DenseTensor row = DenseTensor::matrix(Kind::boolean, 1, a.data_dim(Layer::single));
  for (cval& v : row.data) v = 1.0;
  return Morphism(a, SystemObject::unit(), Layer::single, row);
}

Morphism RelTheory::mixed(const SystemObject& a) const {
  DenseTensor col = DenseTensor::matrix(Kind::boolean, a.data_dim(Layer::single), 1);
  for (cval& v : col.data) v = 1.0;
  return Morphism(SystemObject::unit(), a, Layer::single, col);
}

Morphism RelTheory::sample_morphism(Rng& rng, const SystemObject& dom,
                                    const SystemObject& cod) const {
  DenseTensor m =
      DenseTensor::matrix(Kind::boolean, cod.data_dim(Layer::single), dom.data_dim(Layer::single));
  for (cval& v : m.data) v = rng.coin() ? 1.0 : 0.0;
  return Morphism(dom, cod, Layer::single, m);
}

Morphism RelTheory::sample_causal(Rng& rng, const SystemObject& dom,
                                  const SystemObject& cod) const {
  Morphism r = sample_morphism(rng, dom, cod);
  DenseTensor& m = r.data();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    bool total = false;
    for (std::size_t i = 0; i < m.rows() && !total; ++i) total = m.at(i, c).real() != 0.0;
    if (!total) m.at(rng.integer(m.rows()), c) = 1.0;
  }
  return r;
}

std::vector<Morphism> enumerate_relations(const SystemObject& dom, const SystemObject& cod) {
  const std::size_t bits = dom.data_dim(Layer::single) * cod.data_dim(Layer::single);
  if (bits > 20) throw TheoryError("enumerate_relations: carrier too large");
  std::vector<Morphism> out;
  out.reserve(std::size_t{1} << bits);
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    DenseTensor m = DenseTensor::matrix(Kind::boolean, cod.data_dim(Layer::single),
                                        dom.data_dim(Layer::single));
    for (std::size_t b = 0; b < bits; ++b)
      if (mask & (std::size_t{1} << b)) m.data[b] = 1.0;
    out.emplace_back(dom, cod, Layer::single, std::move(m));
  }
  return out;
}

// ---- Mat ----

MatTheory::MatTheory(Kind k) : kind_(k) {
  if (k == Kind::boolean) throw TheoryError("MatTheory: float kinds only");
}

Morphism MatTheory::sample_morphism(Rng& rng, const SystemObject& dom,
                                    const SystemObject& cod) const {
  return Morphism(dom, cod, Layer::single,
                  gaussian_matrix(rng, kind_, cod.data_dim(Layer::single),
                                  dom.data_dim(Layer::single)));
}

Morphism MatTheory::sample_isometry(Rng& rng, const SystemObject& dom,
                                    const SystemObject& cod) const {
  if (cod.dim() < dom.dim()) throw TheoryError("sample_isometry: codomain too small");
  DenseTensor g = gaussian_matrix(rng, kind_, cod.data_dim(Layer::single),
                                  dom.data_dim(Layer::single));
  return Morphism(dom, cod, Layer::single, orthonormalize_columns(std::move(g), rng));
}

Morphism MatTheory::sample_unitary(Rng& rng, const SystemObject& a) const {
  return sample_isometry(rng, a, a);
}

// ---- CPM ----

CpmTheory::CpmTheory(Kind k) : base_(k) {}

Morphism CpmTheory::discard(const SystemObject& a) const {
  DenseTensor row = DenseTensor::matrix(kind(), 1, a.data_dim(Layer::doubled));
  const std::size_t d = a.data_dim(Layer::single);
  for (std::size_t k = 0; k < d; ++k) row.data[doubled_index(a, k, k)] = 1.0;
  return Morphism(a, SystemObject::unit(), Layer::doubled, row);
}

Morphism CpmTheory::mixed(const SystemObject& a) const {
  DenseTensor col = DenseTensor::matrix(kind(), a.data_dim(Layer::doubled), 1);
  const std::size_t d = a.data_dim(Layer::single);
  for (std::size_t k = 0; k < d; ++k) col.data[doubled_index(a, k, k)] = 1.0;
  return Morphism(SystemObject::unit(), a, Layer::doubled, col);
}

Morphism CpmTheory::sample_morphism(Rng& rng, const SystemObject& dom,
                                    const SystemObject& cod) const {
  const std::size_t d_in = dom.data_dim(Layer::single);
  const std::size_t d_out = cod.data_dim(Layer::single);
  const std::size_t env = std::max<std::size_t>(1, d_in * d_out > 16 ? 16 : d_in * d_out);
  DenseTensor v = gaussian_matrix(rng, kind(), d_out * env, d_in);
  DenseTensor s = stinespring_superop(v, dom, cod, env);
  // Keep entries O(1) regardless of the environment size.
  return Morphism(dom, cod, Layer::doubled, scale(s, 1.0 / static_cast<double>(env)));
}

Morphism CpmTheory::sample_causal(Rng& rng, const SystemObject& dom,
                                  const SystemObject& cod) const {
  const std::size_t d_in = dom.data_dim(Layer::single);
  const std::size_t d_out = cod.data_dim(Layer::single);
  const std::size_t env = d_in;  // d_out * env >= d_in always
  DenseTensor v =
      orthonormalize_columns(gaussian_matrix(rng, kind(), d_out * env, d_in), rng);
  return Morphism(dom, cod, Layer::doubled, stinespring_superop(v, dom, cod, env));
}

Morphism CpmTheory::sample_cp_state(Rng& rng, const SystemObject& a) const {
  const std::size_t d = a.data_dim(Layer::single);
  DenseTensor w = gaussian_matrix(rng, kind(), d, d);
  DenseTensor rho = matmul(w, conj_transpose(w));
  return state_of_density(*this, a, scale(rho, 1.0 / static_cast<double>(d)));
}

Morphism CpmTheory::sample_pure_state(Rng& rng, const SystemObject& a) const {
  DenseTensor w = gaussian_matrix(rng, kind(), a.data_dim(Layer::single), 1);
  Morphism single(SystemObject::unit(), a, Layer::single, std::move(w));
  return cpm_lift(single);
}

Morphism cpm_lift(const Morphism& f) {
  if (f.layer() != Layer::single) throw TheoryError("cpm_lift: single-layer input required");
  return Morphism(f.dom(), f.cod(), Layer::doubled,
                  doubled_from_single(f.data(), f.dom(), f.cod()));
}

DenseTensor choi_matrix(const Morphism& m) {
  if (m.layer() != Layer::doubled) throw TheoryError("choi_matrix: doubled layer required");
  const std::size_t d_in = m.dom().data_dim(Layer::single);
  const std::size_t d_out = m.cod().data_dim(Layer::single);
  DenseTensor c = DenseTensor::matrix(m.kind(), d_out * d_in, d_out * d_in);
  for (std::size_t i = 0; i < d_out; ++i)
    for (std::size_t j = 0; j < d_out; ++j) {
      const std::size_t row = doubled_index(m.cod(), i, j);
      for (std::size_t k = 0; k < d_in; ++k)
        for (std::size_t l = 0; l < d_in; ++l)
          c.data[(i * d_in + k) * (d_out * d_in) + (j * d_in + l)] =
              m.data().data[row * m.data().cols() + doubled_index(m.dom(), k, l)];
    }
  return c;
}

int choi_rank(const Morphism& m, Tolerance tol) {
  EigResult e = eig_psd(choi_matrix(m), tol);
  return e.rank(tol);
}

bool is_completely_positive(const Morphism& m, Tolerance tol) {
  try {
    eig_psd(choi_matrix(m), tol);
    return true;
  } catch (const TheoryError&) {
    return false;
  }
}

std::vector<DenseTensor> kraus_operators(const Morphism& m, Tolerance tol) {
  const std::size_t d_in = m.dom().data_dim(Layer::single);
  const std::size_t d_out = m.cod().data_dim(Layer::single);
  EigResult e = eig_psd(choi_matrix(m), tol);
  std::vector<DenseTensor> out;
  for (std::size_t idx = 0; idx < e.values.size(); ++idx) {
    if (e.values[idx] <= tol.absolute) break;  // descending order
    DenseTensor k = DenseTensor::matrix(m.kind(), d_out, d_in);
    const double root = std::sqrt(e.values[idx]);
    for (std::size_t i = 0; i < d_out; ++i)
      for (std::size_t j = 0; j < d_in; ++j) k.at(i, j) = root * e.vectors.at(i * d_in + j, idx);
    out.push_back(std::move(k));
  }
  return out;
}

Morphism morphism_from_kraus(const CpmTheory& th, const std::vector<DenseTensor>& kraus,
                             const SystemObject& dom, const SystemObject& cod) {
  Morphism acc = th.zero(dom, cod);
  for (const DenseTensor& k : kraus) {
    DenseTensor term = doubled_from_single(k, dom, cod);
    for (std::size_t i = 0; i < term.size(); ++i) acc.data().data[i] += term.data[i];
  }
  return acc;
}

DenseTensor density_of_state(const Morphism& state) {
  if (!state.is_state() || state.layer() != Layer::doubled)
    throw TheoryError("density_of_state: doubled state required");
  const std::size_t d = state.cod().data_dim(Layer::single);
  DenseTensor rho = DenseTensor::matrix(state.kind(), d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t b = 0; b < d; ++b) rho.at(k, b) = state.data().data[doubled_index(state.cod(), k, b)];
  return rho;
}

Morphism state_of_density(const CpmTheory& th, const SystemObject& a, const DenseTensor& rho) {
  const std::size_t d = a.data_dim(Layer::single);
  if (rho.rows() != d || rho.cols() != d) throw TheoryError("state_of_density: shape mismatch");
  DenseTensor col = DenseTensor::matrix(th.kind(), a.data_dim(Layer::doubled), 1);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t b = 0; b < d; ++b) col.data[doubled_index(a, k, b)] = rho.at(k, b);
  return Morphism(SystemObject::unit(), a, Layer::doubled, std::move(col));
}

DenseTensor pure_state_vector(const Morphism& state, Tolerance tol) {
  DenseTensor rho = density_of_state(state);
  const std::size_t d = rho.rows();
  DenseTensor w(state.kind(), {d});
  std::size_t pivot = 0;
  double best = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diag = rho.at(j, j).real();
    if (diag > best) {
      best = diag;
      pivot = j;
    }
  }
  if (best <= tol.absolute) return w;  // zero state
  const double root = std::sqrt(best);
  for (std::size_t i = 0; i < d; ++i) w.data[i] = rho.at(i, pivot) / root;
  // Residual doubles as the purity certificate.
  double err = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      err += std::norm(rho.at(i, j) - w.data[i] * conjugate(state.kind(), w.data[j]));
  if (std::sqrt(err) > 100.0 * (tol.absolute + tol.relative * frobenius_norm(rho)))
    throw TheoryError("pure_state_vector: state is not pure");
  // Deterministic phase: first appreciable component positive real.
  double scale = std::sqrt(best);
  for (std::size_t i = 0; i < d; ++i) {
    if (std::abs(w.data[i]) > 1e-9 * scale) {
      cval phase = std::abs(w.data[i]) / w.data[i];
      for (std::size_t k = 0; k < d; ++k) w.data[k] *= phase;
      break;
    }
  }
  if (state.kind() == Kind::real)
    for (cval& v : w.data) v = cval(v.real(), 0.0);
  return w;
}

Morphism effect_of_operator(const CpmTheory& th, const SystemObject& a, const DenseTensor& h) {
  const std::size_t d = a.data_dim(Layer::single);
  if (h.rows() != d || h.cols() != d) throw TheoryError("effect_of_operator: shape mismatch");
  DenseTensor row = DenseTensor::matrix(th.kind(), 1, a.data_dim(Layer::doubled));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t b = 0; b < d; ++b) row.data[doubled_index(a, k, b)] = h.at(b, k);
  return Morphism(a, SystemObject::unit(), Layer::doubled, std::move(row));
}

Morphism oracle_adjoint(const Morphism& f) { return dagger_data(f); }

std::unique_ptr<Theory> make_instance(const std::string& tag) {
  if (tag == "rel") return std::make_unique<RelTheory>();
  if (tag == "matc") return std::make_unique<MatTheory>(Kind::complex_);
  if (tag == "matr") return std::make_unique<MatTheory>(Kind::real);
  if (tag == "cpm-c") return std::make_unique<CpmTheory>(Kind::complex_);
  if (tag == "cpm-r") return std::make_unique<CpmTheory>(Kind::real);
  throw TheoryError("unknown instance: " + tag);
}

}  // namespace ptheory
