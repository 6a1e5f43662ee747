#include "ptheory/axioms.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "ptheory/doubling.hpp"
#include "ptheory/eig.hpp"

namespace ptheory {

namespace {

int graph_size(const Morphism& f) {
  int n = 0;
  for (const cval& v : f.data().data)
    if (v.real() != 0.0) ++n;
  return n;
}

bool is_zero_data(const Morphism& f, Tolerance tol) {
  return frobenius_norm(f.data()) <= tol.absolute;
}

/// Pure morphisms of a CPM instance presented as their own theory: same
/// objects and structure-free sampling by lifting base morphisms. Discarding
/// lives in the ambient category, not here.
class PureCpmTheory : public Theory {
 public:
  explicit PureCpmTheory(const CpmTheory& ambient) : ambient_(&ambient) {}
  std::string tag() const override { return ambient_->tag() + "-pure"; }
  Kind kind() const override { return ambient_->kind(); }
  Layer layer() const override { return Layer::doubled; }
  bool has_discard() const override { return false; }
  Morphism sample_morphism(Rng& rng, const SystemObject& dom,
                           const SystemObject& cod) const override {
    return cpm_lift(ambient_->base().sample_morphism(rng, dom, cod));
  }

 private:
  const CpmTheory* ambient_;
};

Morphism causal_pure_state(const CpmTheory& th, Rng& rng, const SystemObject& a) {
  DenseTensor w = DenseTensor::matrix(th.kind(), a.data_dim(Layer::single), 1);
  double norm = 0.0;
  for (cval& v : w.data) {
    v = rng.gauss_scalar(th.kind());
    norm += std::norm(v);
  }
  norm = std::sqrt(norm);
  for (cval& v : w.data) v /= norm;
  return cpm_lift(Morphism(SystemObject::unit(), a, Layer::single, std::move(w)));
}

}  // namespace

NormalizeResult normalize(const Morphism& rho, const Theory& th, Tolerance tol) {
  if (!rho.is_state()) throw TheoryError("normalize: state expected");
  NormalizeResult out;
  if (is_zero_data(rho, tol)) {
    out.zero = true;
    return out;
  }
  Morphism r = compose(th.discard(rho.cod()), rho);
  out.scalar = r.scalar_value();
  if (th.kind() == Kind::boolean) {
    out.causal = rho;  // nonzero boolean states are already causal
    return out;
  }
  if (std::abs(out.scalar) <= tol.absolute) {
    out.zero = true;  // trace-free is zero for the valid states of CPM
    return out;
  }
  out.causal = scale_morphism(rho, 1.0 / out.scalar);
  return out;
}

PurityVerdict is_pure(const Morphism& f, const Theory& th, Tolerance tol) {
  PurityVerdict verdict;
  if (is_zero_data(f, tol)) {
    verdict.pure = true;
    return verdict;
  }

  if (th.kind() == Kind::boolean) {
    const int n = graph_size(f);
    verdict.pure = n <= 1;
    // Dilation with one ancilla point per graph pair.
    SystemObject env = SystemObject::simple(std::max(n, 1));
    DenseTensor g = DenseTensor::matrix(Kind::boolean,
                                        f.cod().tensor(env).data_dim(Layer::single),
                                        f.dom().data_dim(Layer::single));
    int pair = 0;
    for (std::size_t b = 0; b < f.data().rows(); ++b)
      for (std::size_t a = 0; a < f.data().cols(); ++a)
        if (f.data().at(b, a).real() != 0.0) {
          g.data[(b * static_cast<std::size_t>(env.dim()) + pair) * f.data().cols() + a] = 1.0;
          ++pair;
        }
    Morphism dilation(f.dom(), f.cod().tensor(env), Layer::single, std::move(g));
    if (verdict.pure) {
      DenseTensor point(Kind::boolean, {static_cast<std::size_t>(env.dim()), 1});
      point.data[0] = 1.0;
      verdict.factor_witness = Morphism(SystemObject::unit(), env, Layer::single, point);
    } else {
      verdict.dilation_witness = dilation;
    }
    return verdict;
  }

  if (th.layer() != Layer::doubled) throw TheoryError("is_pure: Rel or CPM instance required");
  std::vector<DenseTensor> kraus = kraus_operators(f, tol);
  verdict.pure = kraus.size() <= 1;

  // Minimal Stinespring dilation V = sum_i K_i (x) e_i.
  const std::size_t rank = std::max<std::size_t>(kraus.size(), 1);
  SystemObject env = SystemObject::simple(static_cast<int>(rank));
  const std::size_t d_out = f.cod().data_dim(Layer::single);
  const std::size_t d_in = f.dom().data_dim(Layer::single);
  DenseTensor v = DenseTensor::matrix(f.kind(), d_out * rank, d_in);
  for (std::size_t e = 0; e < kraus.size(); ++e)
    for (std::size_t b = 0; b < d_out; ++b)
      for (std::size_t a = 0; a < d_in; ++a) v.at(b * rank + e, a) = kraus[e].at(b, a);
  Morphism dilation = cpm_lift(Morphism(f.dom(), f.cod().tensor(env), Layer::single, std::move(v)));

  if (verdict.pure) {
    DenseTensor point = DenseTensor::matrix(f.kind(), 1, 1);
    point.data[0] = 1.0;
    Morphism rho = cpm_lift(Morphism(SystemObject::unit(), env, Layer::single, point));
    if (residual(dilation, tensor_product(f, rho)) >
        100.0 * (tol.absolute + tol.relative * frobenius_norm(f.data())))
      throw TheoryError("is_pure: rank-one map failed the factorization spot-check");
    verdict.factor_witness = rho;
  } else {
    verdict.dilation_witness = dilation;
  }
  return verdict;
}

bool is_trivial(const SystemObject& a, const Theory& th, Tolerance tol) {
  return approx_eq(th.id(a), compose(th.mixed(a), th.discard(a)), tol);
}

void check_lemma_normalisation(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                               Tolerance tol) {
  CheckResult norm_pure{"pure-normalisation", "normalisations of pure states are pure"};
  CheckResult tensor_pure{"pure-tensor", "tensors of pure states are pure"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism psi = th.zero(SystemObject::unit(), a);
    Morphism phi = th.zero(SystemObject::unit(), b);
    if (c % 5 != 0) {
      if (th.layer() == Layer::doubled) {
        const auto& cpm = dynamic_cast<const CpmTheory&>(th);
        psi = scale_morphism(cpm.sample_pure_state(rng, a), cval(0.25 + rng.uniform(), 0.0));
        phi = cpm.sample_pure_state(rng, b);
      } else {
        psi.data().data[rng.integer(a.dim())] = 1.0;  // singleton state
        phi.data().data[rng.integer(b.dim())] = 1.0;
      }
    }

    NormalizeResult n = normalize(psi, th, tol);
    ++norm_pure.cases;
    if (!n.zero && !is_pure(*n.causal, th, tol).pure)
      norm_pure.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)}});

    ++tensor_pure.cases;
    if (!is_pure(tensor_product(psi, phi), th, tol).pure)
      tensor_pure.fail_with(
          nlohmann::json{{"psi", morphism_to_json(psi)}, {"phi", morphism_to_json(phi)}});
  }
  report.add(std::move(norm_pure));
  report.add(std::move(tensor_pure));
}

Morphism sharp_effect(const Morphism& psi, const Theory& th, Tolerance tol) {
  if (!psi.is_state()) throw TheoryError("sharp_effect: state expected");
  if (th.kind() == Kind::boolean) {
    if (graph_size(psi) != 1) throw TheoryError("sharp_effect: causal pure state required");
    return transpose_data(psi);
  }
  if (th.layer() != Layer::doubled) throw TheoryError("sharp_effect: Rel or CPM instance required");
  if (!is_causal(psi, th, Tolerance{1e-6, 1e-6}))
    throw TheoryError("sharp_effect: state is not causal");
  DenseTensor w = pure_state_vector(psi, tol);  // throws when not pure
  DenseTensor row = DenseTensor::matrix(w.kind, 1, w.size());
  for (std::size_t i = 0; i < w.size(); ++i) row.data[i] = conjugate(w.kind, w.data[i]);
  return cpm_lift(Morphism(psi.cod(), SystemObject::unit(), Layer::single, std::move(row)));
}

Morphism extended_sharp(const Morphism& psi, const Theory& th, Tolerance tol) {
  NormalizeResult n = normalize(psi, th, tol);
  if (n.zero) return th.zero(psi.cod(), SystemObject::unit());
  return scale_morphism(sharp_effect(*n.causal, th, tol), n.scalar);
}

StateDaggerAssignment sharp_state_dagger(const Theory& th, Tolerance tol) {
  const Theory* t = &th;
  return {"sharp", [t, tol](const Morphism& s) { return extended_sharp(s, *t, tol); }};
}

void check_sharpness(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                     Tolerance tol) {
  CheckResult composite{"sharp-composite", "sharp(psi) ∘ psi = 1"};
  CheckResult cocausal{"sharp-cocausal", "sharp(psi) ∘ mixed = 1"};
  CheckResult pure{"sharp-pure", "sharp effects have Kraus rank <= 1"};
  CheckResult unique{"sharp-unique",
                     "pure co-causal effects hitting 1 on psi equal sharp(psi), and conversely"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism psi = causal_pure_state(th, rng, a);
    Morphism eff = sharp_effect(psi, th, tol);

    composite.tally(residual(compose(eff, psi), th.id_scalar()), 1e2 * tol.absolute,
                    nlohmann::json{{"psi", morphism_to_json(psi)}});
    cocausal.tally(residual(compose(eff, th.mixed(a)), th.id_scalar()), 1e2 * tol.absolute,
                   nlohmann::json{{"psi", morphism_to_json(psi)}});
    ++pure.cases;
    if (choi_rank(eff, tol) > 1) pure.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)}});

    // Probe both uniqueness directions: a phase twist of psi satisfies each
    // premise and must collapse onto the same sharp pair; an independent
    // state almost surely fails the premise and is ignored.
    DenseTensor w = pure_state_vector(psi, tol);
    cval phase = th.kind() == Kind::complex_
                     ? std::polar(1.0, 2.0 * rng.uniform() - 1.0)
                     : cval(-1.0, 0.0);
    DenseTensor tw(w.kind, {w.size(), 1});
    for (std::size_t i = 0; i < w.size(); ++i) tw.data[i] = phase * w.data[i];
    Morphism twisted = cpm_lift(Morphism(SystemObject::unit(), a, Layer::single, std::move(tw)));
    double worst = 0.0;
    Morphism twisted_eff = sharp_effect(twisted, th, tol);
    if (std::abs(compose(twisted_eff, psi).scalar_value() - 1.0) < 1e2 * tol.absolute)
      worst = std::max(worst, residual(twisted_eff, eff));
    if (std::abs(compose(eff, twisted).scalar_value() - 1.0) < 1e2 * tol.absolute)
      worst = std::max(worst, residual(twisted, psi));
    Morphism probe = causal_pure_state(th, rng, a);
    if (std::abs(compose(sharp_effect(probe, th, tol), psi).scalar_value() - 1.0) <
        1e2 * tol.absolute)
      worst = std::max(worst, residual(sharp_effect(probe, th, tol), eff));
    unique.tally(worst, 1e2 * tol.absolute, nlohmann::json{{"psi", morphism_to_json(psi)}});
  }
  report.add(std::move(composite));
  report.add(std::move(cocausal));
  report.add(std::move(pure));
  report.add(std::move(unique));
}

void check_normalisation_unique(Report& report, const CpmTheory& th, Rng rng, int cases,
                                int max_dim, Tolerance tol) {
  CheckResult unique{"normalisation-unique",
                     "rho = sigma ∘ r recovers its unique causal normalisation"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    NormalizeResult base = normalize(th.sample_cp_state(rng, a), th, tol);
    if (base.zero) continue;
    const double r = 0.25 + 2.0 * rng.uniform();
    Morphism rho = scale_morphism(*base.causal, r);
    NormalizeResult n = normalize(rho, th, tol);
    double worst = std::abs(n.scalar - cval(r, 0.0));
    worst = std::max(worst, residual(*n.causal, *base.causal));
    unique.tally(worst, 1e2 * (tol.absolute + tol.relative * r),
                 nlohmann::json{{"rho", morphism_to_json(rho)}});
  }
  report.add(std::move(unique));
}

void check_pure_composition(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol) {
  CheckResult state_pure{"pure-composition-state", "(id x sharp(phi)) ∘ psi is pure"};
  CheckResult effect_pure{"pure-composition-effect", "sharp(psi) ∘ (id x phi) is pure"};
  CheckResult exchange{"pure-composition-exchange",
                       "sharp((id x sharp(phi)) ∘ psi) = sharp(psi) ∘ (id x phi)"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism psi = causal_pure_state(th, rng, a.tensor(b));
    Morphism phi = causal_pure_state(th, rng, b);
    if (c % 7 == 0 && b.dim() >= 2) {
      // Orthogonal leg: the partial composite collapses to zero.
      DenseTensor u = DenseTensor::matrix(th.kind(), a.dim() * b.dim(), 1);
      for (std::size_t i = 0; i < static_cast<std::size_t>(a.dim()); ++i)
        u.data[i * b.dim()] = 1.0 / std::sqrt(static_cast<double>(a.dim()));
      psi = cpm_lift(Morphism(SystemObject::unit(), a.tensor(b), Layer::single, u));
      DenseTensor v = DenseTensor::matrix(th.kind(), b.dim(), 1);
      v.data[1] = 1.0;
      phi = cpm_lift(Morphism(SystemObject::unit(), b, Layer::single, v));
    }

    Morphism id_a = th.id(a);
    Morphism state = compose(tensor_product(id_a, extended_sharp(phi, th, tol)), psi);
    Morphism effect = compose(extended_sharp(psi, th, tol), tensor_product(id_a, phi));

    ++state_pure.cases;
    if (!is_pure(state, th, tol).pure)
      state_pure.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)}});
    ++effect_pure.cases;
    if (choi_rank(effect, tol) > 1)
      effect_pure.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)}});

    exchange.tally(residual(extended_sharp(state, th, tol), effect),
                   1e2 * (tol.absolute + tol.relative * frobenius_norm(effect.data())),
                   nlohmann::json{{"psi", morphism_to_json(psi)}, {"phi", morphism_to_json(phi)}});
  }
  report.add(std::move(state_pure));
  report.add(std::move(effect_pure));
  report.add(std::move(exchange));
}

Morphism pre_dual(const SystemObject& a, const CpmTheory& th) {
  return standard_dual(th, a).cup;
}

void check_pre_duals(Report& report, const CpmTheory& th, int max_dim, Tolerance tol) {
  CheckResult pure{"pre-dual-pure", "the completely mixed state has a pure purification"};
  CheckResult margins{"pre-dual-margins", "both marginals of the pre-dual are completely mixed"};
  for (int d = 1; d <= max_dim; ++d) {
    SystemObject a = th.simple(d);
    Morphism omega = pre_dual(a, th);
    SystemObject dual_obj = a.dual();

    ++pure.cases;
    if (choi_rank(omega, tol) != 1) pure.fail_with(nlohmann::json{{"dim", d}});

    Morphism left = compose(tensor_product(th.discard(dual_obj), th.id(a)), omega);
    Morphism right = compose(tensor_product(th.id(dual_obj), th.discard(a)), omega);
    double worst = residual(left, th.mixed(a));
    worst = std::max(worst, residual(right, th.mixed(dual_obj)));
    margins.tally(worst, tol.absolute, nlohmann::json{{"dim", d}});
  }
  report.add(std::move(pure));
  report.add(std::move(margins));
}

std::vector<Morphism> pure_state_spanning_set(const SystemObject& a, const CpmTheory& th) {
  const std::size_t d = a.data_dim(Layer::single);
  std::vector<Morphism> out;
  const double half = 1.0 / std::sqrt(2.0);
  auto push = [&](DenseTensor w) {
    out.push_back(cpm_lift(Morphism(SystemObject::unit(), a, Layer::single, std::move(w))));
  };
  for (std::size_t i = 0; i < d; ++i) {
    DenseTensor w = DenseTensor::matrix(th.kind(), d, 1);
    w.data[i] = 1.0;
    push(std::move(w));
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      DenseTensor w = DenseTensor::matrix(th.kind(), d, 1);
      w.data[i] = half;
      w.data[j] = half;
      push(std::move(w));
      if (th.kind() == Kind::complex_) {
        DenseTensor wi = DenseTensor::matrix(th.kind(), d, 1);
        wi.data[i] = half;
        wi.data[j] = cval(0.0, half);
        push(std::move(wi));
      }
    }
  return out;
}

bool check_identity_tomography(const Morphism& v, const CpmTheory& th, Tolerance tol) {
  if (!v.is_endo()) throw TheoryError("check_identity_tomography: endomorphism required");
  for (const Morphism& s : pure_state_spanning_set(v.dom(), th))
    if (!approx_eq(compose(v, s), s, tol)) return false;
  return true;
}

void check_tomography_completeness(Report& report, const CpmTheory& th, int max_dim,
                                   Tolerance tol) {
  CheckResult complete{"tomography-complete",
                       "spanning densities have Gram rank d^2 (C) or d(d+1)/2 (R)"};
  for (int d = 1; d <= max_dim; ++d) {
    SystemObject a = th.simple(d);
    std::vector<Morphism> states = pure_state_spanning_set(a, th);
    std::vector<DenseTensor> densities;
    densities.reserve(states.size());
    for (const Morphism& s : states) densities.push_back(density_of_state(s));
    DenseTensor gram = DenseTensor::matrix(Kind::real, states.size(), states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = 0; j < states.size(); ++j) {
        cval acc(0.0, 0.0);
        for (std::size_t r = 0; r < densities[i].rows(); ++r)
          for (std::size_t c = 0; c < densities[i].cols(); ++c)
            acc += conjugate(th.kind(), densities[i].at(r, c)) * densities[j].at(r, c);
        gram.at(i, j) = acc.real();
      }
    const int expected = th.kind() == Kind::complex_ ? d * d : d * (d + 1) / 2;
    const int rank = eig_psd(gram, tol).rank(Tolerance{1e-7, tol.relative});
    ++complete.cases;
    if (rank != expected)
      complete.fail_with(nlohmann::json{{"dim", d}, {"rank", rank}, {"expected", expected}});
  }
  report.add(std::move(complete));
}

void check_cp_axiom(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                    Tolerance tol) {
  CheckResult axiom{"cp-axiom", "discard ∘ lift(F) = discard ∘ lift(G) iff F^dag F = G^dag G"};
  const MatTheory& base = th.base();
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism f = base.sample_morphism(rng, a, b);

    Morphism g = f;
    switch (c % 3) {
      case 0:  // engineered positive: unitary twist
        g = compose(base.sample_unitary(rng, b), f);
        break;
      case 1:  // engineered negative: rank-dropping projection
        if (b.dim() >= 2) {
          DenseTensor p = DenseTensor::identity(th.kind(), b.dim());
          p.at(static_cast<std::size_t>(b.dim()) - 1, static_cast<std::size_t>(b.dim()) - 1) = 0.0;
          g = compose(Morphism(b, b, Layer::single, p), f);
        }
        break;
      default:  // generic independent pair
        g = base.sample_morphism(rng, a, b);
        break;
    }

    Morphism lhs_f = compose(th.discard(b), cpm_lift(f));
    Morphism lhs_g = compose(th.discard(b), cpm_lift(g));
    Morphism rhs_f = compose(dagger_data(f), f);
    Morphism rhs_g = compose(dagger_data(g), g);
    double bound_l = 1e2 * (tol.absolute + tol.relative * frobenius_norm(lhs_f.data()));
    double bound_r = 1e2 * (tol.absolute + tol.relative * frobenius_norm(rhs_f.data()));
    bool lhs = residual(lhs_f, lhs_g) <= bound_l;
    bool rhs = residual(rhs_f, rhs_g) <= bound_r;
    ++axiom.cases;
    if (lhs != rhs)
      axiom.fail_with(nlohmann::json{{"f", morphism_to_json(f)}, {"g", morphism_to_json(g)}});
    if (c % 3 == 0 && !(lhs && rhs))
      axiom.fail_with(nlohmann::json{{"f", morphism_to_json(f)}, {"g", morphism_to_json(g)}});
  }
  report.add(std::move(axiom));
}

namespace {

// Partial inner product of a base bipartite state against its sd-effect,
// contracted over the second leg: P[a,a'] = sum_b Psi[a,b] E[(a',b)].
DenseTensor partial_inner_product(const Morphism& state, const Morphism& effect, std::size_t da,
                                  std::size_t db) {
  DenseTensor p = DenseTensor::matrix(state.kind(), da, da);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t ap = 0; ap < da; ++ap) {
      cval acc(0.0, 0.0);
      for (std::size_t b = 0; b < db; ++b)
        acc += state.data().data[a * db + b] * effect.data().data[ap * db + b];
      p.at(a, ap) = acc;
    }
  return p;
}

DenseTensor base_marginal(const Morphism& state, std::size_t da, std::size_t db) {
  DenseTensor m = DenseTensor::matrix(state.kind(), da, da);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t ap = 0; ap < da; ++ap) {
      cval acc(0.0, 0.0);
      for (std::size_t b = 0; b < db; ++b)
        acc += state.data().data[a * db + b] *
               conjugate(state.kind(), state.data().data[ap * db + b]);
      m.at(a, ap) = acc;
    }
  return m;
}

}  // namespace

void check_cp_state_dagger(Report& report, const StateDaggerAssignment& sd_base,
                           const CpmTheory& th, Rng rng, int cases, int max_dim, Tolerance tol) {
  CheckResult iff{"cp-state-dagger",
                  "equal marginals iff equal sd-partial inner products, over the pure base"};
  CheckResult swap_law{"sd-swap-symmetry", "sd(swap ∘ psi) = sd(psi) ∘ swap"};
  const MatTheory& base = th.base();
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    const std::size_t da = static_cast<std::size_t>(a.dim());
    const std::size_t db = static_cast<std::size_t>(b.dim());
    Morphism psi = base.sample_state(rng, a.tensor(b));

    Morphism phi = psi;
    if (c % 2 == 0) {
      Morphism u = base.sample_unitary(rng, b);
      phi = compose(tensor_product(base.id(a), u), psi);
    } else {
      phi = base.sample_state(rng, a.tensor(b));
    }

    DenseTensor marg_psi = base_marginal(psi, da, db);
    DenseTensor marg_phi = base_marginal(phi, da, db);
    DenseTensor pip_psi = partial_inner_product(psi, sd_base.apply(psi), da, db);
    DenseTensor pip_phi = partial_inner_product(phi, sd_base.apply(phi), da, db);

    double bound = 1e2 * (tol.absolute + tol.relative * frobenius_norm(marg_psi));
    bool marg_eq = residual(marg_psi, marg_phi) <= bound;
    bool pip_eq = residual(pip_psi, pip_phi) <= bound;
    ++iff.cases;
    iff.record(marg_eq ? residual(pip_psi, pip_phi) : 0.0);
    if (marg_eq != pip_eq)
      iff.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)},
                                   {"phi", morphism_to_json(phi)},
                                   {"marginals_equal", marg_eq},
                                   {"partial_inner_products_equal", pip_eq}});

    Morphism sw = base.swap(a, b);
    Morphism lhs = sd_base.apply(compose(sw, psi));
    Morphism rhs = compose(sd_base.apply(psi), base.swap(b, a));
    swap_law.tally(residual(lhs, rhs), tol.absolute + tol.relative * frobenius_norm(lhs.data()),
                   nlohmann::json{{"psi", morphism_to_json(psi)}});
  }
  report.add(std::move(iff));
  report.add(std::move(swap_law));
}

ReconstructionResult reconstruct_dagger_compact(const CpmTheory& th, const std::vector<int>& dims,
                                                const ReconstructionConfig& config) {
  ReconstructionResult out;
  Report& rep = out.report;
  rep.suite = "reconstruction";
  rep.instance = th.tag();
  rep.seed = config.seed;
  rep.tol = config.tol;
  const Tolerance tol = config.tol;
  Rng root(mix_seed(config.seed, "reconstruct"));

  int max_dim = 1;
  std::vector<SystemObject> objects;
  for (int d : dims) {
    objects.push_back(th.simple(d));
    max_dim = std::max(max_dim, d);
  }
  if (dims.size() >= 2) objects.push_back(th.simple(dims[0]).tensor(th.simple(dims[1])));

  // Stage 1: the axiom suite.
  check_normalisation_unique(rep, th, root.fork("norm"), config.cases, max_dim, tol);
  check_lemma_normalisation(rep, th, root.fork("lemma"), config.cases, max_dim, tol);
  check_purification(rep, th, root.fork("purify"), config.cases, max_dim, tol);
  check_sharpness(rep, th, root.fork("sharp"), config.cases, max_dim, tol);
  check_pure_composition(rep, th, root.fork("purecomp"), config.cases, max_dim, tol);
  check_pre_duals(rep, th, max_dim, tol);
  check_tomography_completeness(rep, th, max_dim, tol);
  if (!rep.passed()) return out;

  // Stage 2: duals from pre-duals; the snake composite must be the identity,
  // certified through identity tomography and directly.
  const CpmTheory* tp = &th;
  DualFactory recon_duals = caching_duals([tp, tol](const SystemObject& a) {
    Morphism cup = pre_dual(a, *tp);
    Morphism sw = tp->swap(a.dual(), a);
    Morphism cap = extended_sharp(compose(sw, cup), *tp, tol);
    return DualPresentation{a, a.dual(), cup, cap};
  });

  CheckResult snake{"predual-snake", "V = (cap x id) ∘ (id x cup) = id, via identity tomography"};
  for (const SystemObject& a : objects) {
    DualPresentation d = recon_duals(a);
    Morphism id_a = th.id(a);
    Morphism id_ad = th.id(d.dual_object);
    Morphism v = snake_endomorphism(d);
    Morphism v2 = snake_endomorphism_dual(d);
    ++snake.cases;
    if (!check_identity_tomography(v, th, Tolerance{1e2 * tol.absolute, tol.relative}))
      snake.fail_with(nlohmann::json{{"object", a.str()}});
    double dev = std::max(residual(v, id_a), residual(v2, id_ad));
    snake.record(dev);
    out.snake_deviation = std::max(out.snake_deviation, dev);
    if (dev > 1e2 * tol.absolute) snake.fail_with(nlohmann::json{{"object", a.str()}});
  }
  rep.add(std::move(snake));
  if (!rep.passed()) return out;

  // Stage 3: the duals are state-dagger duals and discard-compatible.
  StateDaggerAssignment sd_sharp = sharp_state_dagger(th, tol);
  CheckResult compat{"predual-compat",
                     "cap = sharp(cup'), (discard x id) ∘ cup' = mixed, cap ∘ (mixed x id) = discard"};
  for (const SystemObject& a : objects) {
    DualPresentation d = recon_duals(a);
    double worst = state_dagger_dual_residual(sd_sharp, d);
    Morphism cupp = primed_cup(d);
    Morphism id_ad = th.id(d.dual_object);
    worst = std::max(worst, residual(compose(tensor_product(th.discard(a), id_ad), cupp),
                                     th.mixed(d.dual_object)));
    worst = std::max(worst, residual(compose(d.cap, tensor_product(th.mixed(a), id_ad)),
                                     th.discard(d.dual_object)));
    compat.tally(worst, 1e2 * tol.absolute, nlohmann::json{{"object", a.str()}});
  }
  rep.add(std::move(compat));
  if (!rep.passed()) return out;

  // Stage 4: a state dagger on the pure subcategory via the sharp assignment.
  PureCpmTheory pure(th);
  derive_global_dagger(rep, sd_sharp, recon_duals, pure, root.fork("pure-dagger"), config.cases,
                       max_dim, tol);
  if (!rep.passed()) return out;

  // Stage 5: extend along purification to every morphism.
  DilationStructure ds = purification_dilation(th, tol);
  check_dag_resp_state(rep, sd_sharp, ds, root.fork("resp"), config.cases, max_dim, tol);
  StateDaggerAssignment sd_all = extend_state_dagger(sd_sharp, ds);
  DaggerStructure ambient = derive_global_dagger(rep, sd_all, recon_duals, th,
                                                 root.fork("ambient-dagger"), config.cases,
                                                 max_dim, tol);
  if (!rep.passed()) return out;

  // Stage 6: oracle agreement, a full sweep per dimension pair plus a
  // smaller sweep over the composite object.
  CheckResult oracle{"oracle-agreement", "reconstructed dagger equals the adjoint oracle"};
  Rng orng = root.fork("oracle");
  auto probe = [&](const SystemObject& dom, const SystemObject& cod) {
    Morphism f = th.sample_morphism(orng, dom, cod);
    double r = residual(ambient.apply(f), oracle_adjoint(f));
    out.oracle_residual = std::max(out.oracle_residual, r);
    oracle.tally(r, 1e2 * (tol.absolute + tol.relative * frobenius_norm(f.data())),
                 nlohmann::json{{"f", morphism_to_json(f)}});
  };
  for (int da : dims)
    for (int db : dims)
      for (int c = 0; c < config.oracle_samples; ++c) probe(th.simple(da), th.simple(db));
  const int composite_sweep = std::max(10, config.oracle_samples / 10);
  for (int c = 0; c < composite_sweep; ++c)
    probe(objects[orng.integer(objects.size())], objects[orng.integer(objects.size())]);
  rep.add(std::move(oracle));

  out.dagger = ambient;
  out.ok = rep.passed();
  return out;
}

}  // namespace ptheory
