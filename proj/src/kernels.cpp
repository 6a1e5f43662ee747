#include "ptheory/kernels.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "ptheory/doubling.hpp"
#include "ptheory/eig.hpp"

namespace ptheory {

namespace {

DenseTensor operator_of_effect(const Morphism& effect) {
  const SystemObject& a = effect.dom();
  const std::size_t d = a.data_dim(Layer::single);
  DenseTensor h = DenseTensor::matrix(effect.kind(), d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t b = 0; b < d; ++b) h.at(b, k) = effect.data().data[doubled_index(a, k, b)];
  return h;
}

bool zero_data(const Morphism& m, Tolerance tol) {
  return frobenius_norm(m.data()) <= tol.absolute;
}

KernelPresentation boolean_inclusion(const Morphism& f, bool cokernel_side) {
  // Kernel: domain elements with an all-false column; cokernel: codomain
  // elements with an all-false row.
  const DenseTensor& m = f.data();
  const SystemObject carrier_src = cokernel_side ? f.cod() : f.dom();
  std::vector<std::size_t> members;
  if (cokernel_side) {
    for (std::size_t b = 0; b < m.rows(); ++b) {
      bool hit = false;
      for (std::size_t a = 0; a < m.cols() && !hit; ++a) hit = m.at(b, a).real() != 0.0;
      if (!hit) members.push_back(b);
    }
  } else {
    for (std::size_t a = 0; a < m.cols(); ++a) {
      bool hit = false;
      for (std::size_t b = 0; b < m.rows() && !hit; ++b) hit = m.at(b, a).real() != 0.0;
      if (!hit) members.push_back(a);
    }
  }
  const bool trivial = members.empty();
  SystemObject carrier = SystemObject::simple(trivial ? 1 : static_cast<int>(members.size()));
  DenseTensor inc = DenseTensor::matrix(Kind::boolean, carrier_src.data_dim(Layer::single),
                                        carrier.data_dim(Layer::single));
  for (std::size_t i = 0; i < members.size(); ++i) inc.data[members[i] * inc.cols() + i] = 1.0;
  Morphism towards(carrier, carrier_src, Layer::single, inc);
  if (cokernel_side)
    return {transpose_data(towards), towards, trivial};
  return {towards, transpose_data(towards), trivial};
}

KernelPresentation doubled_inclusion(const SystemObject& a, const DenseTensor& psd,
                                     const Theory& th, Tolerance tol, bool cokernel_side) {
  DenseTensor basis = nullspace_psd(psd, tol);
  const bool trivial = basis.cols() == 0;
  SystemObject carrier = SystemObject::simple(trivial ? 1 : static_cast<int>(basis.cols()));
  if (trivial) {
    Morphism towards = zero_morphism(th.kind(), Layer::doubled, carrier, a);
    Morphism partner = zero_morphism(th.kind(), Layer::doubled, a, carrier);
    if (cokernel_side) return {partner, towards, true};
    return {towards, partner, true};
  }
  Morphism towards = cpm_lift(Morphism(carrier, a, Layer::single, basis));
  Morphism partner = cpm_lift(Morphism(a, carrier, Layer::single, conj_transpose(basis)));
  if (cokernel_side) return {partner, towards, false};
  return {towards, partner, false};
}

}  // namespace

KernelPresentation kernel(const Morphism& f, const Theory& th, Tolerance tol) {
  if (th.kind() == Kind::boolean) return boolean_inclusion(f, false);
  if (th.layer() != Layer::doubled) throw TheoryError("kernel: Rel or CPM instance required");
  DenseTensor heisenberg_unit = operator_of_effect(compose(th.discard(f.cod()), f));
  return doubled_inclusion(f.dom(), heisenberg_unit, th, tol, false);
}

KernelPresentation cokernel(const Morphism& f, const Theory& th, Tolerance tol) {
  if (th.kind() == Kind::boolean) return boolean_inclusion(f, true);
  if (th.layer() != Layer::doubled) throw TheoryError("cokernel: Rel or CPM instance required");
  DenseTensor unit_image = density_of_state(compose(f, th.mixed(f.dom())));
  return doubled_inclusion(f.cod(), unit_image, th, tol, true);
}

void check_kernel_universal(Report& report, const Morphism& f, const KernelPresentation& k,
                            const Theory& th, Rng rng, int cases, Tolerance tol) {
  CheckResult universal{"kernel-universal", "f ∘ g = 0 iff g = ker(f) ∘ h for a unique h"};
  if (th.kind() == Kind::boolean) {
    for (int probe_dim = 1; probe_dim <= 2; ++probe_dim) {
      SystemObject x = th.simple(probe_dim);
      for (const Morphism& g : enumerate_relations(x, f.dom())) {
        const bool annihilated = zero_data(compose(f, g), tol);
        ++universal.cases;
        if (k.trivial_carrier) {
          if (annihilated && !zero_data(g, tol))
            universal.fail_with(nlohmann::json{{"g", morphism_to_json(g)}});
          continue;
        }
        int factorizations = 0;
        for (const Morphism& h : enumerate_relations(x, k.morphism.dom()))
          if (approx_eq(compose(k.morphism, h), g, tol)) ++factorizations;
        const bool unique = factorizations == 1;
        if (annihilated != unique)
          universal.fail_with(nlohmann::json{{"g", morphism_to_json(g)},
                                             {"annihilated", annihilated},
                                             {"factorizations", factorizations}});
      }
    }
  } else {
    SystemObject x = th.simple(2);
    for (int c = 0; c < cases; ++c) {
      if (k.trivial_carrier) {
        Morphism g = th.sample_morphism(rng, x, f.dom());
        ++universal.cases;
        if (zero_data(compose(f, g), tol) && !zero_data(g, tol))
          universal.fail_with(nlohmann::json{{"g", morphism_to_json(g)}});
        continue;
      }
      Morphism h0 = th.sample_morphism(rng, x, k.morphism.dom());
      Morphism g = compose(k.morphism, h0);
      Morphism h = compose(k.partner, g);
      double worst = residual(compose(f, g), th.zero(x, f.cod()));
      worst = std::max(worst, residual(h, h0));
      worst = std::max(worst, residual(compose(k.morphism, h), g));
      universal.tally(worst, 1e2 * (tol.absolute + tol.relative * frobenius_norm(g.data())),
                      nlohmann::json{{"h0", morphism_to_json(h0)}});

      Morphism loose = th.sample_morphism(rng, x, f.dom());
      if (!zero_data(compose(f, loose), Tolerance{1e-6, 0.0})) {
        Morphism back = compose(k.morphism, compose(k.partner, loose));
        ++universal.cases;
        if (residual(back, loose) <= tol.absolute)
          universal.fail_with(nlohmann::json{{"g", morphism_to_json(loose)}});
      }
    }
  }
  report.add(std::move(universal));
}

namespace {

// Morphisms with nontrivial kernels: in Rel random relations already have
// empty columns; CP maps get a rank-dropping projector on the input.
Morphism sample_with_kernel(const Theory& th, Rng& rng, const SystemObject& a,
                            const SystemObject& b) {
  Morphism f = th.sample_morphism(rng, a, b);
  if (th.layer() != Layer::doubled || a.dim() < 2) return f;
  const std::size_t drop = 1 + rng.integer(static_cast<std::uint64_t>(a.dim() - 1));
  DenseTensor p = DenseTensor::identity(th.kind(), a.dim());
  for (std::size_t i = 0; i < drop; ++i)
    p.at(a.dim() - 1 - i, a.dim() - 1 - i) = 0.0;
  return compose(f, cpm_lift(Morphism(a, a, Layer::single, p)));
}

// Single-layer projector onto the orthocomplement of ker(f1) (x) ker(f2),
// lifted (or kept boolean) so its kernel is exactly the tensored inclusion.
Morphism tensor_support_annihilator(const Theory& th, const Morphism& f1, const Morphism& f2,
                                    Tolerance tol) {
  const SystemObject joint = f1.dom().tensor(f2.dom());
  const std::size_t d1 = f1.dom().data_dim(Layer::single);
  const std::size_t d2 = f2.dom().data_dim(Layer::single);
  if (th.kind() == Kind::boolean) {
    DenseTensor diag = DenseTensor::matrix(Kind::boolean, d1 * d2, d1 * d2);
    for (std::size_t a = 0; a < d1; ++a) {
      bool in1 = true;
      for (std::size_t b = 0; b < f1.data().rows() && in1; ++b)
        in1 = f1.data().at(b, a).real() == 0.0;
      for (std::size_t c = 0; c < d2; ++c) {
        bool in2 = true;
        for (std::size_t b = 0; b < f2.data().rows() && in2; ++b)
          in2 = f2.data().at(b, c).real() == 0.0;
        if (!(in1 && in2)) diag.at(a * d2 + c, a * d2 + c) = 1.0;
      }
    }
    return Morphism(joint, joint, Layer::single, std::move(diag));
  }
  const auto& cpm = dynamic_cast<const CpmTheory&>(th);
  DenseTensor n1 = nullspace_psd(operator_of_effect(compose(cpm.discard(f1.cod()), f1)), tol);
  DenseTensor n2 = nullspace_psd(operator_of_effect(compose(cpm.discard(f2.cod()), f2)), tol);
  DenseTensor p = kron(matmul(n1, conj_transpose(n1)), matmul(n2, conj_transpose(n2)));
  DenseTensor rest = DenseTensor::identity(th.kind(), d1 * d2);
  for (std::size_t i = 0; i < rest.size(); ++i) rest.data[i] -= p.data[i];
  return cpm_lift(Morphism(joint, joint, Layer::single, std::move(rest)));
}

}  // namespace

void check_split_kernels(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                         Tolerance tol) {
  CheckResult causal{"kernel-causal", "kernels are causal, their partners co-causal"};
  CheckResult split{"kernel-split", "partner ∘ k = id"};
  CheckResult projector{"kernel-projector", "k ∘ partner is the self-adjoint support idempotent"};
  CheckResult image{"kernel-image", "ker(coker(ker f)) has the same support as ker f"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism f = sample_with_kernel(th, rng, a, b);
    KernelPresentation k = kernel(f, th, tol);
    if (k.trivial_carrier) continue;

    ++causal.cases;
    if (!is_causal(k.morphism, th, tol) || !is_cocausal(k.partner, th, tol))
      causal.fail_with(nlohmann::json{{"f", morphism_to_json(f)}});

    Morphism carrier_id = th.id(k.morphism.dom());
    split.tally(residual(compose(k.partner, k.morphism), carrier_id), 1e2 * tol.absolute,
                nlohmann::json{{"f", morphism_to_json(f)}});

    Morphism proj = compose(k.morphism, k.partner);
    double worst = residual(compose(proj, proj), proj);
    worst = std::max(worst, residual(dagger_data(proj), proj));
    worst = std::max(worst, residual(compose(proj, k.morphism), k.morphism));
    projector.tally(worst, 1e2 * tol.absolute, nlohmann::json{{"f", morphism_to_json(f)}});

    KernelPresentation again = kernel(cokernel(k.morphism, th, tol).morphism, th, tol);
    Morphism proj_again = again.trivial_carrier
                              ? th.zero(a, a)
                              : compose(again.morphism, again.partner);
    image.tally(residual(proj_again, proj), 1e2 * tol.absolute,
                nlohmann::json{{"f", morphism_to_json(f)}});
  }
  report.add(std::move(causal));
  report.add(std::move(split));
  report.add(std::move(projector));
  report.add(std::move(image));
}

Morphism pure_exclusion_witness(const Morphism& psi, const Theory& th, Tolerance tol) {
  const SystemObject& a = psi.cod();
  if (is_trivial(a, th, tol))
    throw TheoryError("pure_exclusion_witness: trivial object has no witness");
  if (zero_data(psi, tol)) throw TheoryError("pure_exclusion_witness: nonzero state required");
  if (th.kind() == Kind::boolean) {
    DenseTensor row = DenseTensor::matrix(Kind::boolean, 1, a.data_dim(Layer::single));
    for (std::size_t i = 0; i < row.size(); ++i)
      row.data[i] = psi.data().data[i].real() != 0.0 ? 0.0 : 1.0;
    return Morphism(a, SystemObject::unit(), Layer::single, row);
  }
  const auto& cpm = dynamic_cast<const CpmTheory&>(th);
  DenseTensor w = pure_state_vector(psi, tol);
  double norm2 = 0.0;
  for (const cval& v : w.data) norm2 += std::norm(v);
  DenseTensor rest = DenseTensor::identity(th.kind(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      rest.at(i, j) -= w.data[i] * conjugate(th.kind(), w.data[j]) / norm2;
  return effect_of_operator(cpm, a, rest);
}

Morphism pure_exclusion_witness_dual(const Morphism& effect, const Theory& th, Tolerance tol) {
  const SystemObject& a = effect.dom();
  if (is_trivial(a, th, tol))
    throw TheoryError("pure_exclusion_witness_dual: trivial object has no witness");
  if (zero_data(effect, tol))
    throw TheoryError("pure_exclusion_witness_dual: nonzero effect required");
  if (th.kind() == Kind::boolean) {
    DenseTensor col = DenseTensor::matrix(Kind::boolean, a.data_dim(Layer::single), 1);
    for (std::size_t i = 0; i < col.size(); ++i)
      col.data[i] = effect.data().data[i].real() != 0.0 ? 0.0 : 1.0;
    return Morphism(SystemObject::unit(), a, Layer::single, col);
  }
  const auto& cpm = dynamic_cast<const CpmTheory&>(th);
  DenseTensor h = operator_of_effect(effect);
  EigResult e = eig_psd(h, tol);
  DenseTensor rest = DenseTensor::identity(th.kind(), h.rows());
  for (std::size_t j = 0; j < e.values.size(); ++j) {
    if (e.values[j] == 0.0) continue;
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t k = 0; k < h.rows(); ++k)
        rest.at(i, k) -= e.vectors.at(i, j) * conjugate(th.kind(), e.vectors.at(k, j));
  }
  return state_of_density(cpm, a, rest);
}

Morphism sharp_from_kernels(const Morphism& psi, const Theory& th, Tolerance tol) {
  KernelPresentation image = kernel(cokernel(psi, th, tol).morphism, th, tol);
  if (image.morphism.dom().dim() != 1)
    throw TheoryError("sharp_from_kernels: causal pure state required");
  // The split partner A -> K over the dim-1 carrier, read as an effect.
  Morphism effect(psi.cod(), SystemObject::unit(), psi.layer(), image.partner.data());
  // psi is its own image kernel up to the causal isomorphism k-partner ∘ psi.
  Morphism iso = compose(image.partner, psi);
  if (residual(compose(image.morphism, iso), psi) >
      1e2 * (tol.absolute + tol.relative * frobenius_norm(psi.data())))
    throw TheoryError("sharp_from_kernels: state is not a kernel");
  return effect;
}

void check_kernel_composition(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                              Tolerance tol) {
  CheckResult tensor_closed{"kernel-tensor", "tensors of kernels are kernels"};
  CheckResult coker_pure{"cokernel-pure", "cokernels send pure states to pure states"};
  CheckResult exchange{"kernel-sharp-exchange",
                       "sharp((id x k) ∘ psi) = sharp(psi) ∘ (id x partner)"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a1 = th.simple(2);
    SystemObject a2 = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism f1 = sample_with_kernel(th, rng, a1, a1);
    Morphism f2 = sample_with_kernel(th, rng, a2, a2);
    KernelPresentation k1 = kernel(f1, th, tol);
    KernelPresentation k2 = kernel(f2, th, tol);
    if (!k1.trivial_carrier && !k2.trivial_carrier) {
      KernelPresentation kk{tensor_product(k1.morphism, k2.morphism),
                            tensor_product(k1.partner, k2.partner), false};
      // Annihilator in the theory whose kernel is exactly the tensored
      // inclusion: the single-layer complement of the joint support.
      Morphism annihilator = tensor_support_annihilator(th, f1, f2, tol);
      KernelPresentation fresh = kernel(annihilator, th, tol);
      double worst = residual(compose(annihilator, kk.morphism),
                              th.zero(kk.morphism.dom(), annihilator.cod()));
      // Same subspace as the recomputed kernel: equal support idempotents.
      worst = std::max(worst, residual(compose(kk.morphism, kk.partner),
                                       compose(fresh.morphism, fresh.partner)));
      Morphism h0 = th.sample_morphism(rng, th.simple(2), kk.morphism.dom());
      Morphism g = compose(kk.morphism, h0);
      worst = std::max(worst, residual(compose(kk.morphism, compose(kk.partner, g)), g));
      tensor_closed.tally(worst, 1e2 * (tol.absolute + tol.relative * frobenius_norm(g.data())),
                          nlohmann::json{{"f1", morphism_to_json(f1)},
                                         {"f2", morphism_to_json(f2)}});
    }

    // Cokernels preserve purity.
    Morphism g = sample_with_kernel(th, rng, a2, a2);
    KernelPresentation co = cokernel(g, th, tol);
    if (!co.trivial_carrier) {
      Morphism pure_state = th.layer() == Layer::doubled
                                ? dynamic_cast<const CpmTheory&>(th).sample_pure_state(rng, a2)
                                : [&] {
                                    DenseTensor point(th.kind(),
                                                      {static_cast<std::size_t>(a2.dim()), 1});
                                    point.data[rng.integer(a2.dim())] = 1.0;
                                    return Morphism(SystemObject::unit(), a2, th.layer(), point);
                                  }();
      Morphism through = compose(co.morphism, pure_state);
      ++coker_pure.cases;
      if (!is_pure(through, th, tol).pure)
        coker_pure.fail_with(nlohmann::json{{"g", morphism_to_json(g)}});
    }

    // Sharp exchange over a kernel leg.
    KernelPresentation k = kernel(sample_with_kernel(th, rng, a2, a2), th, tol);
    if (k.trivial_carrier) continue;
    SystemObject side = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject carrier = k.morphism.dom();
    Morphism psi = th.layer() == Layer::doubled
                       ? dynamic_cast<const CpmTheory&>(th).sample_pure_state(
                             rng, side.tensor(carrier))
                       : [&] {
                           DenseTensor point(
                               th.kind(),
                               {side.tensor(carrier).data_dim(Layer::single), 1});
                           point.data[rng.integer(point.rows())] = 1.0;
                           return Morphism(SystemObject::unit(), side.tensor(carrier), th.layer(),
                                           point);
                         }();
    Morphism id_side = th.id(side);
    Morphism lhs = extended_sharp(compose(tensor_product(id_side, k.morphism), psi), th, tol);
    Morphism rhs = compose(extended_sharp(psi, th, tol), tensor_product(id_side, k.partner));
    exchange.tally(residual(lhs, rhs),
                   1e2 * (tol.absolute + tol.relative * frobenius_norm(rhs.data())),
                   nlohmann::json{{"psi", morphism_to_json(psi)}});
  }
  report.add(std::move(tensor_closed));
  report.add(std::move(coker_pure));
  report.add(std::move(exchange));
}

void check_sharp_kernel_agreement(Report& report, const Theory& th, Rng rng, int cases,
                                  int max_dim, Tolerance tol) {
  CheckResult agree{"sharp-kernel-agreement",
                    "the split partner of the image kernel equals the sharp effect"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism psi = th.zero(SystemObject::unit(), a);
    if (th.layer() == Layer::doubled) {
      DenseTensor w = DenseTensor::matrix(th.kind(), a.data_dim(Layer::single), 1);
      double norm = 0.0;
      for (cval& v : w.data) {
        v = rng.gauss_scalar(th.kind());
        norm += std::norm(v);
      }
      for (cval& v : w.data) v /= std::sqrt(norm);
      psi = cpm_lift(Morphism(SystemObject::unit(), a, Layer::single, std::move(w)));
    } else {
      psi.data().data[rng.integer(a.dim())] = 1.0;
    }
    Morphism from_kernels = sharp_from_kernels(psi, th, tol);
    Morphism direct = sharp_effect(psi, th, tol);
    agree.tally(residual(from_kernels, direct),
                1e2 * (tol.absolute + tol.relative * frobenius_norm(direct.data())),
                nlohmann::json{{"psi", morphism_to_json(psi)}});
  }
  report.add(std::move(agree));
}

void check_pure_exclusion(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                          Tolerance tol) {
  CheckResult states{"pure-exclusion", "pure states of non-trivial objects are annihilated"};
  CheckResult effects{"pure-exclusion-dual", "pure effects of non-trivial objects are annihilated"};
  CheckResult trivial{"pure-exclusion-trivial", "trivial objects are refused"};
  for (int c = 0; c < cases; ++c) {
    const int dim = 2 + static_cast<int>(rng.integer(std::max(1, max_dim - 1)));
    SystemObject a = th.simple(dim);
    Morphism psi = th.zero(SystemObject::unit(), a);
    if (th.layer() == Layer::doubled) {
      psi = dynamic_cast<const CpmTheory&>(th).sample_pure_state(rng, a);
    } else {
      psi.data().data[rng.integer(a.dim())] = 1.0;
    }
    Morphism witness = pure_exclusion_witness(psi, th, tol);
    double worst = std::abs(compose(witness, psi).scalar_value());
    ++states.cases;
    states.record(worst);
    if (worst > 1e2 * tol.absolute || zero_data(witness, tol))
      states.fail_with(nlohmann::json{{"psi", morphism_to_json(psi)}});

    Morphism eff = dagger_data(psi);
    Morphism dual_witness = pure_exclusion_witness_dual(eff, th, tol);
    double worst_d = std::abs(compose(eff, dual_witness).scalar_value());
    ++effects.cases;
    effects.record(worst_d);
    if (worst_d > 1e2 * tol.absolute || zero_data(dual_witness, tol))
      effects.fail_with(nlohmann::json{{"effect", morphism_to_json(eff)}});
  }
  ++trivial.cases;
  try {
    SystemObject unit_obj = th.simple(1);
    Morphism one = th.layer() == Layer::doubled
                       ? dynamic_cast<const CpmTheory&>(th).sample_pure_state(rng, unit_obj)
                       : th.mixed(unit_obj);
    pure_exclusion_witness(one, th, tol);
    trivial.fail_with(nlohmann::json{{"object", unit_obj.str()}});
  } catch (const TheoryError&) {
    // expected: no witness exists
  }
  report.add(std::move(states));
  report.add(std::move(effects));
  report.add(std::move(trivial));
}

void check_zero_propagation(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol) {
  CheckResult zp{"zero-propagation", "discard ∘ f = 0 implies f = 0"};
  if (th.kind() == Kind::boolean) {
    for (int da = 1; da <= max_dim; ++da)
      for (int db = 1; db <= max_dim; ++db) {
        SystemObject a = th.simple(da), b = th.simple(db);
        Morphism zero_eff = th.zero(a, SystemObject::unit());
        for (const Morphism& f : enumerate_relations(a, b)) {
          ++zp.cases;
          const bool discarded_zero = approx_eq(compose(th.discard(b), f), zero_eff, tol);
          if (discarded_zero != zero_data(f, tol))
            zp.fail_with(nlohmann::json{{"f", morphism_to_json(f)}});
        }
      }
  } else {
    // Quantitative form through Choi positivity: ||C||_F <= Tr(C), so a
    // trace-annihilated completely positive map has vanishing norm.
    for (int c = 0; c < cases; ++c) {
      SystemObject a = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
      SystemObject b = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
      Morphism f = th.sample_morphism(rng, a, b);
      if (c % 8 == 0) f = th.zero(a, b);
      if (c % 8 == 1) f = scale_morphism(f, 1e-13);
      DenseTensor choi = choi_matrix(f);
      double trace = 0.0;
      for (std::size_t i = 0; i < choi.rows(); ++i) trace += choi.at(i, i).real();
      const double norm = frobenius_norm(choi);
      zp.tally(std::max(0.0, norm - trace), tol.absolute + tol.relative * std::max(1.0, trace),
               nlohmann::json{{"f", morphism_to_json(f)}});
    }
  }
  report.add(std::move(zp));
}

void check_predual_from_purification(Report& report, const CpmTheory& th, int max_dim,
                                     Tolerance tol) {
  CheckResult unique{"discard-unique",
                     "the trace row is the only effect sending every causal pure state to 1"};
  CheckResult both{"predual-purifies-both", "the pre-dual purifies both completely mixed states"};
  for (int d = 1; d <= max_dim; ++d) {
    SystemObject a = th.simple(d);
    std::vector<Morphism> states = pure_state_spanning_set(a, th);
    const bool complex_kind = th.kind() == Kind::complex_;
    const std::size_t dd = static_cast<std::size_t>(d);
    const std::size_t offdiag = dd * (dd - 1) / 2;
    const std::size_t unknowns = complex_kind ? dd * dd : dd + offdiag;

    DenseTensor sys = DenseTensor::matrix(Kind::real, states.size(), unknowns);
    DenseTensor rhs(Kind::real, {states.size()});
    for (std::size_t s = 0; s < states.size(); ++s) {
      DenseTensor rho = density_of_state(states[s]);
      std::size_t col = 0;
      for (std::size_t i = 0; i < dd; ++i) sys.at(s, col++) = rho.at(i, i).real();
      for (std::size_t i = 0; i < dd; ++i)
        for (std::size_t j = i + 1; j < dd; ++j) {
          sys.at(s, col++) = 2.0 * rho.at(j, i).real();
          if (complex_kind) sys.at(s, col++) = -2.0 * rho.at(j, i).imag();
        }
      rhs.data[s] = 1.0;
    }
    LstsqResult solved = lstsq(sys, rhs);
    double worst = solved.residual;
    for (std::size_t i = 0; i < dd; ++i)
      worst = std::max(worst, std::abs(solved.solution.data[i].real() - 1.0));
    for (std::size_t i = dd; i < unknowns; ++i)
      worst = std::max(worst, std::abs(solved.solution.data[i].real()));
    ++unique.cases;
    unique.record(worst);
    if (solved.rank != static_cast<int>(unknowns) || worst > 1e-6)
      unique.fail_with(nlohmann::json{{"dim", d}, {"rank", solved.rank}});

    Morphism omega = pre_dual(a, th);
    SystemObject dual_obj = a.dual();
    double margins =
        residual(compose(tensor_product(th.discard(dual_obj), th.id(a)), omega), th.mixed(a));
    margins = std::max(margins, residual(compose(tensor_product(th.id(dual_obj), th.discard(a)),
                                                 omega),
                                         th.mixed(dual_obj)));
    both.tally(margins, tol.absolute, nlohmann::json{{"dim", d}});
    ++both.cases;
    if (choi_rank(omega, tol) != 1) both.fail_with(nlohmann::json{{"dim", d}});
  }
  report.add(std::move(unique));
  report.add(std::move(both));
}

}  // namespace ptheory
