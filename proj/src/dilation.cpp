#include "ptheory/dilation.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "ptheory/eig.hpp"

namespace ptheory {

namespace {

// Splits sigma's codomain as rho's codomain plus a trailing ancilla.
SystemObject ancilla_of(const Morphism& sigma, const Morphism& rho) {
  const auto& big = sigma.cod().factors();
  const auto& small = rho.cod().factors();
  if (big.size() < small.size()) throw TheoryError("is_dilation: codomain too small");
  for (std::size_t i = 0; i < small.size(); ++i)
    if (!(big[i] == small[i])) throw TheoryError("is_dilation: system factors disagree");
  return SystemObject(std::vector<Factor>(big.begin() + small.size(), big.end()));
}

// Greedy unitary completion of an isometry's columns by canonical vectors.
DenseTensor complete_isometry(const DenseTensor& p, Kind kind) {
  const std::size_t n = p.rows(), r = p.cols();
  DenseTensor u = DenseTensor::matrix(kind, n, n);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) u.at(i, j) = p.at(i, j);
  std::size_t filled = r;
  std::vector<bool> used(n, false);
  while (filled < n) {
    // Pick the canonical vector with the largest residual after projection.
    double best = -1.0;
    std::size_t best_i = 0;
    std::vector<cval> best_col;
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (used[cand]) continue;
      std::vector<cval> col(n, cval(0.0, 0.0));
      col[cand] = 1.0;
      for (std::size_t j = 0; j < filled; ++j) {
        cval overlap(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) overlap += conjugate(kind, u.at(i, j)) * col[i];
        for (std::size_t i = 0; i < n; ++i) col[i] -= overlap * u.at(i, j);
      }
      double norm = 0.0;
      for (const cval& v : col) norm += std::norm(v);
      if (norm > best) {
        best = norm;
        best_i = cand;
        best_col = std::move(col);
      }
    }
    const double norm = std::sqrt(best);
    if (norm < 1e-9) throw TheoryError("complete_isometry: degenerate completion");
    used[best_i] = true;
    for (std::size_t i = 0; i < n; ++i) u.at(i, filled) = best_col[i] / norm;
    ++filled;
  }
  return u;
}

}  // namespace

Morphism marginalize(const Morphism& sigma, const SystemObject& sys, const SystemObject& env,
                     const Theory& th) {
  if (!(sigma.cod() == sys.tensor(env))) throw TheoryError("marginalize: factor split mismatch");
  Morphism id_sys = th.id(sys);
  return compose(tensor_product(id_sys, th.discard(env)), sigma);
}

bool is_dilation(const Morphism& sigma, const Morphism& rho, const Theory& th, Tolerance tol) {
  SystemObject env = ancilla_of(sigma, rho);
  return approx_eq(marginalize(sigma, rho.cod(), env, th), rho, tol);
}

std::pair<Morphism, SystemObject> purify(const Morphism& rho, const CpmTheory& th, Tolerance tol,
                                         int pad_to) {
  if (!rho.is_state() || rho.layer() != Layer::doubled)
    throw TheoryError("purify: doubled state required");
  const SystemObject& sys = rho.cod();
  DenseTensor density = density_of_state(rho);
  EigResult e = eig_psd(density, tol);  // rejects non-PSD input
  const int rank = e.rank(tol);
  if (rank == 0) {
    SystemObject env = SystemObject::unit();
    return {th.zero(SystemObject::unit(), sys), env};
  }
  const int env_dim = std::max(rank, pad_to);
  SystemObject env = SystemObject::simple(env_dim);
  const std::size_t d = density.rows();
  DenseTensor w = DenseTensor::matrix(th.kind(), d * static_cast<std::size_t>(env_dim), 1);
  for (int i = 0; i < rank; ++i) {
    const double root = std::sqrt(e.values[static_cast<std::size_t>(i)]);
    for (std::size_t a = 0; a < d; ++a)
      w.data[a * static_cast<std::size_t>(env_dim) + static_cast<std::size_t>(i)] =
          root * e.vectors.at(a, static_cast<std::size_t>(i));
  }
  Morphism single(SystemObject::unit(), sys.tensor(env), Layer::single, std::move(w));
  return {cpm_lift(single), env};
}

Morphism connecting_iso(const Morphism& psi, const Morphism& phi, const SystemObject& sys,
                        const SystemObject& env, const CpmTheory& th, Tolerance tol) {
  if (!(psi.cod() == phi.cod()) || !(psi.cod() == sys.tensor(env)))
    throw TheoryError("connecting_iso: purifications must share one system/ancilla split");
  const std::size_t da = static_cast<std::size_t>(sys.dim());
  const std::size_t de = static_cast<std::size_t>(env.dim());

  DenseTensor wp = pure_state_vector(psi, tol);
  DenseTensor wq = pure_state_vector(phi, tol);

  // Reshape to system x ancilla and compare marginals.
  DenseTensor mp = DenseTensor::matrix(th.kind(), da, de);
  DenseTensor mq = DenseTensor::matrix(th.kind(), da, de);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t e = 0; e < de; ++e) {
      mp.at(a, e) = wp.data[a * de + e];
      mq.at(a, e) = wq.data[a * de + e];
    }
  DenseTensor marg_p = matmul(mp, conj_transpose(mp));
  DenseTensor marg_q = matmul(mq, conj_transpose(mq));
  if (residual(marg_p, marg_q) > 1e3 * (tol.absolute + tol.relative * frobenius_norm(marg_p)))
    throw TheoryError("connecting_iso: marginals disagree");

  EigResult es = eig_psd(marg_p, tol);
  const int rank = es.rank(tol);

  // P = Psi^dag V_r Lambda^{-1/2}; likewise Q. Both are ancilla-side
  // isometries onto the support, so W = P_hat Q_hat^dag carries phi's
  // Stinespring block onto psi's.
  DenseTensor p = DenseTensor::matrix(th.kind(), de, static_cast<std::size_t>(rank));
  DenseTensor q = DenseTensor::matrix(th.kind(), de, static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    const double inv_root = 1.0 / std::sqrt(es.values[static_cast<std::size_t>(i)]);
    for (std::size_t e = 0; e < de; ++e) {
      cval accp(0.0, 0.0), accq(0.0, 0.0);
      for (std::size_t a = 0; a < da; ++a) {
        accp += conjugate(th.kind(), mp.at(a, e)) * es.vectors.at(a, static_cast<std::size_t>(i));
        accq += conjugate(th.kind(), mq.at(a, e)) * es.vectors.at(a, static_cast<std::size_t>(i));
      }
      p.at(e, static_cast<std::size_t>(i)) = accp * inv_root;
      q.at(e, static_cast<std::size_t>(i)) = accq * inv_root;
    }
  }
  DenseTensor p_full = complete_isometry(p, th.kind());
  DenseTensor q_full = complete_isometry(q, th.kind());
  DenseTensor w = matmul(p_full, conj_transpose(q_full));
  Morphism u(env, env, Layer::single, transpose(w));

  Morphism lifted = cpm_lift(u);
  if (!is_causal(lifted, th, tol) || !is_cocausal(lifted, th, tol))
    throw TheoryError("connecting_iso: connecting map is not unitary");
  Morphism transported = compose(tensor_product(th.id(sys), lifted), psi);
  double rel_scale = tol.absolute + tol.relative * frobenius_norm(phi.data());
  if (residual(transported, phi) > 1e3 * rel_scale)
    throw TheoryError("connecting_iso: transport failed");
  return u;
}

DilationStructure purification_dilation(const CpmTheory& th, Tolerance tol) {
  DilationStructure ds;
  ds.ambient = &th;
  ds.pure_member = [tol](const Morphism& m) { return choi_rank(m, tol) <= 1; };
  const CpmTheory* t = &th;
  ds.dilate = [t, tol](const Morphism& rho) { return purify(rho, *t, tol); };
  return ds;
}

StateDaggerAssignment extend_state_dagger(const StateDaggerAssignment& sd_pure,
                                          const DilationStructure& ds) {
  const Theory* ambient = ds.ambient;
  auto dilate = ds.dilate;
  auto member = ds.pure_member;
  auto inner = sd_pure.apply;
  return {"extended(" + sd_pure.name + ")",
          [ambient, dilate, member, inner](const Morphism& rho) {
            auto [psi, env] = dilate(rho);
            if (member && !member(psi))
              throw TheoryError("extend_state_dagger: dilation oracle left the subcategory");
            Morphism eff = inner(psi);
            // sd(psi) ∘ (id (x) mixed(env)), contracted directly so large
            // ancillas never materialize a Kronecker factor.
            const Layer layer = rho.layer();
            const std::size_t sys_ext = rho.cod().data_dim(layer);
            const std::size_t env_ext = env.data_dim(layer);
            DenseTensor row = eff.data();
            row.shape = {sys_ext * env_ext};
            DenseTensor contracted = partial_contract(row, {sys_ext, env_ext}, {true, false},
                                                      ambient->mixed(env).data());
            contracted.shape = {1, sys_ext};
            return Morphism(rho.cod(), SystemObject::unit(), layer, std::move(contracted));
          }};
}

void check_dag_resp_state(Report& report, const StateDaggerAssignment& sd_pure,
                          const DilationStructure& ds, Rng rng, int cases, int max_dim,
                          Tolerance tol) {
  const Theory& th = *ds.ambient;
  CheckResult res{"dag-resp-state",
                  "equal-marginal pure dilations yield equal extended effects"};
  for (int c = 0; c < cases; ++c) {
    SystemObject sys = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    SystemObject env = th.simple(1 + static_cast<int>(rng.integer(max_dim)));
    Morphism id_sys = th.id(sys);
    Morphism half = tensor_product(id_sys, th.mixed(env));

    if (th.layer() == Layer::doubled) {
      const auto& cpm = dynamic_cast<const CpmTheory&>(th);
      Morphism psi = cpm.sample_pure_state(rng, sys.tensor(env));
      Morphism u = cpm.base().sample_unitary(rng, env);
      Morphism phi = compose(tensor_product(id_sys, cpm_lift(u)), psi);
      Morphism lhs = compose(sd_pure.apply(psi), half);
      Morphism rhs = compose(sd_pure.apply(phi), half);
      res.tally(residual(lhs, rhs), tol.absolute + tol.relative * frobenius_norm(lhs.data()),
                nlohmann::json{{"psi", morphism_to_json(psi)}, {"phi", morphism_to_json(phi)}});
    } else {
      // Boolean instances: singleton states with two point dilations.
      DenseTensor point(th.kind(), {static_cast<std::size_t>(sys.dim()), 1});
      point.data[rng.integer(sys.dim())] = 1.0;
      Morphism rho(SystemObject::unit(), sys, th.layer(), std::move(point));
      DenseTensor e1(th.kind(), {static_cast<std::size_t>(env.dim()), 1});
      DenseTensor e2 = e1;
      e1.data[rng.integer(env.dim())] = 1.0;
      e2.data[rng.integer(env.dim())] = 1.0;
      Morphism psi = tensor_product(rho, Morphism(SystemObject::unit(), env, th.layer(), e1));
      Morphism phi = tensor_product(rho, Morphism(SystemObject::unit(), env, th.layer(), e2));
      Morphism lhs = compose(sd_pure.apply(psi), half);
      Morphism rhs = compose(sd_pure.apply(phi), half);
      res.tally(residual(lhs, rhs), tol.absolute,
                nlohmann::json{{"psi", morphism_to_json(psi)}, {"phi", morphism_to_json(phi)}});
    }
  }
  report.add(std::move(res));
}

void check_purification(Report& report, const CpmTheory& th, Rng rng, int cases, int max_dim,
                        Tolerance tol) {
  CheckResult marginal{"purify-marginal", "discarding the ancilla of purify(rho) returns rho"};
  CheckResult purity{"purify-pure", "purifications have Kraus rank <= 1"};
  CheckResult minimal{"purify-minimal", "ancilla dimension equals the numerical rank"};
  CheckResult unique{"essential-uniqueness",
                     "purifications of one state are related by a causal co-causal unitary"};

  for (int c = 0; c < cases; ++c) {
    const int dim = 1 + static_cast<int>(rng.integer(max_dim));
    SystemObject sys = th.simple(dim);
    // Alternate between generic, rank-deficient, pure, and zero states.
    Morphism rho = th.zero(SystemObject::unit(), sys);
    int expected_rank = 0;
    switch (c % 4) {
      case 0:
        rho = th.sample_cp_state(rng, sys);
        expected_rank = dim;
        break;
      case 1: {
        const int r = 1 + static_cast<int>(rng.integer(dim));
        DenseTensor w = DenseTensor::matrix(th.kind(), dim, static_cast<std::size_t>(r));
        for (cval& v : w.data) v = rng.gauss_scalar(th.kind());
        rho = state_of_density(th, sys, matmul(w, conj_transpose(w)));
        expected_rank = r;  // almost surely
        break;
      }
      case 2:
        rho = th.sample_pure_state(rng, sys);
        expected_rank = 1;
        break;
      default:
        break;
    }

    auto [psi, env] = purify(rho, th, tol);
    marginal.tally(residual(marginalize(psi, sys, env, th), rho),
                   tol.absolute + tol.relative * frobenius_norm(rho.data()),
                   nlohmann::json{{"rho", morphism_to_json(rho)}});
    ++purity.cases;
    if (choi_rank(psi, tol) > 1)
      purity.fail_with(nlohmann::json{{"rho", morphism_to_json(rho)}});
    ++minimal.cases;
    bool min_ok = true;
    if (c % 4 == 0)
      min_ok = env.dim() == expected_rank;
    else if (c % 4 == 2)
      min_ok = env.dim() == 1;
    else if (c % 4 == 3)
      min_ok = env.is_unit();
    if (!min_ok)
      minimal.fail_with(nlohmann::json{{"rho", morphism_to_json(rho)}, {"env", env.dim()}});

    if (c % 4 == 0 && dim >= 1) {
      auto [padded, penv] = purify(rho, th, tol, dim);
      Morphism u0 = th.base().sample_unitary(rng, penv);
      Morphism twisted = compose(tensor_product(th.id(sys), cpm_lift(u0)), padded);
      Morphism u = connecting_iso(padded, twisted, sys, penv, th, tol);
      Morphism back = compose(tensor_product(th.id(sys), cpm_lift(u)), padded);
      double worst = residual(back, twisted);
      Morphism gram = compose(dagger_data(u), u);
      worst = std::max(worst, residual(gram, th.base().id(penv)));
      unique.tally(worst, tol.absolute + tol.relative * frobenius_norm(twisted.data()),
                   nlohmann::json{{"rho", morphism_to_json(rho)}});
    }
  }
  report.add(std::move(marginal));
  report.add(std::move(purity));
  report.add(std::move(minimal));
  report.add(std::move(unique));
}

}  // namespace ptheory
