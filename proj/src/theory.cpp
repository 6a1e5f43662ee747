#include "ptheory/theory.hpp"

#include <map>
#include <nlohmann/json.hpp>

#include "ptheory/doubling.hpp"

namespace ptheory {

Morphism Theory::discard(const SystemObject&) const {
  throw TheoryError(tag() + ": no discarding effects");
}

Morphism Theory::mixed(const SystemObject&) const {
  throw TheoryError(tag() + ": no completely mixed states");
}

Morphism Theory::sample_causal(Rng&, const SystemObject&, const SystemObject&) const {
  throw TheoryError(tag() + ": no causal sampler");
}

namespace {

// Cup data as an (ext A*, ext A) matrix, cap data as (ext A, ext A*). The
// wire-bending composites below reduce to plain products of these
// reshapes, so no Kronecker or permutation factor is ever materialized.
DenseTensor cup_as_matrix(const DualPresentation& d) {
  const Layer l = d.cup.layer();
  return reshaped(d.cup.data(), {d.dual_object.data_dim(l), d.object.data_dim(l)});
}

DenseTensor cap_as_matrix(const DualPresentation& d) {
  const Layer l = d.cap.layer();
  return reshaped(d.cap.data(), {d.object.data_dim(l), d.dual_object.data_dim(l)});
}

}  // namespace

Morphism primed_cup(const DualPresentation& d) {
  // cup'[(a, a*)] = cup[(a*, a)]: a reshape-transpose of the state vector.
  DenseTensor col = reshaped(transpose(cup_as_matrix(d)), {d.cup.data().size(), 1});
  return Morphism(SystemObject::unit(), d.object.tensor(d.dual_object), d.cup.layer(),
                  std::move(col));
}

Morphism primed_cap(const DualPresentation& d) {
  DenseTensor row = reshaped(transpose(cap_as_matrix(d)), {1, d.cap.data().size()});
  return Morphism(d.dual_object.tensor(d.object), SystemObject::unit(), d.cap.layer(),
                  std::move(row));
}

Morphism snake_endomorphism(const DualPresentation& d) {
  // Entries sum_u cap[(x,u)] cup[(u,y)], read as a map in y -> out x.
  DenseTensor v = transpose(matmul(cap_as_matrix(d), cup_as_matrix(d)));
  return Morphism(d.object, d.object, d.cup.layer(), std::move(v));
}

Morphism snake_endomorphism_dual(const DualPresentation& d) {
  DenseTensor v = matmul(cup_as_matrix(d), cap_as_matrix(d));
  return Morphism(d.dual_object, d.dual_object, d.cup.layer(), std::move(v));
}

double snake_residual(const DualPresentation& d) {
  const Kind k = d.cup.kind();
  const Layer l = d.cup.layer();
  double r1 = residual(snake_endomorphism(d).data(),
                       DenseTensor::identity(k, d.object.data_dim(l)));
  double r2 = residual(snake_endomorphism_dual(d).data(),
                       DenseTensor::identity(k, d.dual_object.data_dim(l)));
  return std::max(r1, r2);
}

bool check_snakes(const DualPresentation& d, Tolerance tol) {
  if (d.cup.kind() == Kind::boolean) return snake_residual(d) == 0.0;
  return snake_residual(d) <= tol.absolute + tol.relative;
}

namespace {

DenseTensor delta_column(Kind kind, std::size_t dim) {
  DenseTensor col = DenseTensor::matrix(kind, dim * dim, 1);
  for (std::size_t i = 0; i < dim; ++i) col.data[i * dim + i] = 1.0;
  return col;
}

}  // namespace

DualPresentation standard_dual(const Theory& th, const SystemObject& a) {
  const SystemObject dual_obj = a.dual();
  const std::size_t dim = static_cast<std::size_t>(a.dim());
  const DenseTensor col = delta_column(th.kind(), dim);
  const DenseTensor row = transpose(col);

  SystemObject cup_cod = dual_obj.tensor(a);
  SystemObject cap_dom = a.tensor(dual_obj);
  DualPresentation d{
      a, dual_obj,
      th.layer() == Layer::single
          ? Morphism(SystemObject::unit(), cup_cod, Layer::single, col)
          : Morphism(SystemObject::unit(), cup_cod, Layer::doubled,
                     doubled_from_single(col, SystemObject::unit(), cup_cod)),
      th.layer() == Layer::single
          ? Morphism(cap_dom, SystemObject::unit(), Layer::single, row)
          : Morphism(cap_dom, SystemObject::unit(), Layer::doubled,
                     doubled_from_single(row, cap_dom, SystemObject::unit()))};
  if (!check_snakes(d, Tolerance{}))
    throw TheoryError("standard_dual: snake equations failed for " + a.str());
  return d;
}

DualFactory standard_duals(const Theory& th) {
  const Theory* t = &th;
  return [t](const SystemObject& a) { return standard_dual(*t, a); };
}

DualFactory caching_duals(DualFactory inner) {
  auto cache = std::make_shared<std::map<std::string, DualPresentation>>();
  return [inner, cache](const SystemObject& a) {
    auto it = cache->find(a.str());
    if (it == cache->end()) it = cache->emplace(a.str(), inner(a)).first;
    return it->second;
  };
}

Morphism name_morphism(const Morphism& f, const DualPresentation& d) {
  if (!(d.object == f.dom()))
    throw TheoryError("name_morphism: dual presents " + d.object.str() + ", not " + f.dom().str());
  // chi[(u*, y)] = sum_v cup[(u*, v)] f[y, v].
  DenseTensor chi = matmul(cup_as_matrix(d), transpose(f.data()));
  const std::size_t len = chi.size();
  return Morphism(SystemObject::unit(), d.dual_object.tensor(f.cod()), f.layer(),
                  reshaped(std::move(chi), {len, 1}));
}

Morphism unname_morphism(const Morphism& chi, const DualPresentation& d, const SystemObject& cod) {
  const Layer l = chi.layer();
  // f[y, x] = sum_u* cap[(x, u*)] chi[(u*, y)].
  DenseTensor chi_mat = reshaped(chi.data(), {d.dual_object.data_dim(l), cod.data_dim(l)});
  DenseTensor f = transpose(matmul(cap_as_matrix(d), chi_mat));
  return Morphism(d.object, cod, l, std::move(f));
}

bool is_causal(const Morphism& f, const Theory& th, Tolerance tol) {
  return approx_eq(compose(th.discard(f.cod()), f), th.discard(f.dom()), tol);
}

bool is_cocausal(const Morphism& f, const Theory& th, Tolerance tol) {
  return approx_eq(compose(f, th.mixed(f.dom())), th.mixed(f.cod()), tol);
}

DaggerStructure oracle_dagger() {
  return DaggerStructure{"oracle", [](const Morphism& f) { return dagger_data(f); }};
}

std::vector<SystemObject> objects_up_to(int max_dim) {
  std::vector<SystemObject> out;
  for (int d = 1; d <= max_dim; ++d) out.push_back(SystemObject::simple(d));
  return out;
}

namespace {

nlohmann::json example_json(std::initializer_list<std::pair<const char*, const Morphism*>> items) {
  nlohmann::json out;
  for (const auto& [label, m] : items) out[label] = morphism_to_json(*m);
  return out;
}

SystemObject random_object(Rng& rng, int max_dim) {
  return SystemObject::simple(1 + static_cast<int>(rng.integer(static_cast<std::uint64_t>(max_dim))));
}

}  // namespace

void check_theory_coherence(Report& report, const Theory& th, Rng rng, int cases, int max_dim,
                            Tolerance tol) {
  CheckResult interchange{"interchange", "(g1.f1) x (g2.f2) = (g1 x g2).(f1 x f2)"};
  CheckResult naturality{"swap-naturality", "swap.(f x g) = (g x f).swap"};
  CheckResult involution{"swap-involution", "swap.swap = id"};
  for (int c = 0; c < cases; ++c) {
    SystemObject a1 = random_object(rng, max_dim), b1 = random_object(rng, max_dim),
                 c1 = random_object(rng, max_dim);
    SystemObject a2 = random_object(rng, max_dim), b2 = random_object(rng, max_dim),
                 c2 = random_object(rng, max_dim);
    Morphism f1 = th.sample_morphism(rng, a1, b1), g1 = th.sample_morphism(rng, b1, c1);
    Morphism f2 = th.sample_morphism(rng, a2, b2), g2 = th.sample_morphism(rng, b2, c2);

    Morphism lhs = tensor_product(compose(g1, f1), compose(g2, f2));
    Morphism rhs = compose(tensor_product(g1, g2), tensor_product(f1, f2));
    interchange.tally(residual(lhs, rhs), tol.absolute + tol.relative * frobenius_norm(lhs.data()),
                      example_json({{"f1", &f1}, {"g1", &g1}, {"f2", &f2}, {"g2", &g2}}));

    Morphism nat_lhs = compose(th.swap(b1, b2), tensor_product(f1, f2));
    Morphism nat_rhs = compose(tensor_product(f2, f1), th.swap(a1, a2));
    naturality.tally(residual(nat_lhs, nat_rhs),
                     tol.absolute + tol.relative * frobenius_norm(nat_lhs.data()),
                     example_json({{"f", &f1}, {"g", &f2}}));

    Morphism round = compose(th.swap(b2, b1), th.swap(b1, b2));
    Morphism id_ab = th.id(b1.tensor(b2));
    involution.tally(residual(round, id_ab), tol.absolute, nlohmann::json{{"dims", {b1.dim(), b2.dim()}}});
  }
  report.add(std::move(interchange));
  report.add(std::move(naturality));
  report.add(std::move(involution));

  CheckResult disc{"discard-monoidal", "discard(A x B) = discard(A) x discard(B), discard(I) = 1"};
  CheckResult mix{"mixed-monoidal", "mixed(A x B) = mixed(A) x mixed(B), mixed(I) = 1"};
  if (!th.has_discard()) {
    disc.status = "skip";
    mix.status = "skip";
  } else {
    for (int da = 1; da <= max_dim; ++da)
      for (int db = 1; db <= max_dim; ++db) {
        SystemObject a = th.simple(da), b = th.simple(db);
        Morphism dab = th.discard(a.tensor(b));
        Morphism dsplit = tensor_product(th.discard(a), th.discard(b));
        disc.tally(residual(dab, dsplit), tol.absolute, nlohmann::json{{"dims", {da, db}}});
        Morphism mab = th.mixed(a.tensor(b));
        Morphism msplit = tensor_product(th.mixed(a), th.mixed(b));
        mix.tally(residual(mab, msplit), tol.absolute, nlohmann::json{{"dims", {da, db}}});
      }
    Morphism unit_disc = th.discard(SystemObject::unit());
    disc.tally(residual(unit_disc, th.id_scalar()), tol.absolute, nlohmann::json{{"dims", {0}}});
    Morphism unit_mixed = th.mixed(SystemObject::unit());
    mix.tally(residual(unit_mixed, th.id_scalar()), tol.absolute, nlohmann::json{{"dims", {0}}});
  }
  report.add(std::move(disc));
  report.add(std::move(mix));
}

void check_dagger_functor(Report& report, const DaggerStructure& dg, const Theory& th, Rng rng,
                          int cases, int max_dim, Tolerance tol) {
  CheckResult involution{"dagger-involution", "f^dd = f"};
  CheckResult identities{"dagger-identity", "id^d = id"};
  CheckResult antihomo{"dagger-composition", "(g.f)^d = f^d.g^d"};
  CheckResult tensorhomo{"dagger-tensor", "(f x g)^d = f^d x g^d"};
  CheckResult unitary{"coherence-unitary", "swap^d = swap^-1"};

  for (int c = 0; c < cases; ++c) {
    SystemObject a = random_object(rng, max_dim), b = random_object(rng, max_dim),
                 cc = random_object(rng, max_dim);
    Morphism f = th.sample_morphism(rng, a, b);
    Morphism g = th.sample_morphism(rng, b, cc);

    Morphism fdd = dg.apply(dg.apply(f));
    involution.tally(residual(fdd, f), tol.absolute + tol.relative * frobenius_norm(f.data()),
                     example_json({{"f", &f}, {"f_dd", &fdd}}));

    Morphism idb = th.id(b);
    identities.tally(residual(dg.apply(idb), idb), tol.absolute, nlohmann::json{{"dim", b.dim()}});

    Morphism lhs = dg.apply(compose(g, f));
    Morphism rhs = compose(dg.apply(f), dg.apply(g));
    antihomo.tally(residual(lhs, rhs), tol.absolute + tol.relative * frobenius_norm(lhs.data()),
                   example_json({{"f", &f}, {"g", &g}}));

    // Tensor-law operands keep composite boundaries inside the same
    // dimensional budget as every other sampled object.
    SystemObject ta = random_object(rng, max_dim);
    SystemObject tb = random_object(rng, std::max(1, max_dim / ta.dim()));
    SystemObject tc = random_object(rng, max_dim);
    SystemObject td = random_object(rng, std::max(1, max_dim / tc.dim()));
    Morphism u = th.sample_morphism(rng, ta, tc);
    Morphism v = th.sample_morphism(rng, tb, td);
    Morphism tl = dg.apply(tensor_product(u, v));
    Morphism tr = tensor_product(dg.apply(u), dg.apply(v));
    tensorhomo.tally(residual(tl, tr), tol.absolute + tol.relative * frobenius_norm(tl.data()),
                     example_json({{"f", &u}, {"h", &v}}));

    Morphism sw = th.swap(a, b);
    Morphism sw_inv = th.swap(b, a);
    unitary.tally(residual(dg.apply(sw), sw_inv), tol.absolute,
                  nlohmann::json{{"dims", {a.dim(), b.dim()}}});
  }
  report.add(std::move(involution));
  report.add(std::move(identities));
  report.add(std::move(antihomo));
  report.add(std::move(tensorhomo));
  report.add(std::move(unitary));
}

void check_dagger_compact(Report& report, const DaggerStructure& dg, const DualFactory& duals,
                          const Theory& th, const std::vector<SystemObject>& objects,
                          Tolerance tol) {
  CheckResult snakes{"dual-snakes", "snake equations for every dual"};
  CheckResult dagdual{"dagger-dual", "cap = dagger(cup')"};
  CheckResult mixdag{"mixed-dagger", "dagger(mixed) = discard"};
  CheckResult compat{"dual-discard-compat",
                     "(discard x id).cup' = mixed and cap.(mixed x id) = discard"};
  if (!th.has_discard()) {
    mixdag.status = "skip";
    compat.status = "skip";
  }

  for (const SystemObject& a : objects) {
    DualPresentation d = duals(a);
    snakes.tally(snake_residual(d), tol.absolute, nlohmann::json{{"object", a.str()}});

    Morphism flipped = dg.apply(primed_cup(d));
    dagdual.tally(residual(flipped, d.cap), tol.absolute + tol.relative * frobenius_norm(d.cap.data()),
                  example_json({{"cup", &d.cup}, {"cap", &d.cap}}));

    if (th.has_discard()) {
      Morphism md = dg.apply(th.mixed(a));
      mixdag.tally(residual(md, th.discard(a)), tol.absolute, nlohmann::json{{"object", a.str()}});

      Morphism id_dual = th.id(d.dual_object);
      Morphism cupp = primed_cup(d);
      Morphism marg = compose(tensor_product(th.discard(a), id_dual), cupp);
      double r1 = residual(marg, th.mixed(d.dual_object));
      Morphism capped = compose(d.cap, tensor_product(th.mixed(a), id_dual));
      double r2 = residual(capped, th.discard(d.dual_object));
      compat.tally(std::max(r1, r2), tol.absolute + tol.relative * frobenius_norm(marg.data()),
                   nlohmann::json{{"object", a.str()}});
    }
  }
  report.add(std::move(snakes));
  report.add(std::move(dagdual));
  report.add(std::move(mixdag));
  report.add(std::move(compat));
}

}  // namespace ptheory
