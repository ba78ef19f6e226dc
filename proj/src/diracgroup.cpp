#include "dirackit/diracgroup.hpp"

#include <algorithm>
#include <sstream>

namespace dirackit {

namespace {

std::string vec_str(const Vec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os << "]";
  return os.str();
}

// Subspace of d + d* lying over `base`: {(x, a) : x in base}.
Subspace source_preimage(const Subspace& base) {
  std::size_t n = base.ambient();
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < base.dim(); ++i)
    rows.push_back(concat(base.basis_vector(i), zero_vec(n)));
  for (std::size_t i = 0; i < n; ++i) rows.push_back(unit_vec(2 * n, n + i));
  return Subspace::span(2 * n, rows);
}

// Target map of d x d*_beta in d coordinates: (x, a) -> x + beta# a.
LinearMap target_coords(const SymmetricForm& beta) {
  std::size_t n = beta.ambient();
  LinearMap t(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t.at(i, i) = 1;
    for (std::size_t j = 0; j < n; ++j) t.at(i, n + j) = beta.gram().at(i, j);
  }
  return t;
}

bool subspaces_less(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.ambient(); ++j) {
      const Scalar& x = a.basis().at(i, j);
      const Scalar& y = b.basis().at(i, j);
      if (x != y) return x < y;
    }
  return false;
}

}  // namespace

LinearMap split_projection(const Subspace& first, const Subspace& second) {
  std::size_t n = first.ambient();
  if (second.ambient() != n || first.dim() + second.dim() != n ||
      first.intersect(second).dim() != 0)
    throw DimMismatch("split_projection needs a direct-sum decomposition");
  LinearMap cols = first.basis().transpose().hcat(second.basis().transpose());
  LinearMap inv = cols.inverse();
  LinearMap proj(first.dim(), n);
  for (std::size_t i = 0; i < first.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) proj.at(i, j) = inv.at(i, j);
  return proj;
}

MetrizedLinearGroupoid d_beta_groupoid(const DiracManinTriple& t) {
  ValidationReport rep = validate_triple(t);
  if (!rep.all_passed()) {
    for (const auto& c : rep.checks)
      if (!c.passed) throw InvalidTriple("invalid Dirac Manin triple: " + c.name);
  }
  std::size_t n = t.algebra.dim();
  // Assemble the displayed pairing and structure maps directly...
  LinearMap gram(2 * n, 2 * n), s(2 * n, 2 * n), tt(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    gram.at(i, n + i) = 1;
    gram.at(n + i, i) = 1;
    s.at(i, i) = 1;
    tt.at(i, i) = 1;
    for (std::size_t j = 0; j < n; ++j) {
      gram.at(n + i, n + j) = t.beta.gram().at(i, j);
      tt.at(i, n + j) = t.beta.gram().at(i, j);
    }
  }
  std::vector<Vec> unit_rows;
  for (std::size_t i = 0; i < n; ++i) unit_rows.push_back(unit_vec(2 * n, i));
  MetrizedLinearGroupoid direct{{2 * n, Subspace::span(2 * n, unit_rows), s, tt},
                                SymmetricForm(gram)};
  // ...and confirm it is the lambda normal form with g := d, lambda := beta.
  MetrizedLinearGroupoid via_lambda = from_lambda(LambdaDatum{n, t.beta});
  if (direct.base.s != via_lambda.base.s || direct.base.t != via_lambda.base.t ||
      direct.metric.gram() != via_lambda.metric.gram())
    throw InvalidTriple("d x d*_beta disagrees with the lambda normal form");
  return direct;
}

QuadraticTriple build_quadratic_triple(const DiracManinTriple& t) {
  MetrizedLinearGroupoid dbeta = d_beta_groupoid(t);
  std::size_t n = t.algebra.dim();
  std::size_t m = t.g.dim();

  Subspace c = source_preimage(t.g);
  auto [quot, gamma] = coisotropic_reduce(c, dbeta.metric);
  std::size_t q_dim = quot.dim();
  if (q_dim != 2 * m) throw InvalidTriple("q has unexpected dimension");

  LinearMap f = target_coords(t.beta) * quot.section;  // q -> d

  // g sits inside q through the classes of (g_i, 0); f inverts this embedding.
  std::vector<Vec> g_rows;
  for (std::size_t i = 0; i < m; ++i) {
    Vec cls = quot.project(concat(t.g.basis_vector(i), zero_vec(n)));
    if (f * cls != t.g.basis_vector(i)) throw InvalidTriple("f is not the identity on g");
    g_rows.push_back(cls);
  }
  Subspace g_in_q = Subspace::span(q_dim, g_rows);

  Subspace r = t.h.preimage(f);
  if (g_in_q.intersect(r).dim() != 0 || g_in_q.sum(r) != Subspace::full(q_dim))
    throw InvalidTriple("q does not split as g + r");

  if (orth_complement(g_in_q, gamma) != g_in_q)
    throw InvalidTriple("g is not Lagrangian in (q, gamma)");

  LinearMap gamma_sharp = gamma.gram().inverse();
  if (f * gamma_sharp * f.transpose() != t.beta.gram())
    throw InvalidTriple("f does not push gamma forward to beta");

  // Projection q -> g along r, in the basis matched to f|_g = id.
  LinearMap b_cols = LinearMap::from_cols(g_rows, q_dim).hcat(r.basis().transpose());
  LinearMap b_inv = b_cols.inverse();
  LinearMap pr_g_q(m, q_dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < q_dim; ++j) pr_g_q.at(i, j) = b_inv.at(i, j);

  LinearMap pr_g_d = split_projection(t.g, t.h);

  // lambda two ways (the identification lemma), asserted equal.
  LinearMap lambda_via_q = pr_g_q * gamma_sharp * pr_g_q.transpose();
  LinearMap lambda_direct = pr_g_d * t.beta.gram() * pr_g_d.transpose();
  if (lambda_via_q != lambda_direct)
    throw InvalidTriple("pr_g(gamma) and pr_g(beta) disagree");
  LambdaDatum lambda{m, SymmetricForm(lambda_direct)};

  // Groupoid structure on q: t projects onto g along r, s along r-perp.
  Subspace r_perp = orth_complement(r, gamma);
  LinearMap g_cols = LinearMap::from_cols(g_rows, q_dim);
  LinearMap t_endo = g_cols * pr_g_q;
  LinearMap s_coords = split_projection(g_in_q, r_perp);
  // Rebase s to the f-matched basis of g: columns of g_in_q's RREF basis
  // expressed through g_rows.
  LinearMap rebase(m, q_dim);
  {
    LinearMap b2 = g_cols.hcat(r_perp.basis().transpose());
    LinearMap b2_inv = b2.inverse();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < q_dim; ++j) rebase.at(i, j) = b2_inv.at(i, j);
  }
  LinearMap s_endo = g_cols * rebase;

  MetrizedLinearGroupoid q_groupoid{{q_dim, g_in_q, s_endo, t_endo}, gamma};
  ValidationReport qrep = validate_metrized(q_groupoid);
  if (!qrep.all_passed()) {
    for (const auto& chk : qrep.checks)
      if (!chk.passed) throw InvalidTriple("derived groupoid invalid: " + chk.name);
  }

  return QuadraticTriple{q_groupoid, g_in_q, f, r, lambda, pr_g_d, pr_g_q, quot};
}

CoisotropyCheck check_coisotropic(const DiracManinTriple& t, const Subspace& c) {
  CoisotropyCheck out;
  std::size_t n = t.algebra.dim();
  if (c.ambient() != n) throw DimMismatch("candidate subspace has wrong ambient");

  {
    bool ok = true;
    std::string witness;
    for (std::size_t i = 0; i < c.dim() && ok; ++i)
      for (std::size_t j = i + 1; j < c.dim() && ok; ++j) {
        Vec br = t.algebra.bracket(c.basis_vector(i), c.basis_vector(j));
        if (!c.contains(br)) {
          ok = false;
          witness = "bracket of basis vectors (" + std::to_string(i) + "," +
                    std::to_string(j) + ") = " + vec_str(br) + " escapes c";
        }
      }
    out.report.add("c_subalgebra", ok, witness);
  }

  {
    Subspace sharp = beta_sharp_ann(t.beta, c);
    bool ok = c.contains(sharp);
    std::string witness;
    if (!ok)
      for (std::size_t i = 0; i < sharp.dim(); ++i)
        if (!c.contains(sharp.basis_vector(i))) {
          witness = "beta#(ann c) vector " + vec_str(sharp.basis_vector(i)) + " escapes c";
          break;
        }
    out.report.add("c_beta_coisotropic", ok, witness);
  }

  Subspace k = c.intersect(t.h);
  {
    bool ok = true;
    std::string witness;
    for (std::size_t i = 0; i < k.dim() && ok; ++i)
      for (std::size_t j = 0; j < c.dim() && ok; ++j) {
        Vec br = t.algebra.bracket(k.basis_vector(i), c.basis_vector(j));
        if (!c.contains(br)) {
          ok = false;
          witness = "[k_" + std::to_string(i) + ", c_" + std::to_string(j) + "] = " +
                    vec_str(br) + " escapes c";
        }
      }
    out.report.add("k_infinitesimal_invariance", ok, witness);
  }

  for (std::size_t gi = 0; gi < t.k_generators.size(); ++gi) {
    bool ok = c.image(t.k_generators[gi]) == c;
    out.report.add("k_generator_" + std::to_string(gi) + "_preserves_c", ok,
                   ok ? "" : "generator image of c differs from c");
  }

  if (out.report.all_passed()) out.datum = CoisotropicDatum{c, k};
  return out;
}

bool preimage_coisotropy_check(const LinearMap& f, const SymmetricForm& beta1,
                               const SymmetricForm& beta2, const Subspace& w2) {
  if (f.cols() != beta1.ambient() || f.rows() != beta2.ambient() || w2.ambient() != beta2.ambient())
    throw DimMismatch("preimage check shapes");
  if (f * beta1.gram() * f.transpose() != beta2.gram())
    throw FormNotPushedForward("f(beta1) != beta2");
  bool downstairs = beta_coisotropic(beta2, w2);
  bool upstairs = beta_coisotropic(beta1, w2.preimage(f));
  if (downstairs != upstairs)
    throw std::logic_error("preimage coisotropy lemma violated");  // unreachable
  return downstairs;
}

HomFiber hom_fiber(const DiracManinTriple& t, const CoisotropicDatum& cd) {
  if (cd.k.dim() != 0) throw KNotTrivial("c meets h; use the k-reduced construction");
  MetrizedLinearGroupoid dbeta = d_beta_groupoid(t);
  std::size_t n = t.algebra.dim();

  Subspace big_c = source_preimage(cd.c);
  auto [quot, metric] = coisotropic_reduce(big_c, dbeta.metric);
  if (quot.dim() != 2 * cd.c.dim()) throw NotCoisotropic("fiber has unexpected dimension");

  LinearMap moment = target_coords(t.beta) * quot.section;  // p -> d
  if (moment * metric.gram().inverse() * moment.transpose() != t.beta.gram())
    throw InvalidTriple("moment law u~ u~* = beta# fails");

  std::vector<Vec> l_rows;
  for (std::size_t i = 0; i < cd.c.dim(); ++i) {
    Vec cls = quot.project(concat(cd.c.basis_vector(i), zero_vec(n)));
    if (moment * cls != cd.c.basis_vector(i))
      throw InvalidTriple("u~ is not the inclusion on l");
    l_rows.push_back(cls);
  }
  Subspace l = Subspace::span(quot.dim(), l_rows);
  if (orth_complement(l, metric) != l) throw InvalidTriple("l is not Lagrangian in the fiber");

  return HomFiber{quot, metric, l, moment, false};
}

HomFiber hom_fiber_reduced(const DiracManinTriple& t, const CoisotropicDatum& cd) {
  if (!cd.c.contains(cd.k) || !t.h.contains(cd.k))
    throw KNotContained("k must lie in c and in h");

  // Stage one: the K = {e} fiber over c itself (moment in d coordinates).
  CoisotropicDatum untwisted{cd.c, Subspace(t.algebra.dim())};
  HomFiber tilde = hom_fiber(t, untwisted);
  std::size_t n = t.algebra.dim();

  // Embed k in the fiber and reduce by it.
  std::vector<Vec> k_rows;
  for (std::size_t i = 0; i < cd.k.dim(); ++i)
    k_rows.push_back(tilde.reduction.project(concat(cd.k.basis_vector(i), zero_vec(n))));
  Subspace k_p = Subspace::span(tilde.dim(), k_rows);
  if (!orth_complement(k_p, tilde.metric).contains(k_p))
    throw NotIsotropic("embedded k is not isotropic");

  auto [quot2, metric2] = isotropic_reduce(k_p, tilde.metric);
  if (quot2.dim() != 2 * (cd.c.dim() - cd.k.dim()))
    throw InvalidTriple("k-reduced fiber has unexpected dimension");

  // l_K = image of l~ (which lies in k-perp since l~ is Lagrangian and k in l~).
  std::vector<Vec> l_rows;
  for (std::size_t i = 0; i < tilde.l.dim(); ++i)
    l_rows.push_back(quot2.project(tilde.l.basis_vector(i)));
  Subspace l_k = Subspace::span(quot2.dim(), l_rows);
  if (orth_complement(l_k, metric2) != l_k)
    throw InvalidTriple("reduced l is not Lagrangian");

  // u = pr_g o u~ descends: pr_g kills the k-classes.
  LinearMap pr_g_d = split_projection(t.g, t.h);
  for (const Vec& kv : k_rows)
    if (!is_zero(pr_g_d * (tilde.moment * kv)))
      throw InvalidTriple("pr_g o u~ does not descend");
  LinearMap u = pr_g_d * tilde.moment * quot2.section;

  LinearMap lambda_sharp = pr_g_d * t.beta.gram() * pr_g_d.transpose();
  if (u * metric2.gram().inverse() * u.transpose() != lambda_sharp)
    throw InvalidTriple("moment law u u* = lambda# fails after reduction");

  Subspace pr_g_c = cd.c.image(pr_g_d);
  Subspace u_of_l = l_k.image(u);
  if (u_of_l.dim() != l_k.dim() || u_of_l != pr_g_c)
    throw InvalidTriple("u does not embed l as pr_g(c)");

  return HomFiber{quot2, metric2, l_k, u, true};
}

ViaQFiber equivalent_fiber_via_q(const QuadraticTriple& qt, const CoisotropicDatum& cd) {
  Subspace l_g = cd.c.image(qt.pr_g_d);
  // Guaranteed lambda-coisotropic by the preimage lemma; a throw here would
  // indicate a bug upstream.
  HomspaceConstruction built = homspace_from_coisotropic(qt.lambda, l_g);
  return ViaQFiber{built, l_g};
}

LinearMap cross_construction_isometry(const ViaQFiber& via_q, const HomFiber& reduced,
                                      const LambdaDatum& lambda) {
  if (!reduced.k_reduced) throw KNotTrivial("expected the k-reduced fiber");
  if (via_q.construction.hs.module.p_dim != reduced.dim())
    throw DimMismatch("fiber dimensions disagree");

  LinearHomSpace hs{MetrizedModule{reduced.dim(), reduced.metric, reduced.moment}, reduced.l};
  RecoveryMap pm = recovery_map(hs, lambda);
  if (pm.domain != via_q.construction.c)
    throw DimMismatch("classifying subspaces disagree");

  // Express the via-q section columns in the basis of C and push through.
  LinearMap cbasis_cols = pm.domain.basis().transpose();
  std::size_t pdim = reduced.dim();
  LinearMap iso(pdim, pdim);
  for (std::size_t j = 0; j < pdim; ++j) {
    auto coeff = cbasis_cols.solve(via_q.construction.quotient.section.col(j));
    if (!coeff) throw DimMismatch("section column escapes C");
    Vec image = pm.matrix * *coeff;
    for (std::size_t i = 0; i < pdim; ++i) iso.at(i, j) = image[i];
  }

  if (iso.rank() != pdim) throw InvalidTriple("cross-construction map is singular");
  if (iso.transpose() * reduced.metric.gram() * iso != via_q.construction.hs.module.metric.gram())
    throw InvalidTriple("cross-construction map is not an isometry");
  if (via_q.construction.hs.l.image(iso) != reduced.l)
    throw InvalidTriple("cross-construction map does not match the Lagrangians");
  if (reduced.moment * iso != via_q.construction.hs.module.u)
    throw InvalidTriple("cross-construction map does not intertwine the moments");
  return iso;
}

std::vector<CoisotropicDatum> search_coisotropic(const DiracManinTriple& t, const Subspace& k,
                                                 const std::vector<Vec>& candidates,
                                                 std::size_t max_subset_size) {
  std::size_t n = t.algebra.dim();
  if (!t.h.contains(k)) throw CandidateDimMismatch("k must be a subspace of h");
  if (!is_subalgebra(t.algebra, k)) throw CandidateDimMismatch("k must be a subalgebra");
  for (const Vec& v : candidates)
    if (v.size() != n) throw CandidateDimMismatch("candidate vector has wrong dimension");
  if (candidates.size() > 20) throw CandidateDimMismatch("candidate list too large");

  std::vector<Subspace> seen;
  std::vector<CoisotropicDatum> found;
  for (std::size_t mask = 0; mask < (std::size_t(1) << candidates.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_subset_size) continue;
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < k.dim(); ++i) gens.push_back(k.basis_vector(i));
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (mask & (std::size_t(1) << i)) gens.push_back(candidates[i]);
    Subspace c = Subspace::span(n, gens);
    bool dup = false;
    for (const Subspace& s : seen) dup = dup || s == c;
    if (dup) continue;
    seen.push_back(c);
    CoisotropyCheck chk = check_coisotropic(t, c);
    if (chk.datum && chk.datum->k == k) found.push_back(*chk.datum);
  }
  std::sort(found.begin(), found.end(),
            [](const CoisotropicDatum& a, const CoisotropicDatum& b) {
              return subspaces_less(a.c, b.c);
            });
  return found;
}

}  // namespace dirackit
