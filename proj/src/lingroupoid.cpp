#include "dirackit/lingroupoid.hpp"

namespace dirackit {

namespace {

// Coordinates of vectors of `sub` relative to the row basis of `sub` itself;
// left inverse of the basis-column matrix.
LinearMap left_inverse_of_basis(const Subspace& sub) {
  LinearMap rows = sub.basis();                       // k x n
  LinearMap gram = rows * rows.transpose();           // k x k, invertible
  return gram.inverse() * rows;                       // k x n
}

LinearMap block_diag(const LinearMap& a, const LinearMap& b) {
  LinearMap m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return m;
}

}  // namespace

ValidationReport validate_groupoid(const LinearGroupoid& g) {
  ValidationReport rep;
  std::size_t n = g.q_dim;
  bool shapes = g.s.rows() == n && g.s.cols() == n && g.t.rows() == n && g.t.cols() == n &&
                g.units.ambient() == n;
  rep.add("shapes", shapes);
  if (!shapes) return rep;
  rep.add("s_idempotent", g.s * g.s == g.s);
  rep.add("t_idempotent", g.t * g.t == g.t);
  rep.add("s_image_units", Subspace::full(n).image(g.s) == g.units);
  rep.add("t_image_units", Subspace::full(n).image(g.t) == g.units);
  bool fixes = true;
  for (std::size_t i = 0; i < g.units.dim() && fixes; ++i) {
    Vec v = g.units.basis_vector(i);
    fixes = (g.s * v == v) && (g.t * v == v);
  }
  rep.add("units_fixed", fixes);
  return rep;
}

Subspace composable_pairs(const LinearGroupoid& g) {
  // Kernel of [s | -t] on q + q.
  LinearMap m = g.s.hcat(g.t * Scalar(-1));
  return Subspace::span_rows(m.kernel());
}

Vec groupoid_multiply(const LinearGroupoid& g, const Vec& xi, const Vec& eta) {
  if (xi.size() != g.q_dim || eta.size() != g.q_dim) throw DimMismatch("element size mismatch");
  if (g.s * xi != g.t * eta) throw NotComposable("s(xi) != t(eta)");
  return eta + (xi - g.s * xi);
}

Vec groupoid_inverse(const LinearGroupoid& g, const Vec& xi) {
  return g.s * xi + g.t * xi - xi;
}

ValidationReport validate_metrized(const MetrizedLinearGroupoid& m) {
  ValidationReport rep = validate_groupoid(m.base);
  std::size_t n = m.base.q_dim;
  if (!rep.all_passed()) return rep;
  rep.add("metric_nondegenerate", m.metric.ambient() == n && m.metric.nondegenerate());
  rep.add("units_lagrangian", orth_complement(m.base.units, m.metric) == m.base.units);

  Subspace ker_s = Subspace::span_rows(m.base.s.kernel());
  Subspace ker_t = Subspace::span_rows(m.base.t.kernel());
  rep.add("ker_s_is_ker_t_perp", ker_s == orth_complement(ker_t, m.metric));

  // <xi1 o eta1, xi2 o eta2> = <xi1,xi2> + <eta1,eta2> on composable pairs.
  LinearMap mult = (LinearMap::identity(n) - m.base.s).hcat(LinearMap::identity(n));
  LinearMap residual = mult.transpose() * m.metric.gram() * mult -
                       block_diag(m.metric.gram(), m.metric.gram());
  LinearMap w = composable_pairs(m.base).basis();
  rep.add("metric_multiplicative", (w * residual * w.transpose()).is_zero());
  return rep;
}

MetrizedLinearGroupoid from_lambda(const LambdaDatum& d) {
  std::size_t mdim = d.g_dim;
  if (d.lambda.ambient() != mdim) throw DimMismatch("lambda ambient mismatch");
  std::size_t n = 2 * mdim;
  LinearMap s(n, n), t(n, n), g(n, n);
  for (std::size_t i = 0; i < mdim; ++i) {
    s.at(i, i) = 1;
    t.at(i, i) = 1;
    g.at(i, mdim + i) = 1;
    g.at(mdim + i, i) = 1;
    for (std::size_t j = 0; j < mdim; ++j) {
      t.at(i, mdim + j) = d.lambda.gram().at(i, j);
      g.at(mdim + i, mdim + j) = d.lambda.gram().at(i, j);
    }
  }
  std::vector<Vec> unit_rows;
  for (std::size_t i = 0; i < mdim; ++i) unit_rows.push_back(unit_vec(n, i));
  return MetrizedLinearGroupoid{{n, Subspace::span(n, unit_rows), s, t}, SymmetricForm(g)};
}

Canonicalization canonicalize(const MetrizedLinearGroupoid& m) {
  ValidationReport rep = validate_metrized(m);
  if (!rep.all_passed()) {
    for (const auto& c : rep.checks)
      if (!c.passed) throw InvalidGroupoid("invalid metrized groupoid: " + c.name);
  }
  std::size_t n = m.base.q_dim;
  std::size_t mdim = m.base.units.dim();
  if (n != 2 * mdim) throw InvalidGroupoid("units not half-dimensional");

  LinearMap u_cols = m.base.units.basis().transpose();       // n x m
  LinearMap coords = left_inverse_of_basis(m.base.units);    // m x n
  LinearMap t_coords = coords * m.base.t;                    // m x n
  LinearMap ginv = m.metric.gram().inverse();
  LinearMap t_star = ginv * t_coords.transpose();            // n x m, image = ker(s)
  LinearMap lambda_sharp = t_coords * t_star;                // m x m

  LinearMap iso = u_cols.hcat(t_star);  // n x n
  LinearMap iso_inv = iso.inverse();

  LambdaDatum d{mdim, SymmetricForm(lambda_sharp)};
  MetrizedLinearGroupoid normal = from_lambda(d);
  if (iso_inv * m.base.s * iso != normal.base.s || iso_inv * m.base.t * iso != normal.base.t ||
      iso.transpose() * m.metric.gram() * iso != normal.metric.gram())
    throw InvalidGroupoid("canonical identification failed to transport the structure");
  return Canonicalization{d, iso};
}

LambdaDatum to_lambda(const MetrizedLinearGroupoid& m) { return canonicalize(m).lambda; }

LinearGroupoid dual_groupoid(const LinearGroupoid& g) {
  std::size_t n = g.q_dim;
  LinearMap id = LinearMap::identity(n);
  return LinearGroupoid{n, annihilator(g.units), (id - g.t).transpose(),
                        (id - g.s).transpose()};
}

LinearMap u_star(const MetrizedModule& m) {
  return m.metric.gram().inverse() * m.u.transpose();
}

bool module_law_holds(const MetrizedModule& m, const LambdaDatum& d) {
  return m.u * u_star(m) == d.lambda.gram();
}

Vec module_action(const MetrizedModule& m, const Vec& q_elt, const Vec& x) {
  std::size_t gdim = m.u.rows();
  if (q_elt.size() != 2 * gdim) throw DimMismatch("groupoid element size mismatch");
  if (x.size() != m.p_dim) throw DimMismatch("module element size mismatch");
  Vec zeta(q_elt.begin(), q_elt.begin() + gdim);
  Vec alpha(q_elt.begin() + gdim, q_elt.end());
  if (m.u * x != zeta) throw NotComposable("s(q element) != u(x)");
  return x + u_star(m) * alpha;
}

Vec general_module_action(const LinearMap& j, const LinearMap& u, const LinearGroupoid& gpd,
                          const Vec& xi, const Vec& x) {
  std::size_t n = gpd.q_dim;
  if (u.rows() != n || j.cols() != n || j.rows() != u.cols())
    throw DimMismatch("module map shapes");
  // u o j = t on ker(s).
  LinearMap ker_s = gpd.s.kernel();
  if (!((u * j - gpd.t) * ker_s.transpose()).is_zero())
    throw IncompatibleJ("u o j != t on ker(s)");
  if (gpd.s * xi != u * x) throw NotComposable("s(xi) != u(x)");
  return x + j * (xi - gpd.s * xi);
}

Vec quotient_group_action(const MetrizedModule& m, const Subspace& l, const Vec& alpha,
                          const Vec& xbar) {
  QuotientSpace quot = make_quotient(Subspace::full(m.p_dim), l);
  if (xbar.size() != quot.dim()) throw DimMismatch("quotient element size");
  if (alpha.size() != m.u.rows()) throw DimMismatch("covector size");
  Vec lift = quot.lift(xbar);
  return quot.project(lift + u_star(m) * alpha);
}

HomspaceConstruction homspace_from_coisotropic(const LambdaDatum& d, const Subspace& l) {
  std::size_t mdim = d.g_dim;
  if (l.ambient() != mdim) throw DimMismatch("l must live in g");
  if (!l.contains(annihilator(l).image(d.lambda.gram())))
    throw NotLambdaCoisotropic("lambda#(ann l) not contained in l");

  MetrizedLinearGroupoid q = from_lambda(d);
  std::size_t n = 2 * mdim;

  std::vector<Vec> c_rows;
  for (std::size_t i = 0; i < l.dim(); ++i) c_rows.push_back(concat(l.basis_vector(i), zero_vec(mdim)));
  for (std::size_t i = 0; i < mdim; ++i) c_rows.push_back(unit_vec(n, mdim + i));
  Subspace c = Subspace::span(n, c_rows);

  auto [quot, form_p] = coisotropic_reduce(c, q.metric);
  if (quot.dim() != 2 * l.dim())
    throw InvalidGroupoid("homogeneous fiber has unexpected dimension");

  // u = target map descended to the quotient (g coordinates).
  LinearMap t_coords(mdim, n);
  for (std::size_t i = 0; i < mdim; ++i) {
    t_coords.at(i, i) = 1;
    for (std::size_t j = 0; j < mdim; ++j) t_coords.at(i, mdim + j) = d.lambda.gram().at(i, j);
  }
  LinearMap u = t_coords * quot.section;

  std::vector<Vec> l_rows;
  for (std::size_t i = 0; i < l.dim(); ++i)
    l_rows.push_back(quot.project(concat(l.basis_vector(i), zero_vec(mdim))));
  Subspace l_p = Subspace::span(quot.dim(), l_rows);

  MetrizedModule mod{quot.dim(), form_p, u};
  HomspaceConstruction out{LinearHomSpace{mod, l_p}, quot, c, orth_complement(c, q.metric)};

  // Structural guarantees of the normal form, verified exactly.
  if (!module_law_holds(mod, d)) throw InvalidGroupoid("u u* != lambda# on the fiber");
  if (orth_complement(l_p, form_p) != l_p) throw InvalidGroupoid("l not Lagrangian in the fiber");
  if (homspace_to_coisotropic(out.hs) != l) throw InvalidGroupoid("u(l) differs from l");
  for (std::size_t i = 0; i < l.dim(); ++i)
    if (u * quot.project(concat(l.basis_vector(i), zero_vec(mdim))) != l.basis_vector(i))
      throw InvalidGroupoid("u is not the identity on l");
  return out;
}

Subspace homspace_to_coisotropic(const LinearHomSpace& hs) {
  return hs.l.image(hs.module.u);
}

RecoveryMap recovery_map(const LinearHomSpace& hs, const LambdaDatum& d) {
  std::size_t mdim = d.g_dim;
  std::size_t n = 2 * mdim;
  Subspace ul = homspace_to_coisotropic(hs);

  std::vector<Vec> c_rows;
  for (std::size_t i = 0; i < ul.dim(); ++i)
    c_rows.push_back(concat(ul.basis_vector(i), zero_vec(mdim)));
  for (std::size_t i = 0; i < mdim; ++i) c_rows.push_back(unit_vec(n, mdim + i));
  Subspace c = Subspace::span(n, c_rows);

  // Inverse of u restricted to l: columns of l mapped through u.
  LinearMap l_cols = hs.l.basis().transpose();          // p x k
  LinearMap ul_of_l = hs.module.u * l_cols;             // m x k, full column rank
  LinearMap ustar = u_star(hs.module);

  LinearMap f(hs.module.p_dim, c.dim());
  for (std::size_t idx = 0; idx < c.dim(); ++idx) {
    Vec w = c.basis_vector(idx);
    Vec zeta(w.begin(), w.begin() + mdim);
    Vec alpha(w.begin() + mdim, w.end());
    auto coeff = ul_of_l.solve(zeta);
    if (!coeff) throw NotLambdaCoisotropic("zeta not in u(l)");
    Vec x = l_cols * *coeff;
    Vec image = x + ustar * alpha;
    for (std::size_t r = 0; r < hs.module.p_dim; ++r) f.at(r, idx) = image[r];
  }
  return RecoveryMap{c, f};
}

ValidationReport validate_homspace(const LinearHomSpace& hs, const LambdaDatum& d) {
  ValidationReport rep;
  rep.add("metric_nondegenerate", hs.module.metric.nondegenerate());
  rep.add("module_law", module_law_holds(hs.module, d));
  rep.add("l_lagrangian", orth_complement(hs.l, hs.module.metric) == hs.l);
  rep.add("u_injective_on_l", hs.l.image(hs.module.u).dim() == hs.l.dim());
  Subspace ul = homspace_to_coisotropic(hs);
  rep.add("ul_lambda_coisotropic", ul.contains(annihilator(ul).image(d.lambda.gram())));
  return rep;
}

}  // namespace dirackit
