#include "dirackit/lie.hpp"

#include <sstream>

namespace dirackit {

namespace {

std::string idx_pair(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

}  // namespace

LieAlgebra::LieAlgebra(std::size_t dim)
    : dim_(dim), bracket_(dim, std::vector<Vec>(dim, zero_vec(dim))) {}

LieAlgebra::LieAlgebra(std::size_t dim, const std::vector<std::vector<Vec>>& bracket)
    : dim_(dim), bracket_(bracket) {
  if (bracket_.size() != dim) throw std::invalid_argument("bracket table has wrong size");
  for (std::size_t i = 0; i < dim; ++i) {
    if (bracket_[i].size() != dim) throw std::invalid_argument("bracket table has wrong size");
    for (std::size_t j = 0; j < dim; ++j) {
      if (bracket_[i][j].size() != dim) throw std::invalid_argument("bracket value has wrong size");
      for (std::size_t k = 0; k < dim; ++k)
        if (bracket_[i][j][k] != -bracket_[j][i][k])
          throw std::invalid_argument("bracket table not antisymmetric at " + idx_pair(i, j));
    }
  }
}

void LieAlgebra::set_basis_bracket(std::size_t i, std::size_t j, const Vec& value) {
  if (i == j && !is_zero(value)) throw std::invalid_argument("[e_i,e_i] must vanish");
  bracket_[i][j] = value;
  bracket_[j][i] = Scalar(-1) * value;
}

LieAlgebra LieAlgebra::nonabelian2() {
  LieAlgebra a(2);
  a.set_basis_bracket(0, 1, {Scalar(0), Scalar(1)});
  return a;
}

LieAlgebra LieAlgebra::sl2() {
  LieAlgebra a(3);  // basis order (e, h, f)
  a.set_basis_bracket(0, 2, {Scalar(0), Scalar(1), Scalar(0)});   // [e,f] = h
  a.set_basis_bracket(1, 0, {Scalar(2), Scalar(0), Scalar(0)});   // [h,e] = 2e
  a.set_basis_bracket(1, 2, {Scalar(0), Scalar(0), Scalar(-2)});  // [h,f] = -2f
  return a;
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimMismatch("bracket operand size");
  Vec r = zero_vec(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j] == 0) continue;
      Scalar c = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k) r[k] += c * bracket_[i][j][k];
    }
  }
  return r;
}

LinearMap LieAlgebra::ad(const Vec& x) const {
  LinearMap m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    Vec col = bracket(x, unit_vec(dim_, j));
    for (std::size_t k = 0; k < dim_; ++k) m.at(k, j) = col[k];
  }
  return m;
}

LinearMap LieAlgebra::ad_basis(std::size_t i) const { return ad(unit_vec(dim_, i)); }

std::optional<std::array<std::size_t, 3>> jacobi_witness(const LieAlgebra& a) {
  std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec ei = unit_vec(n, i), ej = unit_vec(n, j), ek = unit_vec(n, k);
        Vec sum = a.bracket(a.bracket(ei, ej), ek) + a.bracket(a.bracket(ej, ek), ei) +
                  a.bracket(a.bracket(ek, ei), ej);
        if (!is_zero(sum)) return std::array<std::size_t, 3>{i, j, k};
      }
  return std::nullopt;
}

bool jacobi_check(const LieAlgebra& a) { return !jacobi_witness(a).has_value(); }

bool is_subalgebra(const LieAlgebra& a, const Subspace& s) {
  if (s.ambient() != a.dim()) throw DimMismatch("subspace/algebra dimension mismatch");
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i + 1; j < s.dim(); ++j)
      if (!s.contains(a.bracket(s.basis_vector(i), s.basis_vector(j)))) return false;
  return true;
}

bool is_ideal(const LieAlgebra& a, const Subspace& s) {
  if (s.ambient() != a.dim()) throw DimMismatch("subspace/algebra dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      if (!s.contains(a.bracket(unit_vec(a.dim(), i), s.basis_vector(j)))) return false;
  return true;
}

bool ad_invariant_form(const LieAlgebra& a, const SymmetricForm& form) {
  if (form.ambient() != a.dim()) throw DimMismatch("form/algebra dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    LinearMap adx = a.ad_basis(i);
    if (!(adx.transpose() * form.gram() + form.gram() * adx).is_zero()) return false;
  }
  return true;
}

bool ad_invariant_bivector(const LieAlgebra& a, const SymmetricForm& beta) {
  if (beta.ambient() != a.dim()) throw DimMismatch("bivector/algebra dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    LinearMap adx = a.ad_basis(i);
    if (!(adx * beta.gram() + beta.gram() * adx.transpose()).is_zero()) return false;
  }
  return true;
}

Subspace beta_sharp_ann(const SymmetricForm& beta, const Subspace& w) {
  return annihilator(w).image(beta.gram());
}

bool beta_coisotropic(const SymmetricForm& beta, const Subspace& w) {
  return w.contains(beta_sharp_ann(beta, w));
}

SubspaceClass beta_classify(const SymmetricForm& beta, const Subspace& w) {
  Subspace sharp = beta_sharp_ann(beta, w);
  bool coiso = w.contains(sharp);
  bool iso = sharp.contains(w);
  if (coiso && iso) return SubspaceClass::lagrangian;
  if (coiso) return SubspaceClass::coisotropic;
  if (iso) return SubspaceClass::isotropic;
  return SubspaceClass::none;
}

ValidationReport validate_triple(const DiracManinTriple& t) {
  ValidationReport rep;
  const std::size_t n = t.algebra.dim();

  {
    auto w = jacobi_witness(t.algebra);
    rep.add("jacobi", !w.has_value(),
            w ? "basis triple (" + std::to_string((*w)[0]) + "," + std::to_string((*w)[1]) + "," +
                    std::to_string((*w)[2]) + ")"
              : "");
  }

  auto subalg_check = [&](const char* name, const Subspace& s) {
    std::string witness;
    bool ok = true;
    for (std::size_t i = 0; i < s.dim() && ok; ++i)
      for (std::size_t j = i + 1; j < s.dim() && ok; ++j)
        if (!s.contains(t.algebra.bracket(s.basis_vector(i), s.basis_vector(j)))) {
          ok = false;
          witness = "bracket of basis vectors " + idx_pair(i, j) + " leaves the subspace";
        }
    rep.add(name, ok, witness);
  };
  subalg_check("g_subalgebra", t.g);
  subalg_check("h_subalgebra", t.h);

  bool transverse = t.g.intersect(t.h).dim() == 0 && t.g.sum(t.h) == Subspace::full(n);
  rep.add("transversality", transverse,
          transverse ? "" : "g and h do not decompose d as a direct sum");

  rep.add("beta_symmetric", t.beta.gram().is_symmetric() && t.beta.ambient() == n);
  rep.add("beta_ad_invariant", ad_invariant_bivector(t.algebra, t.beta));

  {
    Subspace sharp = beta_sharp_ann(t.beta, t.g);
    bool ok = t.g.contains(sharp);
    std::string witness;
    if (!ok)
      for (std::size_t i = 0; i < sharp.dim(); ++i)
        if (!t.g.contains(sharp.basis_vector(i))) {
          std::ostringstream os;
          os << "beta#(ann g) vector [";
          for (std::size_t k = 0; k < n; ++k) os << (k ? " " : "") << sharp.basis_vector(i)[k];
          os << "] escapes g";
          witness = os.str();
          break;
        }
    rep.add("g_beta_coisotropic", ok, witness);
  }

  for (std::size_t gi = 0; gi < t.k_generators.size(); ++gi) {
    const LinearMap& A = t.k_generators[gi];
    std::string tag = "k_generator_" + std::to_string(gi);
    bool shape = A.rows() == n && A.cols() == n && A.rank() == n;
    bool morphism = shape;
    for (std::size_t i = 0; i < n && morphism; ++i)
      for (std::size_t j = i + 1; j < n && morphism; ++j)
        morphism = (A * t.algebra.basis_bracket(i, j) ==
                    t.algebra.bracket(A.col(i), A.col(j)));
    bool keeps_beta = shape && (A * t.beta.gram() * A.transpose() == t.beta.gram());
    bool keeps_h = shape && t.h.image(A) == t.h;
    bool ok = shape && morphism && keeps_beta && keeps_h;
    std::string witness;
    if (!ok) {
      if (!shape) witness = "not an invertible endomorphism of d";
      else if (!morphism) witness = "not a Lie algebra automorphism";
      else if (!keeps_beta) witness = "does not preserve beta";
      else witness = "does not preserve h";
    }
    rep.add(tag, ok, witness);
  }

  return rep;
}

SymmetricForm killing_form(const LieAlgebra& a) {
  std::size_t n = a.dim();
  std::vector<LinearMap> ads;
  ads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ads.push_back(a.ad_basis(i));
  LinearMap g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      LinearMap prod = ads[i] * ads[j];
      Scalar tr = 0;
      for (std::size_t k = 0; k < n; ++k) tr += prod.at(k, k);
      g.at(i, j) = g.at(j, i) = tr;
    }
  return SymmetricForm(g);
}

QuadraticLieData semidirect_double(const LieAlgebra& h) {
  std::size_t m = h.dim();
  std::size_t n = 2 * m;
  LieAlgebra d(n);
  // [x_i, x_j] = bracket in h; [x_i, a^j] = -sum_k c^j_{ik} a^k; [a,a'] = 0.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      Vec v = zero_vec(n);
      const Vec& hb = h.basis_bracket(i, j);
      for (std::size_t k = 0; k < m; ++k) v[k] = hb[k];
      d.set_basis_bracket(i, j, v);
    }
    LinearMap coad = dual_map(h.ad_basis(i)) * Scalar(-1);
    for (std::size_t j = 0; j < m; ++j) {
      Vec v = zero_vec(n);
      for (std::size_t k = 0; k < m; ++k) v[m + k] = coad.at(k, j);
      d.set_basis_bracket(i, m + j, v);
    }
  }
  if (auto w = jacobi_witness(d))
    throw JacobiFailure("semidirect double violates Jacobi");  // cannot happen for valid h
  return QuadraticLieData{d, SymmetricForm::standard_pairing(m)};
}

DiracManinTriple standard_triple(const LieAlgebra& h) {
  QuadraticLieData quad = semidirect_double(h);
  std::size_t m = h.dim();
  std::vector<Vec> g_rows, h_rows;
  for (std::size_t i = 0; i < m; ++i) {
    g_rows.push_back(unit_vec(2 * m, m + i));
    h_rows.push_back(unit_vec(2 * m, i));
  }
  // For the pairing, the S^2 d element and the form share the same matrix.
  return DiracManinTriple{quad.algebra, quad.form, Subspace::span(2 * m, g_rows),
                          Subspace::span(2 * m, h_rows), {}};
}

QuadraticLieData drinfeld_double(const LieAlgebra& h, const LieAlgebra& hstar) {
  if (h.dim() != hstar.dim()) throw DimMismatch("matched pair must have equal dimensions");
  std::size_t m = h.dim();
  std::size_t n = 2 * m;
  LieAlgebra d(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      Vec v = zero_vec(n);
      const Vec& hb = h.basis_bracket(i, j);
      for (std::size_t k = 0; k < m; ++k) v[k] = hb[k];
      d.set_basis_bracket(i, j, v);

      Vec w = zero_vec(n);
      const Vec& sb = hstar.basis_bracket(i, j);
      for (std::size_t k = 0; k < m; ++k) w[m + k] = sb[k];
      d.set_basis_bracket(m + i, m + j, w);
    }
  // Mixed term: [x, a] = ad*_x a - ad*_a x.
  for (std::size_t i = 0; i < m; ++i) {
    LinearMap coad_h = dual_map(h.ad_basis(i)) * Scalar(-1);
    for (std::size_t j = 0; j < m; ++j) {
      LinearMap coad_s = dual_map(hstar.ad_basis(j)) * Scalar(-1);
      Vec v = zero_vec(n);
      for (std::size_t k = 0; k < m; ++k) {
        v[m + k] = coad_h.at(k, j);   // ad*_{x_i} a^j
        v[k] = -coad_s.at(k, i);      // -ad*_{a^j} x_i
      }
      d.set_basis_bracket(i, m + j, v);
    }
  }
  if (auto w = jacobi_witness(d)) {
    throw JacobiFailure("double violates Jacobi at basis triple (" + std::to_string((*w)[0]) +
                        "," + std::to_string((*w)[1]) + "," + std::to_string((*w)[2]) +
                        "): not a matched pair");
  }
  return QuadraticLieData{d, SymmetricForm::standard_pairing(m)};
}

DiracManinTriple cartan_dirac(const QuadraticLieData& g) {
  std::size_t m = g.algebra.dim();
  if (!g.form.nondegenerate()) throw InvalidQuadraticData("form must be nondegenerate");
  if (!ad_invariant_form(g.algebra, g.form)) throw InvalidQuadraticData("form must be invariant");
  if (auto w = jacobi_witness(g.algebra)) throw InvalidQuadraticData("algebra violates Jacobi");

  std::size_t n = 2 * m;
  LieAlgebra d(n);  // direct sum bracket on gbar + g
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const Vec& gb = g.algebra.basis_bracket(i, j);
      Vec left = zero_vec(n), right = zero_vec(n);
      for (std::size_t k = 0; k < m; ++k) {
        left[k] = gb[k];
        right[m + k] = gb[k];
      }
      d.set_basis_bracket(i, j, left);
      d.set_basis_bracket(m + i, m + j, right);
    }

  LinearMap big(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      big.at(i, j) = -g.form.gram().at(i, j);
      big.at(m + i, m + j) = g.form.gram().at(i, j);
    }
  SymmetricForm beta(big.inverse());  // element of S^2 d for the (-K)+K metric

  std::vector<Vec> diag_rows, h_rows;
  for (std::size_t i = 0; i < m; ++i) {
    Vec v = zero_vec(n);
    v[i] = 1;
    v[m + i] = 1;
    diag_rows.push_back(v);
    h_rows.push_back(unit_vec(n, m + i));
  }
  return DiracManinTriple{d, beta, Subspace::span(n, diag_rows), Subspace::span(n, h_rows), {}};
}

}  // namespace dirackit
