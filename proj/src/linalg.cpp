#include "dirackit/linalg.hpp"

#include <algorithm>

namespace dirackit {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DimMismatch(msg);
}

}  // namespace

Vec operator+(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sizes differ");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sizes differ");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(const Scalar& c, const Vec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

Scalar dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sizes differ");
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Vec zero_vec(std::size_t n) { return Vec(n); }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec r(n);
  r[i] = 1;
  return r;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s == 0; });
}

LinearMap::LinearMap(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  e_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged initializer");
    e_.insert(e_.end(), r.begin(), r.end());
  }
}

LinearMap LinearMap::identity(std::size_t n) {
  LinearMap m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

LinearMap LinearMap::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  LinearMap m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

LinearMap LinearMap::from_cols(const std::vector<Vec>& cols, std::size_t rows) {
  LinearMap m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(cols[j].size() == rows, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

Vec LinearMap::row(std::size_t i) const {
  Vec r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

Vec LinearMap::col(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

LinearMap LinearMap::transpose() const {
  LinearMap t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

LinearMap LinearMap::operator*(const LinearMap& rhs) const {
  require(cols_ == rhs.rows_, "inner dimensions differ");
  LinearMap p(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) p.at(i, j) += at(i, k) * rhs.at(k, j);
    }
  return p;
}

Vec LinearMap::operator*(const Vec& v) const {
  require(v.size() == cols_, "matrix-vector dimension mismatch");
  Vec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

LinearMap LinearMap::operator+(const LinearMap& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch");
  LinearMap m = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] += rhs.e_[i];
  return m;
}

LinearMap LinearMap::operator-(const LinearMap& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch");
  LinearMap m = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] -= rhs.e_[i];
  return m;
}

LinearMap LinearMap::operator*(const Scalar& c) const {
  LinearMap m = *this;
  for (auto& x : m.e_) x *= c;
  return m;
}

bool LinearMap::operator==(const LinearMap& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && e_ == rhs.e_;
}

bool LinearMap::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Scalar& s) { return s == 0; });
}

bool LinearMap::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

LinearMap LinearMap::rref() const {
  LinearMap m = *this;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols_ && pivot_row < m.rows_; ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows_) continue;
    if (sel != pivot_row)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(pivot_row, j));
    Scalar inv = 1 / m.at(pivot_row, col);
    for (std::size_t j = col; j < cols_; ++j) m.at(pivot_row, j) *= inv;
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (i == pivot_row || m.at(i, col) == 0) continue;
      Scalar f = m.at(i, col);
      for (std::size_t j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(pivot_row, j);
    }
    ++pivot_row;
  }
  LinearMap out(pivot_row, cols_);
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

LinearMap LinearMap::kernel() const {
  LinearMap r = rref();
  std::vector<std::size_t> pivot_col(r.rows());
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t j = 0;
    while (j < cols_ && r.at(i, j) == 0) ++j;
    pivot_col[i] = j;
    is_pivot[j] = true;
  }
  std::vector<Vec> gens;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols_);
    v[free] = 1;
    for (std::size_t i = 0; i < r.rows(); ++i) v[pivot_col[i]] = -r.at(i, free);
    gens.push_back(std::move(v));
  }
  return LinearMap::from_rows(gens, cols_).rref();
}

std::optional<Vec> LinearMap::solve(const Vec& b) const {
  require(b.size() == rows_, "rhs size mismatch");
  LinearMap aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  LinearMap r = aug.rref();
  Vec x(cols_);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t j = 0;
    while (j <= cols_ && r.at(i, j) == 0) ++j;
    if (j == cols_) return std::nullopt;  // row (0 ... 0 | 1): inconsistent
    x[j] = r.at(i, cols_);
  }
  return x;
}

LinearMap LinearMap::inverse() const {
  if (rows_ != cols_) throw SingularMatrix("inverse of non-square matrix");
  LinearMap aug = hcat(identity(rows_));
  LinearMap r = aug.rref();
  if (r.rows() != rows_) throw SingularMatrix("matrix not invertible");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < rows_; ++j)
      if (r.at(i, j) != (i == j ? 1 : 0)) throw SingularMatrix("matrix not invertible");
  LinearMap inv(rows_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < rows_; ++j) inv.at(i, j) = r.at(i, rows_ + j);
  return inv;
}

Scalar LinearMap::det() const {
  if (rows_ != cols_) throw SingularMatrix("determinant of non-square matrix");
  LinearMap m = *this;
  Scalar d = 1;
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t sel = col;
    while (sel < rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == rows_) return 0;
    if (sel != col) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(col, j));
      d = -d;
    }
    d *= m.at(col, col);
    Scalar inv = 1 / m.at(col, col);
    for (std::size_t i = col + 1; i < rows_; ++i) {
      if (m.at(i, col) == 0) continue;
      Scalar f = m.at(i, col) * inv;
      for (std::size_t j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return d;
}

LinearMap LinearMap::hcat(const LinearMap& right) const {
  require(rows_ == right.rows_, "hcat row mismatch");
  LinearMap m(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) m.at(i, cols_ + j) = right.at(i, j);
  }
  return m;
}

LinearMap LinearMap::vcat(const LinearMap& below) const {
  require(cols_ == below.cols_, "vcat column mismatch");
  LinearMap m(rows_ + below.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < below.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(rows_ + i, j) = below.at(i, j);
  return m;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vec>& gens) {
  return span_rows(LinearMap::from_rows(gens, ambient));
}

Subspace Subspace::span_rows(const LinearMap& rows) {
  Subspace s(rows.cols());
  s.basis_ = rows.rref();
  return s;
}

Subspace Subspace::full(std::size_t ambient) {
  return span_rows(LinearMap::identity(ambient));
}

bool Subspace::contains(const Vec& v) const {
  require(v.size() == ambient_, "ambient dimension mismatch");
  if (is_zero(v)) return true;
  LinearMap ext = basis_.vcat(LinearMap::from_rows({v}, ambient_));
  return ext.rank() == dim();
}

bool Subspace::contains(const Subspace& other) const {
  require(other.ambient_ == ambient_, "ambient dimension mismatch");
  if (other.dim() == 0) return true;
  return basis_.vcat(other.basis_).rank() == dim();
}

bool Subspace::operator==(const Subspace& other) const {
  return ambient_ == other.ambient_ && basis_ == other.basis_;
}

Subspace Subspace::sum(const Subspace& other) const {
  require(other.ambient_ == ambient_, "ambient dimension mismatch");
  return span_rows(basis_.vcat(other.basis_));
}

// Zassenhaus: row reduce [A|A; B|0]; rows with zero left half carry the
// intersection in their right half.
Subspace Subspace::intersect(const Subspace& other) const {
  require(other.ambient_ == ambient_, "ambient dimension mismatch");
  std::size_t n = ambient_;
  LinearMap top = basis_.hcat(basis_);
  LinearMap bottom = other.basis_.hcat(LinearMap::zero(other.dim(), n));
  LinearMap r = top.vcat(bottom).rref();
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < n && left_zero; ++j) left_zero = (r.at(i, j) == 0);
    if (!left_zero) continue;
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = r.at(i, n + j);
    gens.push_back(std::move(v));
  }
  return span(n, gens);
}

Subspace Subspace::image(const LinearMap& a) const {
  require(a.cols() == ambient_, "map domain mismatch");
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < dim(); ++i) gens.push_back(a * basis_vector(i));
  return span(a.rows(), gens);
}

Subspace Subspace::preimage(const LinearMap& a) const {
  require(a.rows() == ambient_, "map codomain mismatch");
  // {v : A v in S} = kernel of (rows spanning ann(S)) * A.
  LinearMap ann_rows = basis_.kernel();
  if (ann_rows.rows() == 0) return Subspace::full(a.cols());
  return span_rows((ann_rows * a).kernel());
}

SymmetricForm::SymmetricForm(LinearMap gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw DimMismatch("gram matrix not square");
  if (!gram_.is_symmetric()) throw DimMismatch("gram matrix not symmetric");
}

SymmetricForm SymmetricForm::standard_pairing(std::size_t m) {
  LinearMap g(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    g.at(i, m + i) = 1;
    g.at(m + i, i) = 1;
  }
  return SymmetricForm(g);
}

Scalar SymmetricForm::eval(const Vec& v, const Vec& w) const { return dot(v, gram_ * w); }

std::string to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::isotropic: return "isotropic";
    case SubspaceClass::coisotropic: return "coisotropic";
    case SubspaceClass::lagrangian: return "lagrangian";
    case SubspaceClass::none: return "none";
  }
  return "?";
}

Subspace annihilator(const Subspace& s) { return Subspace::span_rows(s.basis().kernel()); }

Subspace orth_complement(const Subspace& s, const SymmetricForm& form) {
  if (form.ambient() != s.ambient()) throw DimMismatch("form/subspace ambient mismatch");
  // v in s-perp iff (basis_s * gram) v = 0.
  return Subspace::span_rows((s.basis() * form.gram()).kernel());
}

SubspaceClass classify_subspace(const Subspace& s, const SymmetricForm& form) {
  Subspace perp = orth_complement(s, form);
  bool iso = perp.contains(s);
  bool coiso = s.contains(perp);
  if (iso && coiso) return SubspaceClass::lagrangian;
  if (iso) return SubspaceClass::isotropic;
  if (coiso) return SubspaceClass::coisotropic;
  return SubspaceClass::none;
}

QuotientSpace make_quotient(const Subspace& c, const Subspace& k) {
  if (!c.contains(k)) throw DimMismatch("quotient kernel not contained in ambient");
  std::size_t n = c.ambient();
  std::size_t q = c.dim() - k.dim();

  // Canonical complement of k in c: first c-basis rows that grow the span.
  std::vector<Vec> complement;
  LinearMap running = k.basis();
  for (std::size_t i = 0; i < c.dim() && complement.size() < q; ++i) {
    Vec cand = c.basis_vector(i);
    LinearMap ext = running.vcat(LinearMap::from_rows({cand}, n));
    if (ext.rank() > running.rows()) {
      running = ext.rref();
      complement.push_back(cand);
    }
  }
  LinearMap section = LinearMap::from_cols(complement, n);

  // Complete [section | k-basis] to a basis of Q^n with standard vectors,
  // invert, and read the projection off the top rows.
  std::vector<Vec> cols = complement;
  for (std::size_t i = 0; i < k.dim(); ++i) cols.push_back(k.basis_vector(i));
  LinearMap span_so_far = LinearMap::from_cols(cols, n).transpose().rref();
  for (std::size_t j = 0; j < n && cols.size() < n; ++j) {
    Vec e = unit_vec(n, j);
    LinearMap ext = span_so_far.vcat(LinearMap::from_rows({e}, n));
    if (ext.rank() > span_so_far.rows()) {
      span_so_far = ext.rref();
      cols.push_back(e);
    }
  }
  LinearMap full_inv = LinearMap::from_cols(cols, n).inverse();
  LinearMap projection(q, n);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < n; ++j) projection.at(i, j) = full_inv.at(i, j);

  return QuotientSpace{c, k, projection, section};
}

std::pair<QuotientSpace, SymmetricForm> coisotropic_reduce(const Subspace& c,
                                                           const SymmetricForm& form) {
  Subspace perp = orth_complement(c, form);
  if (!c.contains(perp)) throw NotCoisotropic("subspace is not coisotropic for the form");
  QuotientSpace quot = make_quotient(c, perp);
  LinearMap induced = quot.section.transpose() * form.gram() * quot.section;
  SymmetricForm reduced(induced);
  if (reduced.gram().rank() != reduced.ambient())
    throw SingularMatrix("induced form on C/C-perp is degenerate");
  return {quot, reduced};
}

std::pair<QuotientSpace, SymmetricForm> isotropic_reduce(const Subspace& i,
                                                         const SymmetricForm& form) {
  Subspace perp = orth_complement(i, form);
  if (!perp.contains(i)) throw NotIsotropic("subspace is not isotropic for the form");
  QuotientSpace quot = make_quotient(perp, i);
  LinearMap induced = quot.section.transpose() * form.gram() * quot.section;
  SymmetricForm reduced(induced);
  if (form.nondegenerate() && reduced.gram().rank() != reduced.ambient())
    throw SingularMatrix("induced form on i-perp/i is degenerate");
  return {quot, reduced};
}

bool reduction_in_stages_check(const Subspace& c, const Subspace& d, const SymmetricForm& form) {
  Subspace cperp = orth_complement(c, form);
  Subspace dperp = orth_complement(d, form);
  if (!c.contains(cperp)) throw NotCoisotropic("first subspace is not coisotropic");
  if (!d.contains(dperp)) throw NotCoisotropic("second subspace is not coisotropic");
  bool compatible = d.contains(cperp);
  if (compatible != c.contains(dperp)) throw NotCoisotropic("perp containment asymmetry");
  if (!compatible) return false;

  Subspace meet = c.intersect(d);

  // Route A: reduce by C, then reduce the image of D in the quotient.
  auto [qc, gc] = coisotropic_reduce(c, form);
  Subspace d_in_q = meet.image(qc.projection);
  auto [qa, ga] = coisotropic_reduce(d_in_q, gc);

  // Route B: reduce the intersection directly.
  auto [qb, gb] = coisotropic_reduce(meet, form);

  if (qa.dim() != qb.dim()) throw NotCoisotropic("reduction in stages: dimension mismatch");
  for (std::size_t i = 0; i < meet.dim(); ++i) {
    Vec ai = qa.project(qc.project(meet.basis_vector(i)));
    Vec bi = qb.project(meet.basis_vector(i));
    for (std::size_t j = i; j < meet.dim(); ++j) {
      Vec aj = qa.project(qc.project(meet.basis_vector(j)));
      Vec bj = qb.project(meet.basis_vector(j));
      Scalar expected = form.eval(meet.basis_vector(i), meet.basis_vector(j));
      if (ga.eval(ai, aj) != expected || gb.eval(bi, bj) != expected)
        throw NotCoisotropic("reduction in stages: gram mismatch");
    }
  }
  return true;
}

}  // namespace dirackit
