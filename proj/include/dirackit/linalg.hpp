#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dirackit/rational.hpp"

namespace dirackit {

struct DimMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotCoisotropic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotIsotropic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec = std::vector<Scalar>;

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& c, const Vec& v);
Scalar dot(const Vec& a, const Vec& b);
Vec concat(const Vec& a, const Vec& b);
Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);

/// Dense exact-rational matrix. Realizes every structure map in the toolkit
/// (s, t, u, j, f, projections, duals); rows act on column vectors.
class LinearMap {
 public:
  LinearMap() : rows_(0), cols_(0) {}
  LinearMap(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  LinearMap(std::initializer_list<std::initializer_list<Scalar>> rows);

  static LinearMap identity(std::size_t n);
  static LinearMap zero(std::size_t rows, std::size_t cols) { return LinearMap(rows, cols); }
  static LinearMap from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static LinearMap from_cols(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;

  LinearMap transpose() const;
  LinearMap operator*(const LinearMap& rhs) const;
  Vec operator*(const Vec& v) const;
  LinearMap operator+(const LinearMap& rhs) const;
  LinearMap operator-(const LinearMap& rhs) const;
  LinearMap operator*(const Scalar& c) const;
  bool operator==(const LinearMap& rhs) const;
  bool operator!=(const LinearMap& rhs) const { return !(*this == rhs); }

  bool is_zero() const;
  bool is_symmetric() const;

  /// Reduced row echelon form; zero rows dropped. Unique for a given row space.
  LinearMap rref() const;
  std::size_t rank() const { return rref().rows(); }
  /// Rows spanning {v : (*this) v = 0}, in canonical RREF form.
  LinearMap kernel() const;
  /// One solution x of (*this) x = b, if any.
  std::optional<Vec> solve(const Vec& b) const;
  LinearMap inverse() const;
  Scalar det() const;

  LinearMap hcat(const LinearMap& right) const;
  LinearMap vcat(const LinearMap& below) const;

 private:
  std::size_t rows_, cols_;
  std::vector<Scalar> e_;
};

/// Exact subspace of Q^n, stored as the unique reduced-row-echelon basis so
/// that equality of subspaces is equality of representations.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
  static Subspace span(std::size_t ambient, const std::vector<Vec>& gens);
  static Subspace span_rows(const LinearMap& rows);
  static Subspace full(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const LinearMap& basis() const { return basis_; }
  Vec basis_vector(std::size_t i) const { return basis_.row(i); }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& other) const;
  bool operator!=(const Subspace& other) const { return !(*this == other); }

  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  /// Image {A v : v in this} of this subspace under A.
  Subspace image(const LinearMap& a) const;
  /// Preimage {v : A v in this}.
  Subspace preimage(const LinearMap& a) const;

 private:
  std::size_t ambient_;
  LinearMap basis_;
};

/// Possibly degenerate symmetric bilinear form, given by its Gram matrix.
class SymmetricForm {
 public:
  explicit SymmetricForm(LinearMap gram);
  static SymmetricForm zero(std::size_t n) { return SymmetricForm(LinearMap::zero(n, n)); }
  /// Split pairing on Q^m + (Q^m)^*: gram [[0,I],[I,0]].
  static SymmetricForm standard_pairing(std::size_t m);

  std::size_t ambient() const { return gram_.rows(); }
  const LinearMap& gram() const { return gram_; }
  Scalar eval(const Vec& v, const Vec& w) const;
  Vec flat(const Vec& v) const { return gram_ * v; }
  bool nondegenerate() const { return gram_.rank() == gram_.rows(); }
  Subspace radical() const { return Subspace::span_rows(gram_.kernel()); }
  bool operator==(const SymmetricForm& o) const { return gram_ == o.gram_; }

 private:
  LinearMap gram_;
};

enum class SubspaceClass { isotropic, coisotropic, lagrangian, none };
std::string to_string(SubspaceClass c);

Subspace annihilator(const Subspace& s);
Subspace orth_complement(const Subspace& s, const SymmetricForm& form);
SubspaceClass classify_subspace(const Subspace& s, const SymmetricForm& form);

/// Quotient C/K with a canonical section (lexicographically first pivots), so
/// quotient classes have reproducible representatives: projection * section = id,
/// projection restricted to C has kernel exactly K.
struct QuotientSpace {
  Subspace ambient{0};   // the numerator C
  Subspace kernel{0};    // the denominator, e.g. C-perp
  LinearMap projection;  // dim x n
  LinearMap section;     // n x dim
  std::size_t dim() const { return projection.rows(); }
  Vec project(const Vec& v) const { return projection * v; }
  Vec lift(const Vec& q) const { return section * q; }
};

QuotientSpace make_quotient(const Subspace& c, const Subspace& k);

std::pair<QuotientSpace, SymmetricForm> coisotropic_reduce(const Subspace& c,
                                                           const SymmetricForm& form);
std::pair<QuotientSpace, SymmetricForm> isotropic_reduce(const Subspace& i,
                                                         const SymmetricForm& form);

/// Compatibility check: c-perp inside d (equivalently d-perp inside c, equivalently
/// the intersection coisotropic). When true, also asserts that reducing in stages
/// and reducing the intersection give the same metrized quotient.
bool reduction_in_stages_check(const Subspace& c, const Subspace& d, const SymmetricForm& form);

inline LinearMap dual_map(const LinearMap& m) { return m.transpose(); }

}  // namespace dirackit
