#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dirackit/linalg.hpp"
#include "dirackit/report.hpp"

namespace dirackit {

struct JacobiFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidQuadraticData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidTriple : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lie algebra by structure constants: bracket[i][j] is the coordinate vector
/// of [e_i, e_j]. Antisymmetry is enforced at construction; Jacobi is checked
/// by jacobi_check (constructors of doubles rely on it as a certificate).
class LieAlgebra {
 public:
  explicit LieAlgebra(std::size_t dim);
  LieAlgebra(std::size_t dim, const std::vector<std::vector<Vec>>& bracket);

  static LieAlgebra abelian(std::size_t dim) { return LieAlgebra(dim); }
  /// dim-2 algebra [x,y] = y.
  static LieAlgebra nonabelian2();
  /// sl2 in the basis (e, h, f): [e,f]=h, [h,e]=2e, [h,f]=-2f.
  static LieAlgebra sl2();

  std::size_t dim() const { return dim_; }
  const Vec& basis_bracket(std::size_t i, std::size_t j) const { return bracket_[i][j]; }
  void set_basis_bracket(std::size_t i, std::size_t j, const Vec& value);

  Vec bracket(const Vec& x, const Vec& y) const;
  /// Matrix of ad(x): y -> [x,y].
  LinearMap ad(const Vec& x) const;
  LinearMap ad_basis(std::size_t i) const;

  bool operator==(const LieAlgebra& o) const { return dim_ == o.dim_ && bracket_ == o.bracket_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<Vec>> bracket_;
};

bool jacobi_check(const LieAlgebra& a);
/// First basis triple violating Jacobi, if any.
std::optional<std::array<std::size_t, 3>> jacobi_witness(const LieAlgebra& a);

bool is_subalgebra(const LieAlgebra& a, const Subspace& s);
bool is_ideal(const LieAlgebra& a, const Subspace& s);

/// Lie algebra with a symmetric bilinear form on it, ad-invariant in the
/// sense <[x,y],z> + <y,[x,z]> = 0.
struct QuadraticLieData {
  LieAlgebra algebra;
  SymmetricForm form;
};

bool ad_invariant_form(const LieAlgebra& a, const SymmetricForm& form);
/// Invariance of an element beta of S^2 d (a form on the dual):
/// ad_x beta# + beta# ad_x^T = 0 for all basis x.
bool ad_invariant_bivector(const LieAlgebra& a, const SymmetricForm& beta);

/// Dirac Manin triple (d, g, h)_beta: transverse subalgebras with
/// beta in S^2 d invariant and g beta-coisotropic. The optional generators
/// are finite Ad-type automorphisms used for the group-level K-invariance
/// checks that the infinitesimal condition cannot see.
struct DiracManinTriple {
  LieAlgebra algebra;       // d
  SymmetricForm beta;       // element of S^2 d; gram = matrix of beta#: d* -> d
  Subspace g;
  Subspace h;
  std::vector<LinearMap> k_generators;
};

/// beta#(ann(w)) as a subspace of d.
Subspace beta_sharp_ann(const SymmetricForm& beta, const Subspace& w);
bool beta_coisotropic(const SymmetricForm& beta, const Subspace& w);
/// isotropic / coisotropic / lagrangian relative to beta in S^2 d, decided by
/// comparing w with beta#(ann(w)); for nondegenerate beta this matches the
/// classification under the inverse metric on d.
SubspaceClass beta_classify(const SymmetricForm& beta, const Subspace& w);

ValidationReport validate_triple(const DiracManinTriple& t);

SymmetricForm killing_form(const LieAlgebra& a);

/// d = h x h* with h* abelian and the coadjoint action; the canonical pairing
/// is the (invariant, nondegenerate) form. Both h and h* come out Lagrangian.
QuadraticLieData semidirect_double(const LieAlgebra& h);
/// The standard Dirac Manin triple (h x h*, h*, h) with beta the pairing.
DiracManinTriple standard_triple(const LieAlgebra& h);

/// Double of a candidate matched pair on dual bases. Jacobi is checked, not
/// assumed; failure throws JacobiFailure naming a witness triple.
QuadraticLieData drinfeld_double(const LieAlgebra& h, const LieAlgebra& hstar);

/// Cartan-Dirac triple (gbar + g, g_diag, 0 + g) from an invariant
/// nondegenerate form on g; the direct-sum form is (-form) + form.
DiracManinTriple cartan_dirac(const QuadraticLieData& g);

}  // namespace dirackit
