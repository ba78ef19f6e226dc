#pragma once

#include "dirackit/lie.hpp"
#include "dirackit/lingroupoid.hpp"

namespace dirackit {

struct KNotTrivial : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KNotContained : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormNotPushedForward : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CandidateDimMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The groupoid d x d*_beta => d: pairing <(x1,a1),(x2,a2)> = a2(x1) + a1(x2)
/// + beta(a1,a2), source (x,a) -> x, target (x,a) -> x + beta#(a). Coincides
/// with the lambda normal form for g := d, lambda := beta (verified).
MetrizedLinearGroupoid d_beta_groupoid(const DiracManinTriple& t);

/// The derived triple (q, g, r)_gamma with q = s^{-1}(g)/s^{-1}(g)-perp inside
/// d x d*_beta, f the descended target, r = f^{-1}(h), and lambda the shared
/// projection of gamma and beta onto g.
struct QuadraticTriple {
  MetrizedLinearGroupoid q_groupoid;  // q => g, metric gamma
  Subspace g_in_q{0};                 // embedded g; f restricts to the identity on it
  LinearMap f;                        // q -> d
  Subspace r{0};                      // f^{-1}(h)
  LambdaDatum lambda;
  LinearMap pr_g_d;  // coordinates of the projection d -> g along h, in g's basis
  LinearMap pr_g_q;  // coordinates of the projection q -> g along r, matching f|_g
  QuotientSpace reduction;  // the underlying coisotropic reduction
};

QuadraticTriple build_quadratic_triple(const DiracManinTriple& t);

struct CoisotropicDatum {
  Subspace c{0};
  Subspace k{0};  // c intersected with h
};

struct CoisotropyCheck {
  ValidationReport report;
  std::optional<CoisotropicDatum> datum;  // set iff every check passed
};

/// Admission test for candidate subalgebras c: subalgebra,
/// beta-coisotropy, infinitesimal k-invariance, and the finite generators
/// when the triple carries them. Failures are report entries with witnesses.
CoisotropyCheck check_coisotropic(const DiracManinTriple& t, const Subspace& c);

/// Both directions of the preimage-coisotropy lemma, asserted to agree:
/// requires f(beta1) = beta2, i.e. f beta1# f^T = beta2#.
bool preimage_coisotropy_check(const LinearMap& f, const SymmetricForm& beta1,
                               const SymmetricForm& beta2, const Subspace& w2);

/// Identity-coset fiber of a Dirac homogeneous space. For trivial K the
/// moment lands in d (u~ u~* = beta#); after k-reduction it lands in g
/// (u u* = lambda#).
struct HomFiber {
  QuotientSpace reduction;  // final quotient bookkeeping
  SymmetricForm metric{LinearMap(0, 0)};
  Subspace l{0};
  LinearMap moment;
  bool k_reduced = false;
  std::size_t dim() const { return reduction.dim(); }
};

HomFiber hom_fiber(const DiracManinTriple& t, const CoisotropicDatum& cd);
HomFiber hom_fiber_reduced(const DiracManinTriple& t, const CoisotropicDatum& cd);

/// The same fiber built through the lambda-level normal form with
/// l := pr_g(c) inside (g, lambda).
struct ViaQFiber {
  HomspaceConstruction construction;
  Subspace l_g{0};  // pr_g(c)
};
ViaQFiber equivalent_fiber_via_q(const QuadraticTriple& qt, const CoisotropicDatum& cd);

/// Explicit isometry from the via-q fiber onto the k-reduced fiber, built
/// canonically from the classification map (u(x), a) -> x + u*(a).
/// Throws if the candidate map fails to be an isometry.
LinearMap cross_construction_isometry(const ViaQFiber& via_q, const HomFiber& reduced,
                                      const LambdaDatum& lambda);

/// Enumerates spans of k-basis plus subsets of the candidate list, filtered
/// by check_coisotropic with c cap h = k; deterministic canonical order.
std::vector<CoisotropicDatum> search_coisotropic(const DiracManinTriple& t, const Subspace& k,
                                                 const std::vector<Vec>& candidates,
                                                 std::size_t max_subset_size);

/// Projection-to-subspace coordinates: rows give the first-block coordinates
/// of the decomposition v = a (columns of first) + b (columns of second).
LinearMap split_projection(const Subspace& first, const Subspace& second);

}  // namespace dirackit
