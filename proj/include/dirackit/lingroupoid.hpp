#pragma once

#include "dirackit/linalg.hpp"
#include "dirackit/report.hpp"

namespace dirackit {

struct NotComposable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidGroupoid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotLambdaCoisotropic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleJ : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear groupoid q => g: a subspace of units together with two projections
/// onto it. The multiplication xi o eta = eta + (1-s) xi is forced.
struct LinearGroupoid {
  std::size_t q_dim = 0;
  Subspace units{0};
  LinearMap s, t;  // q -> q idempotents with image = units
};

ValidationReport validate_groupoid(const LinearGroupoid& g);

/// Composable pairs {(xi, eta) : s(xi) = t(eta)} as a subspace of q + q.
Subspace composable_pairs(const LinearGroupoid& g);

Vec groupoid_multiply(const LinearGroupoid& g, const Vec& xi, const Vec& eta);
Vec groupoid_inverse(const LinearGroupoid& g, const Vec& xi);

struct MetrizedLinearGroupoid {
  LinearGroupoid base;
  SymmetricForm metric{LinearMap(0, 0)};
};

/// Groupoid axioms plus: units Lagrangian, ker(s) = ker(t)-perp, and the
/// multiplicative-metric identity as one exact matrix identity on the
/// composable-pair subspace.
ValidationReport validate_metrized(const MetrizedLinearGroupoid& m);

/// Classifying datum: lambda in S^2 g, stored through its sharp g* -> g.
struct LambdaDatum {
  std::size_t g_dim = 0;
  SymmetricForm lambda{LinearMap(0, 0)};
  bool operator==(const LambdaDatum& o) const {
    return g_dim == o.g_dim && lambda.gram() == o.lambda.gram();
  }
};

/// Normal form g + g*_lambda with metric [[0,I],[I,L]], s(z,a) = z,
/// t(z,a) = z + lambda# a.
MetrizedLinearGroupoid from_lambda(const LambdaDatum& d);

/// The classifying map together with the explicit isomorphism realizing
/// from_lambda(to_lambda(m)) ~ m. iso columns express the normal-form basis
/// inside m's ambient space (units basis, then the t* embedding of g*).
struct Canonicalization {
  LambdaDatum lambda;
  LinearMap iso;  // q x q invertible
};

Canonicalization canonicalize(const MetrizedLinearGroupoid& m);
LambdaDatum to_lambda(const MetrizedLinearGroupoid& m);

/// Dual groupoid on q*: units ann(g), source (1-t)^T, target (1-s)^T.
LinearGroupoid dual_groupoid(const LinearGroupoid& g);

/// Metrized module (p, <.,.>, u) for the normal-form groupoid of some lambda;
/// u is written in g coordinates (g_dim x p_dim).
struct MetrizedModule {
  std::size_t p_dim = 0;
  SymmetricForm metric{LinearMap(0, 0)};
  LinearMap u;
};

/// Metric adjoint p-dual of u: u* = G_p^{-1} u^T (g* -> p).
LinearMap u_star(const MetrizedModule& m);
/// u o u* = lambda#, the moment-map law every metrized module satisfies.
bool module_law_holds(const MetrizedModule& m, const LambdaDatum& d);

/// Action (z,a) o x = x + u*(a) for s(z,a) = u(x).
Vec module_action(const MetrizedModule& m, const Vec& q_elt, const Vec& x);

/// Non-metrized module action x + j((1-s) xi) for a pair (u, j) with
/// u o j = t on ker(s). Here u: p -> q lands in the units and j: q -> p is
/// used on ker(s) only.
Vec general_module_action(const LinearMap& j, const LinearMap& u, const LinearGroupoid& gpd,
                          const Vec& xi, const Vec& x);

/// Action of the vector group g* = q/g on p/l, on canonical representatives.
Vec quotient_group_action(const MetrizedModule& m, const Subspace& l, const Vec& alpha,
                          const Vec& xbar);

struct LinearHomSpace {
  MetrizedModule module;
  Subspace l{0};  // Lagrangian in p, embedded by u as a lambda-coisotropic
};

struct HomspaceConstruction {
  LinearHomSpace hs;
  QuotientSpace quotient;  // C/C-perp inside the normal-form q
  Subspace c{0}, c_perp{0};
};

/// Homogeneous-space normal form: p = s^{-1}(l)/s^{-1}(l)-perp with l
/// embedded Lagrangian and u the descended target.
HomspaceConstruction homspace_from_coisotropic(const LambdaDatum& d, const Subspace& l);

/// Classification direction: the lambda-coisotropic u(l) recovering l.
Subspace homspace_to_coisotropic(const LinearHomSpace& hs);

/// The map (u(x), a) -> x + u*(a) on s^{-1}(u(l)), expressed over the
/// canonical basis of its domain; surjective isometry with kernel C-perp.
struct RecoveryMap {
  Subspace domain{0};  // C = s^{-1}(u(l)) inside g+g*
  LinearMap matrix;    // p_dim x dim(C), columns over domain basis
};
RecoveryMap recovery_map(const LinearHomSpace& hs, const LambdaDatum& d);

ValidationReport validate_homspace(const LinearHomSpace& hs, const LambdaDatum& d);

}  // namespace dirackit
