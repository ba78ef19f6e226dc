#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dirackit/linalg.hpp"
#include "testutil.hpp"

using namespace dirackit;

namespace {

Scalar q(long n, long d = 1) {
  Scalar s(n, d);
  s.canonicalize();
  return s;
}

}  // namespace

TEST_CASE("subspace lattice basics") {
  Subspace e1 = Subspace::span(2, {{q(1), q(0)}});
  Subspace e2 = Subspace::span(2, {{q(0), q(1)}});
  CHECK(e1.sum(e2) == Subspace::full(2));

  Subspace v = Subspace::span(3, {{q(1), q(0), q(0)}, {q(0), q(1), q(0)}});
  Subspace w = Subspace::span(3, {{q(1), q(1), q(0)}});
  CHECK(v.contains(w));
  CHECK(v.intersect(w) == w);

  // Preimage of span{e1} under (x,y) -> x+y is all of Q^2: solved by hand
  // from the one-equation system.
  LinearMap add{{q(1), q(1)}};
  Subspace target = Subspace::span(1, {{q(1)}});
  CHECK(target.preimage(add) == Subspace::full(2));

  CHECK_THROWS_AS((void)e1.sum(Subspace::full(3)), DimMismatch);
}

TEST_CASE("lattice dimension law on random pairs") {
  dktest::Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng.integer(0, 5);
    Subspace a = rng.subspace(n, rng.integer(0, int(n)));
    Subspace b = rng.subspace(n, rng.integer(0, int(n)));
    CHECK(a.sum(b).dim() + a.intersect(b).dim() == a.dim() + b.dim());
  }
}

TEST_CASE("annihilator") {
  CHECK(annihilator(Subspace::full(3)) == Subspace(3));
  CHECK(annihilator(Subspace(3)) == Subspace::full(3));
  Subspace s = Subspace::span(3, {{q(1), q(0), q(0)}});
  Subspace expected = Subspace::span(3, {{q(0), q(1), q(0)}, {q(0), q(0), q(1)}});
  CHECK(annihilator(s) == expected);
  CHECK(annihilator(annihilator(s)) == s);

  dktest::Rng rng(102);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 1 + rng.integer(0, 6);
    Subspace a = rng.subspace(n, rng.integer(0, int(n)));
    CHECK(annihilator(a).dim() == n - a.dim());
    CHECK(annihilator(annihilator(a)) == a);
  }
}

TEST_CASE("orthogonal complements") {
  SymmetricForm hyp(LinearMap{{q(0), q(1)}, {q(1), q(0)}});
  Subspace e1 = Subspace::span(2, {{q(1), q(0)}});
  CHECK(orth_complement(e1, hyp) == e1);

  SymmetricForm zero = SymmetricForm::zero(2);
  CHECK(orth_complement(e1, zero) == Subspace::full(2));

  // Q^4 = Q^2 + dual with the standard pairing; C = span{(e1,0),(e2,0),(0,eps1)}.
  SymmetricForm pairing = SymmetricForm::standard_pairing(2);
  Subspace c = Subspace::span(4, {{q(1), q(0), q(0), q(0)},
                                  {q(0), q(1), q(0), q(0)},
                                  {q(0), q(0), q(1), q(0)}});
  Subspace cperp = Subspace::span(4, {{q(0), q(1), q(0), q(0)}});
  CHECK(orth_complement(c, pairing) == cperp);
  CHECK(classify_subspace(c, pairing) == SubspaceClass::coisotropic);
  CHECK(classify_subspace(Subspace::full(4), pairing) == SubspaceClass::coisotropic);
  CHECK(classify_subspace(Subspace(4), pairing) == SubspaceClass::isotropic);

  dktest::Rng rng(103);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng.integer(0, 5);
    SymmetricForm form = rng.nondegenerate_form(n);
    Subspace s = rng.subspace(n, rng.integer(0, int(n)));
    Subspace perp = orth_complement(s, form);
    CHECK(perp.dim() == n - s.dim());
    CHECK(orth_complement(perp, form) == s);
  }
}

TEST_CASE("coisotropic reduction") {
  SymmetricForm pairing = SymmetricForm::standard_pairing(2);

  SUBCASE("full space, nondegenerate form") {
    auto [quot, reduced] = coisotropic_reduce(Subspace::full(4), pairing);
    CHECK(quot.dim() == 4);
    CHECK(reduced.gram() == pairing.gram());
  }

  SUBCASE("lagrangian gives zero quotient") {
    Subspace lag = Subspace::span(4, {{q(1), q(0), q(0), q(0)}, {q(0), q(1), q(0), q(0)}});
    REQUIRE(classify_subspace(lag, pairing) == SubspaceClass::lagrangian);
    auto [quot, reduced] = coisotropic_reduce(lag, pairing);
    CHECK(quot.dim() == 0);
    (void)reduced;
  }

  SUBCASE("worked Q^4 example") {
    Subspace c = Subspace::span(4, {{q(1), q(0), q(0), q(0)},
                                    {q(0), q(1), q(0), q(0)},
                                    {q(0), q(0), q(1), q(0)}});
    auto [quot, reduced] = coisotropic_reduce(c, pairing);
    CHECK(quot.dim() == 2);
    // Representatives e1, eps1 pair hyperbolically: computed by hand on the
    // canonical complement of C-perp = span{e2}.
    CHECK(reduced.gram() == LinearMap{{q(0), q(1)}, {q(1), q(0)}});
  }

  SUBCASE("rejects non-coisotropic input") {
    Subspace bad = Subspace::span(4, {{q(1), q(0), q(0), q(0)}});
    CHECK_THROWS_AS((void)coisotropic_reduce(bad, pairing), NotCoisotropic);
  }

  SUBCASE("induced form nondegenerate on random coisotropics") {
    dktest::Rng rng(104);
    for (int t = 0; t < 200; ++t) {
      std::size_t n = 2 + rng.integer(0, 6);
      SymmetricForm form = rng.nondegenerate_form(n);
      Subspace c = rng.coisotropic_subspace(n, form);
      auto [quot, reduced] = coisotropic_reduce(c, form);
      CHECK(reduced.nondegenerate());
      Subspace cperp = orth_complement(c, form);
      CHECK(quot.dim() == c.dim() - cperp.dim());
      // Projection/section contract.
      CHECK(quot.projection * quot.section == LinearMap::identity(quot.dim()));
      for (std::size_t i = 0; i < cperp.dim(); ++i)
        CHECK(is_zero(quot.project(cperp.basis_vector(i))));
    }
  }
}

TEST_CASE("isotropic reduction") {
  SymmetricForm hyp2 = SymmetricForm::standard_pairing(1);

  SUBCASE("zero subspace is the identity reduction") {
    auto [quot, reduced] = isotropic_reduce(Subspace(2), hyp2);
    CHECK(quot.dim() == 2);
    CHECK(reduced.gram() == hyp2.gram());
  }

  SUBCASE("line in hyperbolic plane reduces to zero") {
    Subspace i = Subspace::span(2, {{q(1), q(0)}});
    auto [quot, reduced] = isotropic_reduce(i, hyp2);
    CHECK(quot.dim() == 0);
    (void)reduced;
  }

  SUBCASE("two hyperbolic planes") {
    LinearMap g(4, 4);
    g.at(0, 1) = g.at(1, 0) = q(1);
    g.at(2, 3) = g.at(3, 2) = q(1);
    SymmetricForm form(g);
    Subspace i = Subspace::span(4, {{q(1), q(0), q(0), q(0)}});
    auto [quot, reduced] = isotropic_reduce(i, form);
    CHECK(quot.dim() == 2);
    CHECK(reduced.gram() == LinearMap{{q(0), q(1)}, {q(1), q(0)}});
  }

  SUBCASE("rejects non-isotropic input") {
    SymmetricForm diag(LinearMap{{q(1), q(0)}, {q(0), q(1)}});
    Subspace i = Subspace::span(2, {{q(1), q(0)}});
    CHECK_THROWS_AS((void)isotropic_reduce(i, diag), NotIsotropic);
  }

  SUBCASE("dimension law on random instances") {
    dktest::Rng rng(105);
    for (int t = 0; t < 100; ++t) {
      std::size_t n = 2 + rng.integer(0, 6);
      SymmetricForm form = rng.nondegenerate_form(n);
      Subspace i = rng.isotropic_subspace(n, form);
      auto [quot, reduced] = isotropic_reduce(i, form);
      CHECK(quot.dim() == n - 2 * i.dim());
      CHECK(reduced.nondegenerate());
    }
  }
}

TEST_CASE("reduction in stages") {
  SymmetricForm pairing = SymmetricForm::standard_pairing(2);

  CHECK(reduction_in_stages_check(Subspace::full(4), Subspace::full(4), pairing));

  Subspace lag = Subspace::span(4, {{q(1), q(0), q(0), q(0)}, {q(0), q(1), q(0), q(0)}});
  CHECK(reduction_in_stages_check(lag, Subspace::full(4), pairing));

  SUBCASE("random nested coisotropics agree") {
    dktest::Rng rng(106);
    int done = 0;
    while (done < 100) {
      std::size_t n = 2 + rng.integer(0, 6);
      SymmetricForm form = rng.nondegenerate_form(n);
      Subspace i2 = rng.isotropic_subspace(n, form);
      if (i2.dim() == 0) continue;
      // Random subspace of i2 gives nested isotropics i1 inside i2.
      Subspace i1 = rng.subspace(int(i2.dim()), rng.integer(0, int(i2.dim()))).image(
          i2.basis().transpose());
      Subspace c = orth_complement(i1, form);
      Subspace d = orth_complement(i2, form);
      CHECK(reduction_in_stages_check(c, d, form));
      ++done;
    }
  }

  SUBCASE("incompatible pair returns false") {
    LinearMap g(4, 4);
    g.at(0, 1) = g.at(1, 0) = q(1);
    g.at(2, 3) = g.at(3, 2) = q(1);
    SymmetricForm form(g);
    Subspace c = Subspace::span(4, {{q(1), q(0), q(0), q(0)}, {q(0), q(1), q(0), q(0)},
                                    {q(0), q(0), q(1), q(0)}});
    Subspace d = Subspace::span(4, {{q(0), q(1), q(0), q(0)}, {q(1), q(0), q(0), q(0)},
                                    {q(0), q(0), q(0), q(1)}});
    // c-perp = span{e3}: contained in d2 but not in d.
    Subspace d2 = Subspace::span(4, {{q(0), q(1), q(0), q(0)}, {q(0), q(0), q(1), q(0)},
                                     {q(0), q(0), q(0), q(1)}});
    CHECK(reduction_in_stages_check(c, d2, form));
    CHECK(!reduction_in_stages_check(c, d, form));
  }
}

TEST_CASE("dual map") {
  CHECK(dual_map(LinearMap::identity(3)) == LinearMap::identity(3));
  CHECK(dual_map(LinearMap::zero(2, 3)) == LinearMap::zero(3, 2));
  LinearMap m{{q(1), q(2), q(3)}, {q(4), q(5), q(6)}};
  CHECK(dual_map(m) == LinearMap{{q(1), q(4)}, {q(2), q(5)}, {q(3), q(6)}});
  dktest::Rng rng(107);
  LinearMap a = rng.matrix(3, 4), b = rng.matrix(4, 2);
  CHECK(dual_map(a * b) == dual_map(b) * dual_map(a));
}

TEST_CASE("double perp and membership under degenerate forms") {
  // Degenerate forms are first class: perp computations must not assume rank.
  LinearMap g(3, 3);
  g.at(0, 0) = q(1);
  SymmetricForm form(g);
  Subspace e3 = Subspace::span(3, {{q(0), q(0), q(1)}});
  CHECK(orth_complement(e3, form) == Subspace::full(3));
  CHECK(form.radical() == Subspace::span(3, {{q(0), q(1), q(0)}, {q(0), q(0), q(1)}}));
  CHECK(!form.nondegenerate());
}

TEST_CASE("linear map solve and inverse") {
  dktest::Rng rng(108);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 1 + rng.integer(0, 4);
    LinearMap a = rng.invertible_matrix(n);
    CHECK(a * a.inverse() == LinearMap::identity(n));
    Vec b = rng.vec(n);
    auto x = a.solve(b);
    REQUIRE(x.has_value());
    CHECK(a * *x == b);
    CHECK(a.det() != 0);
  }
  LinearMap sing{{q(1), q(1)}, {q(1), q(1)}};
  CHECK(sing.det() == 0);
  CHECK_THROWS_AS((void)sing.inverse(), SingularMatrix);
  CHECK(!sing.solve({q(1), q(0)}).has_value());
}
