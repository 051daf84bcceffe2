#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dgcohom;
using namespace dgtest;

namespace {

Poly random_element(const DGAPtr& X, int n, int q, std::mt19937_64& rng) {
  Poly p(X->poly_ring());
  for (const auto& m : X->basis(n, q)) p.add_term(m, Scalar(static_cast<long>(rng() % 5) - 2));
  return p;
}

int cone_cohomology(const ModuleMap& f, int n, int q) {
  int dim = cone_dim(f, n, q);
  if (dim == 0) return 0;
  return dim - rank(cone_differential(f, n, q)) - rank(cone_differential(f, n - 1, q));
}

bool cone_slice_acyclic(const Resolution& res, int n_lo, int q_max) {
  for (int q = 0; q <= q_max; ++q) {
    auto H = cohomology(cone_slice(res.augmentation, q, n_lo, 1));
    for (int n = n_lo + 1; n <= 0; ++n)
      if (H.dim(n) != 0) return false;
  }
  return true;
}

}  // namespace

TEST(DGAlgebra, KoszulComplexOfRegularSequence) {
  auto L = polynomial({"x", "y"});
  auto K = koszul_complex(L, {L->var("x"), L->var("y")});
  EXPECT_NO_THROW(K->check());
  for (int q = 0; q <= 5; ++q) {
    auto H = cohomology(K->slice(q, -2, 0));
    EXPECT_EQ(H.dim(-2), 0);
    EXPECT_EQ(H.dim(-1), 0);
    EXPECT_EQ(H.dim(0), q == 0 ? 1 : 0);
  }
}

TEST(DGAlgebra, KoszulComplexOfNonRegularSequence) {
  auto L = polynomial({"x", "y"});
  auto K = koszul_complex(L, {L->parse("x*y"), L->parse("x^2")});
  int h1 = 0;
  for (int q = 0; q <= 6; ++q) h1 += cohomology(K->slice(q, -2, 0)).dim(-1);
  EXPECT_GT(h1, 0);
}

TEST(DGAlgebra, LeibnizAndSquareZeroOnTateResolutions) {
  std::mt19937_64 rng(21);
  for (auto B : {dual_numbers(), b3()}) {
    auto res = tate_resolve(over_ground(B), Bounds{3, 7});
    const auto& X = res.algebra;
    EXPECT_NO_THROW(X->check());
    for (int it = 0; it < 25; ++it) {
      int n1 = -static_cast<int>(rng() % 3), n2 = -static_cast<int>(rng() % 3);
      int q1 = static_cast<int>(rng() % 5), q2 = static_cast<int>(rng() % 5);
      Poly a = random_element(X, n1, q1, rng), b = random_element(X, n2, q2, rng);
      EXPECT_TRUE(X->ring()->normal_form(X->d(X->d(a))).is_zero());
      Poly lhs = X->d(X->ring()->multiply(a, b));
      Poly rhs = X->ring()->multiply(X->d(a), b) + X->ring()->multiply(a, X->d(b)).scaled(n1 % 2 ? -1 : 1);
      EXPECT_EQ(X->ring()->normal_form(lhs), X->ring()->normal_form(rhs));
    }
  }
}

TEST(DGAlgebra, TateResolutionOfDualNumbers) {
  auto res = tate_resolve(over_ground(dual_numbers()), Bounds{4, 10});
  const auto& X = res.algebra;
  EXPECT_EQ(X->generator_count(-1), 1);
  EXPECT_EQ(X->generator_count(-2), 0);
  EXPECT_EQ(X->generator_count(-3), 0);
  for (auto i : X->generators())
    if (X->poly_ring()->var(i).hom == -1) EXPECT_EQ(X->d_var(i), X->ring()->parse("x^2"));
  EXPECT_TRUE(res.augmentation.commutes());
  EXPECT_TRUE(cone_slice_acyclic(res, -4, 10));
}

TEST(DGAlgebra, TateResolutionOfNonCompleteIntersection) {
  Bounds b{3, 7};
  auto res = tate_resolve(over_ground(b3()), b);
  EXPECT_EQ(res.algebra->generator_count(-1), 2);
  EXPECT_GT(res.algebra->generator_count(-2), 0);
  EXPECT_TRUE(cone_slice_acyclic(res, -3, 7));
}

TEST(DGAlgebra, RelativeTateResolution) {
  auto B = b3();
  RingMorphism g(polynomial({"y"}), B, {B->var("y")});
  auto res = tate_resolve(g, Bounds{3, 7});
  EXPECT_TRUE(res.augmentation.commutes());
  EXPECT_TRUE(cone_slice_acyclic(res, -3, 7));
}

TEST(DGAlgebra, EnvelopingAlgebraMaps) {
  auto res = tate_resolve(over_ground(dual_numbers()), Bounds{3, 8});
  auto env = enveloping(res.algebra);
  EXPECT_TRUE(env.j1.commutes());
  EXPECT_TRUE(env.j2.commutes());
  EXPECT_TRUE(env.mu.commutes());
  // R ⊗ R has the convolution Hilbert series.
  for (int q = 0; q <= 4; ++q) {
    for (int n = -2; n <= 0; ++n) {
      int expected = 0;
      for (int n1 = n; n1 <= 0; ++n1)
        for (int q1 = 0; q1 <= q; ++q1) expected += res.algebra->dim(n1, q1) * res.algebra->dim(n - n1, q - q1);
      EXPECT_EQ(env.S->dim(n, q), expected) << n << "," << q;
    }
  }
  // μ ∘ j1 = μ ∘ j2 = id.
  auto c1 = env.mu.after(env.j1), c2 = env.mu.after(env.j2);
  for (int q = 0; q <= 3; ++q)
    for (int n = -1; n <= 0; ++n) {
      EXPECT_EQ(c1.matrix(n, q), SparseMatrix::identity(res.algebra->dim(n, q)));
      EXPECT_EQ(c2.matrix(n, q), SparseMatrix::identity(res.algebra->dim(n, q)));
    }
}

TEST(DGAlgebra, MultiplicationResolutionIsAcyclic) {
  auto res = tate_resolve(over_ground(dual_numbers()), Bounds{3, 8});
  auto env = enveloping(res.algebra);
  Bounds b{3, 8};
  auto fast = resolve_multiplication(env, b);
  TateOptions generic;
  generic.generic_only = true;
  auto slow = resolve_multiplication(env, b, generic);
  EXPECT_TRUE(cone_slice_acyclic(fast, -3, 8));
  EXPECT_TRUE(cone_slice_acyclic(slow, -3, 8));
}

TEST(DGAlgebra, CharacteristicGuards) {
  EXPECT_THROW(build_setup(over_ground(dual_numbers(FieldSpec::prime(2))), Bounds{2, 6}), CharacteristicGuard);
  EXPECT_THROW(build_setup(over_ground(dual_numbers(FieldSpec::prime(3))), Bounds{3, 8}), CharacteristicGuard);
  EXPECT_NO_THROW(build_setup(over_ground(dual_numbers(FieldSpec::prime(7))), Bounds{2, 6}));
}

TEST(Modules, SemifreeResolutionOfResidueField) {
  auto D = algebra_of_ring(dual_numbers());
  auto K = residue_module(D);
  Bounds b{5, 8};
  auto res = semifree_resolve(K, b);
  EXPECT_NO_THROW(res.module->check_generators());
  EXPECT_TRUE(res.augmentation->is_cocycle());
  // K[x]/(x^2) resolves K with one generator per degree.
  std::map<int, int> per_degree;
  for (auto& g : res.module->generators()) per_degree[g.hom]++;
  for (int n = -4; n <= 0; ++n) EXPECT_EQ(per_degree[n], 1) << n;
  for (int q = 0; q <= 5; ++q)
    for (int n = -4; n <= 0; ++n) EXPECT_EQ(cone_cohomology(*res.augmentation, n, q), 0) << n << "," << q;
}

TEST(Modules, LiftThroughAugmentation) {
  auto D = algebra_of_ring(dual_numbers());
  auto K = residue_module(D);
  auto res = semifree_resolve(K, Bounds{5, 8});
  const auto& eps = *res.augmentation;
  auto lift = lift_through(eps, res.module, eps);
  EXPECT_TRUE(lift.is_cocycle());
  auto composite = eps.after(lift);
  for (int q = 0; q <= 4; ++q)
    for (int n = -3; n <= 0; ++n) EXPECT_EQ(composite.matrix(n, q), eps.matrix(n, q));
}

TEST(Modules, QuotientModuleAndDGModuleChecks) {
  auto B = algebra_of_ring(b3());
  auto M = std::make_shared<const QuotientModule>(B, std::vector<int>{0, 1},
                                                  std::vector<std::vector<Poly>>{{B->ring()->var("y"), B->ring()->zero()}});
  EXPECT_NO_THROW(M->check(0, 0, 0, 4));
  EXPECT_EQ(M->dim(0, 0), 1);
  EXPECT_EQ(M->dim(0, 1), 2);
}

TEST(Modules, BarResolutionDimensions) {
  auto B = algebra_of_ring(dual_numbers());
  auto bar = bar_complex(B, 4);
  EXPECT_NO_THROW(bar.module->check_generators());
  for (int k = 0; k <= 4; ++k) {
    int total = 0;
    for (int q = 0; q <= 2 * k + 4; ++q) total += bar.module->dim(-k, q);
    EXPECT_EQ(total, 1 << (k + 2)) << "length " << k;
  }
  for (int q = 0; q <= 3; ++q)
    for (int n = -3; n <= 0; ++n) EXPECT_EQ(cone_cohomology(*bar.augmentation, n, q), 0);
}
