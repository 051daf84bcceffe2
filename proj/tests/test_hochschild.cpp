#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dgcohom;
using namespace dgtest;

namespace {

struct DualSetup {
  HochschildSetup s;
  ExtSpace ext;
  explicit DualSetup(int n_max)
      : s(build_setup(over_ground(dual_numbers()), default_bounds(over_ground(dual_numbers()), n_max))),
        ext(s.P, over_S(s, self_module(s))) {}
};

DualSetup& dual4() {
  static DualSetup d(4);
  return d;
}

}  // namespace

TEST(Hochschild, DualNumbersTable) {
  auto& d = dual4();
  auto co = hh_cohomology(d.s, self_module(d.s), 4);
  EXPECT_EQ(co.totals(), (std::vector<int>{2, 1, 1, 1, 1}));
  EXPECT_EQ(co.dim(0, 0), 1);
  EXPECT_EQ(co.dim(0, 1), 1);
  EXPECT_EQ(co.dim(1, 0), 1);
  EXPECT_EQ(co.dim(2, -2), 1);
  for (int k = 0; k <= 4; ++k) EXPECT_TRUE(co.certified(k));
}

TEST(Hochschild, GroundFieldOverItself) {
  auto K = ground();
  RingMorphism id(K, K, {});
  auto s = build_setup(id, default_bounds(id, 3));
  auto co = hh_cohomology(s, self_module(s), 3);
  auto ho = hh_homology(s, self_module(s), 3);
  EXPECT_EQ(co.totals(), (std::vector<int>{1, 0, 0, 0}));
  EXPECT_EQ(ho.totals(), (std::vector<int>{1, 0, 0, 0}));
}

TEST(Hochschild, IdentityMorphismHasOnlyDegreeZero) {
  auto B = b3();
  RingMorphism id(B, B, {B->var("x"), B->var("y")});
  auto s = build_setup(id, default_bounds(id, 2));
  auto co = hh_cohomology(s, self_module(s), 2, 6);
  for (int r = 0; r <= 6; ++r) EXPECT_EQ(co.dim(0, r), B->dim(0, r));
  EXPECT_EQ(co.total(1), 0);
  EXPECT_EQ(co.total(2), 0);
}

TEST(Hochschild, PolynomialRingMatchesPolyvectorFields) {
  auto L = polynomial({"x", "y"});
  auto f = over_ground(L);
  const int cap = 5;
  auto s = build_setup(f, default_bounds(f, 2));
  auto co = hh_cohomology(s, self_module(s), 2, cap);
  auto dimL = [&](int q) { return q < 0 ? 0 : q + 1; };
  for (auto& c : co.cells) {
    if (!c.certified) continue;
    int expected = 0;
    if (c.degree == 0) expected = dimL(c.internal);
    if (c.degree == 1) expected = 2 * dimL(c.internal + 1);
    if (c.degree == 2) expected = dimL(c.internal + 2);
    EXPECT_EQ(c.dim, expected) << c.degree << "," << c.internal;
  }
  auto ho = hh_homology(s, self_module(s), 2, cap);
  for (auto& c : ho.cells) {
    if (!c.certified) continue;
    int expected = 0;
    if (c.degree == 0) expected = dimL(c.internal);
    if (c.degree == 1) expected = 2 * dimL(c.internal - 1);
    if (c.degree == 2) expected = dimL(c.internal - 2);
    EXPECT_EQ(c.dim, expected) << c.degree << "," << c.internal;
  }
}

TEST(Hochschild, ComplexRealizesDegreeZero) {
  auto& d = dual4();
  EXPECT_TRUE(hochschild_complex(d.s).h0_matches);
}

TEST(Hochschild, ComparisonMapsAreIsomorphismsInTheFlatCase) {
  auto& d = dual4();
  auto M = self_module(d.s);
  auto a = comparison_alpha(d.s, M, 3);
  ASSERT_TRUE(a.available);
  EXPECT_TRUE(a.all_iso_certified());
  auto b = comparison_beta(d.s, M, 3);
  EXPECT_TRUE(b.all_iso_certified());
  EXPECT_FALSE(b.some_certified_failure());
}

TEST(Hochschild, BarOracleUnavailableForInfiniteAlgebras) {
  EXPECT_THROW(bar_oracle_cohomology(algebra_of_ring(polynomial({"x"})), 2), StructuralError);
}

TEST(Yoneda, UnitActsTrivially) {
  auto& d = dual4();
  std::mt19937_64 rng(31);
  SVec one = unit_vector(0);
  ASSERT_EQ(d.ext.dim(0, 0), 1);
  for (auto [k, r] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {2, -2}, {3, -2}}) {
    SVec a = random_vector(rng, d.ext.dim(k, r));
    EXPECT_EQ(yoneda_coordinates(d.s, d.ext, 0, 0, one, k, r, a), a);
    EXPECT_EQ(yoneda_coordinates(d.s, d.ext, k, r, a, 0, 0, one), a);
  }
}

TEST(Yoneda, DegreeOneSquaresToZeroDegreeTwoDoesNot) {
  auto& d = dual4();
  SVec u = unit_vector(0);
  EXPECT_TRUE(yoneda_coordinates(d.s, d.ext, 1, 0, u, 1, 0, u).empty());
  auto t2 = yoneda_coordinates(d.s, d.ext, 2, -2, u, 2, -2, u);
  EXPECT_FALSE(t2.empty());
  EXPECT_EQ(d.ext.dim(4, -4), 1);
  auto ut = yoneda_coordinates(d.s, d.ext, 1, 0, u, 2, -2, u);
  EXPECT_FALSE(ut.empty());
}

TEST(Yoneda, ProductIsAssociativeOnClasses) {
  auto& d = dual4();
  SVec u = unit_vector(0);
  // (x·u)·t = x·(u·t) with x ∈ HH^0 of internal degree 1.
  auto xu = yoneda_coordinates(d.s, d.ext, 0, 1, u, 1, 0, u);
  auto ut = yoneda_coordinates(d.s, d.ext, 1, 0, u, 2, -2, u);
  auto lhs = xu.empty() ? SVec{} : yoneda_coordinates(d.s, d.ext, 1, 1, xu, 2, -2, u);
  auto rhs = yoneda_coordinates(d.s, d.ext, 0, 1, u, 3, -2, ut);
  EXPECT_EQ(lhs, rhs);
}

TEST(Transversality, FlatAndNonFlat) {
  auto flat = transversality_check(over_ground(dual_numbers()), 2, 6);
  EXPECT_EQ(flat.total(1), 0);
  EXPECT_EQ(flat.total(0), 4);
  auto Lx = polynomial({"x"});
  auto D = dual_numbers();
  RingMorphism q(Lx, D, {D->var("x")});
  auto t = transversality_check(q, 2, 8);
  // B ⊗^L_{K[x]} B for B = K[x]/(x^2): Tor_1 = B shifted by deg x^2.
  EXPECT_EQ(t.total(0), 2);
  EXPECT_EQ(t.total(1), 2);
  EXPECT_EQ(t.total(2), 0);
}

TEST(Shamash, ResolvesWithAlternatingMaps) {
  auto L = polynomial({"x", "y"});
  auto E = eisenbud_shamash({L, L->parse("x*y"), {0}, {1}, {{L->var("x")}}}, 6);
  ASSERT_TRUE(E.exact);
  ASSERT_EQ(E.psi.size(), 1u);
  EXPECT_EQ(E.psi[0][0], L->var("y"));
  EXPECT_EQ(E.betti(), (std::vector<int>(7, 1)));
}

TEST(Shamash, FreeModuleHasLengthZeroMinimalResolution) {
  auto L = polynomial({"x"});
  // coker(x^2 : Λ → Λ) over Λ/(x^2) is free of rank one.
  auto E = eisenbud_shamash({L, L->parse("x^2"), {0}, {2}, {{L->parse("x^2")}}}, 6);
  ASSERT_TRUE(E.exact);
  auto b = E.betti();
  ASSERT_FALSE(b.empty());
  EXPECT_EQ(b[0], 1);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_EQ(b[i], 0) << i;
}

TEST(Transport, ResidueFieldAndSelf) {
  auto D = dual_numbers();
  auto f = over_ground(D);
  auto s = build_setup(f, default_bounds(f, 5));
  auto T = transport(s, self_module(s));
  EXPECT_TRUE(T.counit_unit_identity);
  EXPECT_TRUE(T.cone_acyclic);
  auto E = eisenbud_shamash({polynomial({"x"}), polynomial({"x"})->parse("x^2"), {0}, {1}, {{polynomial({"x"})->var("x")}}}, 5);
  auto TK = transport(s, free_complex_module(s.B, E.full));
  EXPECT_TRUE(TK.counit_unit_identity);
  EXPECT_TRUE(TK.cone_acyclic);
}

TEST(Chi, UnitGoesToIdentityAndImageIsCentral) {
  auto Lx = polynomial({"x"});
  auto E = eisenbud_shamash({Lx, Lx->parse("x^2"), {0}, {1}, {{Lx->var("x")}}}, 6);
  auto f = over_ground(E.ring);
  auto s = build_setup(f, default_bounds(f, 6));
  auto P = free_complex_module(s.B, E.full);
  auto T = transport(s, P);
  ExtSpace hh(s.P, over_S(s, self_module(s)));
  auto eps = resolution_augmentation(E, P);
  ExtSpace ext(P, E.module);

  auto chi1 = chi_evaluate(s, T, hh.basis_class(0, 0, 0));
  EXPECT_EQ(ext.coordinates(eps.after(chi1)), ext.coordinates(eps));

  // χ(g) ∘ α = (−1)^{|g||α|} α ∘ χ(g) on Ext_B(K, K).
  int checked = 0;
  for (auto [n, rg] : std::vector<std::pair<int, int>>{{1, 0}, {2, -2}}) {
    auto chi = chi_evaluate(s, T, hh.basis_class(n, rg, 0));
    for (auto [m, ra] : std::vector<std::pair<int, int>>{{1, -1}, {2, -2}}) {
      if (ext.dim(m, ra) == 0 || n + m > 4) continue;
      auto alpha = lift_through(ext.basis_class(m, ra, 0), P, eps);
      SVec lhs = ext.coordinates(eps.after(chi.after(alpha)));
      SVec rhs = ext.coordinates(eps.after(alpha.after(chi)));
      if ((n * m) % 2) rhs = scaled(rhs, Scalar(-1));
      EXPECT_EQ(lhs, rhs) << "g degree " << n << ", alpha degree " << m;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}
