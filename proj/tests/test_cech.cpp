#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dgcohom;
using namespace dgtest;

namespace {

/// Seven-vertex triangulation of the torus.
Nerve torus() {
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < 7; ++i) {
    faces.push_back({i, (i + 1) % 7, (i + 3) % 7});
    faces.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  for (auto& f : faces) std::sort(f.begin(), f.end());
  return Nerve(7, faces);
}

/// K ⊗ K → K on a two-factor cochain of the constant diagram.
TensorCochain collapse(const TensorCochain& x) {
  TensorCochain out;
  for (auto& [k, c] : x.terms) out.add({k.first, {{0, 0}}}, c);
  return out;
}

std::vector<std::vector<int>> product_frames(const ChartedSpace& X, int a, int b) {
  std::vector<std::vector<int>> frames;
  for (auto& ch : X.charts()) frames.push_back({ch.signs[0] > 0 ? 0 : a, ch.signs[1] > 0 ? 0 : b});
  return frames;
}

}  // namespace

TEST(Nerve, ClosedUnderFaces) {
  Nerve N(4, {{0, 1, 2}, {2, 3}});
  EXPECT_EQ(N.of_dim(0).size(), 4u);
  EXPECT_EQ(N.of_dim(1).size(), 4u);
  EXPECT_EQ(N.of_dim(2).size(), 1u);
  EXPECT_GE(N.index({0, 2}), 0);
  EXPECT_EQ(N.index({1, 3}), -1);
  EXPECT_EQ(Nerve::full(3).size(), 7);
  EXPECT_EQ(Nerve::discrete(3).size(), 3);
}

TEST(Cech, ConstantCoefficientsComputeSimplicialCohomology) {
  BoundedComplex K(0, 0, {1});
  auto T = constant_diagram(torus(), K);
  EXPECT_TRUE(T.functorial());
  auto C = cech_complex(T);
  EXPECT_NO_THROW(C.check());
  auto H = cohomology(C);
  EXPECT_EQ(H.dim(0), 1);
  EXPECT_EQ(H.dim(1), 2);
  EXPECT_EQ(H.dim(2), 1);
  EXPECT_EQ(C.euler_characteristic(), 0);

  Nerve sphere(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  auto S = cohomology(cech_complex(constant_diagram(sphere, K)));
  EXPECT_EQ(S.dim(0), 1);
  EXPECT_EQ(S.dim(1), 0);
  EXPECT_EQ(S.dim(2), 1);
}

TEST(Cech, CupProductGradedCommutativeOnCohomology) {
  BoundedComplex K(0, 0, {1});
  auto T = constant_diagram(torus(), K);
  auto C = cech_complex(T);
  auto H = cohomology(C);
  const auto& h1 = H.at(1).classes.representatives();
  const auto& h2 = H.at(2).classes;
  ASSERT_EQ(h1.size(), 2u);
  std::vector<const SimplicialModule*> one{&T};
  bool nondegenerate = false;
  for (auto& a : h1)
    for (auto& b : h1) {
      auto s = cochain_from_vector(T, 1, a), t = cochain_from_vector(T, 1, b);
      SVec st = cochain_to_vector(T, 2, collapse(alexander_whitney(one, s, one, t)));
      SVec ts = cochain_to_vector(T, 2, collapse(alexander_whitney(one, t, one, s)));
      EXPECT_TRUE(h2.in_boundaries(add_scaled(st, ts, 1)));
      EXPECT_TRUE(h2.in_cycles(st));
      nondegenerate = nondegenerate || !h2.in_boundaries(st);
    }
  EXPECT_TRUE(nondegenerate);
}

TEST(Cech, LeibnizRuleForCupProduct) {
  BoundedComplex C(0, 1, {2, 1});
  C.set_d(0, SparseMatrix::from_dense({{1, 2}}));
  auto X = ChartedSpace::projective_line();
  auto M = twisted(C, X.line_bundle(ChartedSpace::twist(1), 2));
  auto N = twisted(C, X.line_bundle(ChartedSpace::twist(-2), 2));
  std::mt19937_64 rng(41);
  std::vector<const SimplicialModule*> fm{&M}, fn{&N}, fmn{&M, &N};
  int checked = 0;
  for (int it = 0; it < 120; ++it) {
    int sm = static_cast<int>(rng() % M.nerve().size()), nm = static_cast<int>(rng() % 2);
    int sn = static_cast<int>(rng() % N.nerve().size()), nn = static_cast<int>(rng() % 2);
    if (M.dim(sm, nm) == 0 || N.dim(sn, nn) == 0) continue;
    TensorCochain s, t;
    s.add({sm, {{nm, static_cast<int>(rng() % M.dim(sm, nm))}}}, Scalar(1 + static_cast<long>(rng() % 3)));
    t.add({sn, {{nn, static_cast<int>(rng() % N.dim(sn, nn))}}}, Scalar(1 + static_cast<long>(rng() % 3)));
    int deg = static_cast<int>(M.nerve().simplex(sm).size()) - 1 + nm;
    auto lhs = cech_differential(fmn, alexander_whitney(fm, s, fn, t));
    auto rhs = alexander_whitney(fm, cech_differential(fm, s), fn, t);
    for (auto& [k, c] : alexander_whitney(fm, s, fn, cech_differential(fn, t)).terms) rhs.add(k, deg % 2 ? -c : c);
    EXPECT_TRUE(lhs == rhs);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Cech, SingleFactorDifferentialMatchesTotalComplex) {
  BoundedComplex C(0, 1, {2, 1});
  C.set_d(0, SparseMatrix::from_dense({{1, 2}}));
  auto X = ChartedSpace::projective_line();
  auto M = twisted(C, X.line_bundle(ChartedSpace::twist(1), 2));
  auto CC = cech_complex(M);
  std::vector<const SimplicialModule*> fm{&M};
  for (int t = CC.n_min(); t < CC.n_max(); ++t)
    for (int i = 0; i < CC.dim(t); ++i) {
      auto x = cochain_from_vector(M, t, unit_vector(i));
      EXPECT_EQ(cochain_to_vector(M, t + 1, cech_differential(fm, x)), CC.d(t).column(i));
    }
}

TEST(Cech, LineBundleTransitionsAreFunctorial) {
  auto X = ChartedSpace::projective_line();
  for (int n = -3; n <= 3; ++n) {
    auto L = X.line_bundle(ChartedSpace::twist(n), 5);
    EXPECT_TRUE(L.functorial());
    EXPECT_TRUE(X.cocycle_condition(L));
    EXPECT_TRUE(X.frames_compatible(ChartedSpace::twist(n)));
  }
  auto Y = ChartedSpace::projective_line_squared();
  auto L = Y.line_bundle(product_frames(Y, 1, -2), 4);
  EXPECT_TRUE(L.functorial());
  EXPECT_TRUE(Y.cocycle_condition(L));
}

TEST(Cech, ProductOfProjectiveLinesIsKunneth) {
  auto X = ChartedSpace::projective_line();
  auto Y = ChartedSpace::projective_line_squared();
  auto h = [&](int n) { return line_bundle_cohomology(X, ChartedSpace::twist(n), 6).h; };
  for (int a = -3; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      auto H = line_bundle_cohomology(Y, product_frames(Y, a, b), 5);
      EXPECT_TRUE(H.stable);
      auto ha = h(a), hb = h(b);
      for (int k = 0; k <= 2; ++k) {
        int expected = 0;
        for (int i = 0; i <= k; ++i)
          if (i < 2 && k - i < 2) expected += ha[i] * hb[k - i];
        int got = k < static_cast<int>(H.h.size()) ? H.h[k] : 0;
        EXPECT_EQ(got, expected) << "O(" << a << "," << b << ") h^" << k;
      }
    }
}

TEST(Cech, WindowedLineBundleTransitionsAreNotQuasiIsos) {
  auto L = ChartedSpace::projective_line().line_bundle(ChartedSpace::twist(0), 3);
  auto adj = adjunction_check(L);
  EXPECT_FALSE(adj.transitions_quasiiso);
}

TEST(Glued, ProjectiveLineAndItsSquare) {
  auto G = glued_hochschild(ChartedSpace::projective_line(), 2, 5);
  EXPECT_EQ(G.report.totals(), (std::vector<int>{1, 3, 0}));
  EXPECT_TRUE(G.charts_verified);
  EXPECT_TRUE(G.stable);
  auto G2 = glued_hochschild(ChartedSpace::projective_line_squared(), 2, 4);
  EXPECT_EQ(G2.report.totals(), (std::vector<int>{1, 6, 9}));
}

TEST(Glued, DisjointChartsAdd) {
  auto K = ground();
  RingMorphism pt(K, K, {});
  auto two = glued_hochschild(std::vector<RingMorphism>{pt, pt}, 2);
  EXPECT_EQ(two.totals(), (std::vector<int>{2, 0, 0}));
  auto D = dual_numbers();
  auto mixed = glued_hochschild(std::vector<RingMorphism>{pt, over_ground(D)}, 2);
  EXPECT_EQ(mixed.totals(), (std::vector<int>{3, 1, 1}));
}
