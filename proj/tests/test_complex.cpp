#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dgcohom;

namespace {

SparseMatrix inverse(const SparseMatrix& m) {
  SparseMatrix inv(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i) inv.set_column(i, solve(m, unit_vector(i)).value());
  return inv;
}

SparseMatrix random_invertible(std::mt19937_64& rng, int n) {
  SparseMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    SVec col{{j, Scalar(1)}};
    for (int i = j + 1; i < n; ++i) col.push_back({i, Scalar(static_cast<long>(rng() % 5) - 2)});
    m.set_column(j, make_svec(col));
  }
  // Mix rows as well so the result is not triangular.
  SparseMatrix u(n, n);
  for (int j = 0; j < n; ++j) {
    SVec col;
    for (int i = 0; i < j; ++i) col.push_back({i, Scalar(static_cast<long>(rng() % 3) - 1)});
    col.push_back({j, Scalar(1)});
    u.set_column(j, make_svec(col));
  }
  return u * m;
}

/// Random complex on [0, top] with prescribed cohomology, in a scrambled basis.
struct KnownComplex {
  BoundedComplex complex;
  std::vector<int> h;
};

KnownComplex random_complex(std::mt19937_64& rng, int top) {
  std::vector<int> h(top + 1), a(top + 1, 0);
  for (int n = 0; n <= top; ++n) {
    h[n] = static_cast<int>(rng() % 3);
    if (n < top) a[n] = static_cast<int>(rng() % 3);
  }
  std::vector<int> dims(top + 1);
  for (int n = 0; n <= top; ++n) dims[n] = h[n] + a[n] + (n > 0 ? a[n - 1] : 0);
  std::vector<SparseMatrix> P, Pinv;
  for (int n = 0; n <= top; ++n) {
    P.push_back(random_invertible(rng, dims[n]));
    Pinv.push_back(inverse(P.back()));
  }
  BoundedComplex C(0, top, dims);
  for (int n = 0; n < top; ++n) {
    SparseMatrix E(dims[n + 1], dims[n]);
    for (int i = 0; i < a[n]; ++i) E.set_column(h[n] + i, unit_vector(h[n + 1] + a[n + 1] + i));
    C.set_d(n, P[n + 1] * E * Pinv[n]);
  }
  return {C, h};
}

}  // namespace

TEST(BoundedComplex, RandomComplexesHaveKnownCohomology) {
  std::mt19937_64 rng(10);
  for (int it = 0; it < 30; ++it) {
    auto K = random_complex(rng, 3);
    EXPECT_NO_THROW(K.complex.check());
    auto H = cohomology(K.complex);
    int chi = 0;
    for (int n = 0; n <= 3; ++n) {
      EXPECT_EQ(H.dim(n), K.h[n]);
      chi += (n % 2 ? -1 : 1) * K.h[n];
    }
    EXPECT_EQ(K.complex.euler_characteristic(), chi);
  }
}

TEST(BoundedComplex, CheckRejectsNonComplex) {
  BoundedComplex C(0, 2, {1, 1, 1});
  C.set_d(0, SparseMatrix::identity(1));
  C.set_d(1, SparseMatrix::identity(1));
  EXPECT_THROW(C.check(), IntegrityError);
}

TEST(BoundedComplex, TensorIsKunneth) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 15; ++it) {
    auto A = random_complex(rng, 2), B = random_complex(rng, 2);
    auto T = tensor_complex(A.complex, B.complex);
    EXPECT_NO_THROW(T.check());
    auto H = cohomology(T);
    for (int n = 0; n <= 4; ++n) {
      int expected = 0;
      for (int i = 0; i <= n; ++i)
        if (i <= 2 && n - i <= 2) expected += A.h[i] * B.h[n - i];
      EXPECT_EQ(H.dim(n), expected);
    }
    EXPECT_EQ(T.euler_characteristic(), A.complex.euler_characteristic() * B.complex.euler_characteristic());
  }
}

TEST(BoundedComplex, HomCohomologyIsHomOfCohomology) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 15; ++it) {
    auto A = random_complex(rng, 2), B = random_complex(rng, 2);
    auto Hm = hom_complex(A.complex, B.complex);
    EXPECT_NO_THROW(Hm.check());
    auto H = cohomology(Hm);
    for (int n = Hm.n_min(); n <= Hm.n_max(); ++n) {
      int expected = 0;
      for (int k = 0; k <= 2; ++k)
        if (k + n >= 0 && k + n <= 2) expected += A.h[k] * B.h[k + n];
      EXPECT_EQ(H.dim(n), expected) << "n=" << n;
    }
  }
}

TEST(BoundedComplex, TensorHomAdjunctionDimensions) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 8; ++it) {
    auto A = random_complex(rng, 1), B = random_complex(rng, 1), C = random_complex(rng, 1);
    auto lhs = hom_complex(tensor_complex(A.complex, B.complex), C.complex);
    auto rhs = hom_complex(A.complex, hom_complex(B.complex, C.complex));
    auto hl = cohomology(lhs), hr = cohomology(rhs);
    for (int n = std::min(lhs.n_min(), rhs.n_min()); n <= std::max(lhs.n_max(), rhs.n_max()); ++n) {
      int dl = lhs.in_window(n) ? lhs.dim(n) : 0, dr = rhs.in_window(n) ? rhs.dim(n) : 0;
      EXPECT_EQ(dl, dr) << "n=" << n;
      int cl = lhs.in_window(n) ? hl.dim(n) : 0, cr = rhs.in_window(n) ? hr.dim(n) : 0;
      EXPECT_EQ(cl, cr) << "n=" << n;
    }
  }
}

TEST(ChainMap, ConeAcyclicIffQuasiIso) {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 15; ++it) {
    auto A = random_complex(rng, 2);
    const BoundedComplex& C = A.complex;
    ChainMap id(&C, &C, 0), zero(&C, &C, 0);
    for (int n = 0; n <= 2; ++n) {
      id.set(n, SparseMatrix::identity(C.dim(n)));
      zero.set(n, SparseMatrix(C.dim(n), C.dim(n)));
    }
    ASSERT_TRUE(id.commutes());
    ASSERT_TRUE(zero.commutes());
    EXPECT_TRUE(is_quasiiso(id, 0, 2).iso);
    auto cid = cohomology(cone(id));
    for (int n = cone(id).n_min(); n <= cone(id).n_max(); ++n) EXPECT_EQ(cid.dim(n), 0);
    bool acyclic_homology = A.h[0] + A.h[1] + A.h[2] == 0;
    EXPECT_EQ(is_quasiiso(zero, 0, 2).iso, acyclic_homology);
    auto cz = cohomology(cone(zero));
    bool cone_acyclic = true;
    for (int n = cone(zero).n_min(); n <= cone(zero).n_max(); ++n) cone_acyclic = cone_acyclic && cz.dim(n) == 0;
    EXPECT_EQ(cone_acyclic, acyclic_homology);
  }
}

TEST(ChainMap, NonCommutingMapDetected) {
  BoundedComplex C(0, 1, {1, 1});
  C.set_d(0, SparseMatrix::identity(1));
  BoundedComplex D(0, 1, {1, 1});
  ChainMap f(&C, &D, 0);
  f.set(0, SparseMatrix(1, 1));
  f.set(1, SparseMatrix::identity(1));
  EXPECT_FALSE(f.commutes());
}

TEST(FreeComplex, KoszulOnRegularSequenceResolvesResidueField) {
  auto L = dgtest::polynomial({"x", "y"});
  FreeComplex K(L, -2, 0);
  K.set_generators(-2, {2});
  K.set_generators(-1, {1, 1});
  K.set_generators(0, {0});
  Poly x = L->var("x"), y = L->var("y");
  K.set_d(-2, {{y, -x}});
  K.set_d(-1, {{x}, {y}});
  EXPECT_NO_THROW(K.check());
  for (int q = 0; q <= 5; ++q) {
    auto H = cohomology(K.materialize(q));
    EXPECT_EQ(H.dim(-2), 0);
    EXPECT_EQ(H.dim(-1), 0);
    EXPECT_EQ(H.dim(0), q == 0 ? 1 : 0);
  }
}

TEST(FreeComplex, UnitIsNeutralForTensor) {
  auto D = dgtest::dual_numbers();
  std::mt19937_64 rng(15);
  auto C = dgtest::random_dual_complex(D, rng, 2);
  auto T = tensor_complex(unit_complex(D), C);
  EXPECT_NO_THROW(T.check());
  for (int q = 0; q <= 4; ++q) {
    auto a = cohomology(C.materialize(q)), b = cohomology(T.materialize(q));
    EXPECT_EQ(a.dims(), b.dims());
  }
  auto Hm = hom_complex(C, C);
  EXPECT_NO_THROW(Hm.check());
}
