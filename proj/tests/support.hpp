#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "dgcohom/cech.hpp"
#include "dgcohom/hochschild.hpp"
#include "dgcohom/shamash.hpp"

namespace dgtest {

using namespace dgcohom;

inline QRingPtr ground(const FieldSpec& F = FieldSpec()) { return QuotientRing::make("K", make_ring(F, {}), {}); }

inline QRingPtr dual_numbers(const FieldSpec& F = FieldSpec()) {
  auto R = make_ring(F, {"x"});
  return QuotientRing::make("D", R, {parse_poly("x^2", R)});
}

/// K[x,y]/(x^2, xy)
inline QRingPtr b3(const FieldSpec& F = FieldSpec()) {
  auto R = make_ring(F, {"x", "y"});
  return QuotientRing::make("B", R, {parse_poly("x^2", R), parse_poly("x*y", R)});
}

inline QRingPtr polynomial(const std::vector<std::string>& vars, const FieldSpec& F = FieldSpec()) {
  return QuotientRing::make("L", make_ring(F, vars), {});
}

inline RingMorphism over_ground(const QRingPtr& B) { return RingMorphism(ground(B->field()), B, {}); }

inline ModPtr self_module(const HochschildSetup& s) { return std::make_shared<const AlgebraModule>(s.B); }

/// Residue field of a graded algebra over itself.
inline ModPtr residue_module(const DGAPtr& B) {
  std::vector<Poly> vars;
  for (std::size_t i = 0; i < B->ncoeff(); ++i) vars.push_back(Poly::variable(B->poly_ring(), i));
  std::vector<std::vector<Poly>> rels;
  for (auto& v : vars) rels.push_back({v});
  return std::make_shared<const QuotientModule>(B, std::vector<int>{0}, rels);
}

/// Random complex of free modules over K[x]/(x^2) on degrees [-length, 0]:
/// degree -m sits in internal degree m and every entry is a multiple of x.
inline FreeComplex random_dual_complex(const QRingPtr& D, std::mt19937_64& rng, int length) {
  FreeComplex fc(D, -length, 0);
  std::vector<int> ranks;
  for (int n = -length; n <= 0; ++n) {
    int r = 1 + static_cast<int>(rng() % 2);
    ranks.push_back(r);
    fc.set_generators(n, std::vector<int>(static_cast<std::size_t>(r), -n));
  }
  Poly x = D->var("x");
  for (int n = -length; n < 0; ++n) {
    std::vector<std::vector<Poly>> cols;
    for (int j = 0; j < fc.rank(n); ++j) {
      std::vector<Poly> col;
      for (int i = 0; i < fc.rank(n + 1); ++i) col.push_back(x.scaled(Scalar(static_cast<long>(rng() % 5) - 2)));
      cols.push_back(col);
    }
    fc.set_d(n, cols);
  }
  return fc;
}

/// Constant complex C tensored with a line bundle L (window [0, 1]).
inline SimplicialModule twisted(const BoundedComplex& C, const SimplicialModule& L) {
  const Nerve& N = L.nerve();
  SimplicialModule M(N, 0, 1);
  for (int s = 0; s < N.size(); ++s) {
    int k = L.dim(s, 0);
    std::vector<int> dims{C.dim(0) * k, C.dim(1) * k};
    BoundedComplex T(0, 1, dims);
    SparseMatrix d(dims[1], dims[0]);
    for (int j = 0; j < C.dim(0); ++j)
      for (int b = 0; b < k; ++b) {
        SVec col;
        for (auto& [r, c] : C.d(0).column(j)) col.emplace_back(r * k + b, c);
        d.set_column(j * k + b, col);
      }
    T.set_d(0, d);
    M.set_complex(s, T);
  }
  for (int a = 0; a < N.size(); ++a)
    for (int b = 0; b < N.size(); ++b) {
      auto& av = N.simplex(a);
      auto& bv = N.simplex(b);
      if (bv.size() != av.size() + 1 || !std::includes(bv.begin(), bv.end(), av.begin(), av.end())) continue;
      auto t = L.transition(a, b, 0);
      for (int n = 0; n < 2; ++n) {
        SparseMatrix m(C.dim(n) * L.dim(b, 0), C.dim(n) * L.dim(a, 0));
        for (int j = 0; j < C.dim(n); ++j)
          for (int x = 0; x < L.dim(a, 0); ++x) {
            SVec col;
            for (auto& [r, c] : t.column(x)) col.emplace_back(j * L.dim(b, 0) + r, c);
            m.set_column(j * L.dim(a, 0) + x, col);
          }
        M.set_face_map(a, b, n, m);
      }
    }
  return M;
}

/// The same complex on every simplex with identity transitions.
inline SimplicialModule constant_diagram(const Nerve& N, const BoundedComplex& C) {
  SimplicialModule M(N, C.n_min(), C.n_max());
  for (int s = 0; s < N.size(); ++s) M.set_complex(s, C);
  for (int a = 0; a < N.size(); ++a)
    for (int b = 0; b < N.size(); ++b) {
      auto& av = N.simplex(a);
      auto& bv = N.simplex(b);
      if (bv.size() != av.size() + 1 || !std::includes(bv.begin(), bv.end(), av.begin(), av.end())) continue;
      for (int n = C.n_min(); n <= C.n_max(); ++n) M.set_face_map(a, b, n, SparseMatrix::identity(C.dim(n)));
    }
  return M;
}

inline SVec random_vector(std::mt19937_64& rng, int dim) {
  SVec v;
  for (int i = 0; i < dim; ++i) v.push_back({i, Scalar(static_cast<long>(rng() % 7) - 3)});
  return make_svec(v);
}

/// Cells as (degree, internal, dim) for nonzero certified dims.
inline std::vector<std::tuple<int, int, int, bool>> cell_table(const HHReport& r) {
  std::vector<std::tuple<int, int, int, bool>> out;
  for (auto& c : r.cells) out.emplace_back(c.degree, c.internal, c.dim, c.certified);
  return out;
}

}  // namespace dgtest
