#include "dgcohom/shamash.hpp"

#include <algorithm>
#include <climits>

#include "dgcohom/errors.hpp"

namespace dgcohom {

namespace {

Scalar sign_of(int e) { return (e & 1) ? Scalar(-1) : Scalar(1); }

bool is_unit_constant(const Poly& p) {
  return p.ring() && p.size() == 1 && p.terms().begin()->first.is_one() && !p.terms().begin()->second.is_zero();
}

/// Degree-indexed copy of a free complex, for elimination.
struct FreeData {
  int n_min = 0;
  std::vector<std::vector<int>> gens;
  std::vector<std::vector<std::vector<Poly>>> d;  // d[n - n_min]: columns per source generator
};

}  // namespace

SemifreePtr free_complex_module(const DGAPtr& ring, const FreeComplex& C) {
  std::vector<SemifreeGenerator> gens;
  std::map<std::pair<int, int>, int> index;
  for (int n = C.n_max(); n >= C.n_min(); --n) {
    const auto& g = C.generators(n);
    for (std::size_t j = 0; j < g.size(); ++j) {
      SemifreeGenerator s;
      s.name = "c" + std::to_string(n) + "." + std::to_string(j);
      s.hom = n;
      s.weight = g[j];
      if (n < C.n_max()) {
        const auto& cols = C.d(n);
        for (std::size_t i = 0; i < cols[j].size(); ++i) {
          const Poly& c = cols[j][i];
          if (!c.ring() || c.is_zero()) continue;
          s.d.emplace_back(index.at({n + 1, static_cast<int>(i)}), c);
        }
      }
      index[{n, static_cast<int>(j)}] = static_cast<int>(gens.size());
      gens.push_back(std::move(s));
    }
  }
  return std::make_shared<const SemifreeModule>(ring, gens);
}

FreeComplex minimize(const FreeComplex& C) {
  const auto& R = C.ring();
  FreeData D;
  D.n_min = C.n_min();
  for (int n = C.n_min(); n <= C.n_max(); ++n) {
    D.gens.push_back(C.generators(n));
    D.d.push_back(n < C.n_max() ? C.d(n) : std::vector<std::vector<Poly>>{});
  }
  const int len = static_cast<int>(D.gens.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t + 1 < len && !changed; ++t) {
      auto& cols = D.d[static_cast<std::size_t>(t)];
      for (std::size_t j = 0; j < cols.size() && !changed; ++j) {
        for (std::size_t i = 0; i < cols[j].size() && !changed; ++i) {
          if (!is_unit_constant(cols[j][i])) continue;
          Scalar cinv = cols[j][i].terms().begin()->second.inverse();
          std::vector<std::vector<Poly>> nd;
          for (std::size_t jj = 0; jj < cols.size(); ++jj) {
            if (jj == j) continue;
            std::vector<Poly> col;
            for (std::size_t ii = 0; ii < cols[jj].size(); ++ii) {
              if (ii == i) continue;
              Poly e = cols[jj][ii];
              if (!e.ring()) e = R->zero();
              if (cols[jj][i].ring() && !cols[jj][i].is_zero() && cols[j][ii].ring() && !cols[j][ii].is_zero())
                e -= R->multiply(cols[jj][i], cols[j][ii]).scaled(cinv);
              col.push_back(R->normal_form(e));
            }
            nd.push_back(std::move(col));
          }
          cols = std::move(nd);
          auto& gs = D.gens[static_cast<std::size_t>(t)];
          gs.erase(gs.begin() + static_cast<long>(j));
          auto& gt = D.gens[static_cast<std::size_t>(t + 1)];
          gt.erase(gt.begin() + static_cast<long>(i));
          if (t > 0)
            for (auto& col : D.d[static_cast<std::size_t>(t - 1)]) col.erase(col.begin() + static_cast<long>(j));
          if (t + 2 < len) {
            auto& up = D.d[static_cast<std::size_t>(t + 1)];
            up.erase(up.begin() + static_cast<long>(i));
          }
          changed = true;
        }
      }
    }
  }
  int lo = 0;
  while (lo < len - 1 && D.gens[static_cast<std::size_t>(lo)].empty()) ++lo;
  int hi = len - 1;
  while (hi > lo && D.gens[static_cast<std::size_t>(hi)].empty()) --hi;
  FreeComplex out(R, D.n_min + lo, D.n_min + hi);
  for (int t = lo; t <= hi; ++t) out.set_generators(D.n_min + t, D.gens[static_cast<std::size_t>(t)]);
  for (int t = lo; t < hi; ++t) out.set_d(D.n_min + t, D.d[static_cast<std::size_t>(t)]);
  return out;
}

std::vector<int> PeriodicResolution::betti() const {
  std::vector<int> b;
  for (int n = 0; n >= -length; --n) b.push_back(n >= minimal.n_min() && n <= minimal.n_max() ? minimal.rank(n) : 0);
  return b;
}

PeriodicResolution eisenbud_shamash(const HypersurfaceModule& M, int length) {
  if (length < 1) throw StructuralError("resolution length must be positive");
  const auto& L = M.ambient;
  for (std::size_t i = 0; i < L->nvars(); ++i)
    if (L->ring()->var(i).hom != 0) throw StructuralError("hypersurface ring must be commutative");
  if (M.f.is_zero() || !M.f.is_homogeneous()) throw StructuralError("hypersurface equation must be nonzero and homogeneous");
  const int df = M.f.internal_degree();
  const auto& a = M.f0_degrees;
  const auto& b = M.f1_degrees;
  if (M.phi.size() != b.size()) throw StructuralError("presentation needs one column per relation");
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (M.phi[j].size() != a.size()) throw StructuralError("presentation column has the wrong length");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Poly& p = M.phi[j][i];
      if (p.ring() && !p.is_zero() && (!p.is_homogeneous() || p.internal_degree() != b[j] - a[i]))
        throw StructuralError("presentation matrix is not homogeneous");
    }
  }

  // ψ column by column: φ(ψ e_i) = f e_i.
  auto f1_offsets = [&](int t) {
    std::vector<int> off;
    int s = 0;
    for (int bj : b) {
      off.push_back(s);
      s += L->dim(0, t - bj);
    }
    off.push_back(s);
    return off;
  };
  auto f0_offsets = [&](int t) {
    std::vector<int> off;
    int s = 0;
    for (int ai : a) {
      off.push_back(s);
      s += L->dim(0, t - ai);
    }
    off.push_back(s);
    return off;
  };
  auto phi_matrix = [&](int t) {
    auto o1 = f1_offsets(t), o0 = f0_offsets(t);
    SparseMatrix m(o0.back(), o1.back());
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto& basis = L->basis(0, t - b[j]);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        std::vector<std::pair<int, Scalar>> col;
        Poly mono = Poly::monomial(L->ring(), basis[k], 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
          const Poly& p = M.phi[j][i];
          if (!p.ring() || p.is_zero()) continue;
          for (auto& [r, c] : L->to_vector(L->multiply(mono, p), 0, t - a[i])) col.emplace_back(r + o0[i], c);
        }
        m.set_column(o1[j] + static_cast<int>(k), make_svec(std::move(col)));
      }
    }
    return m;
  };

  PeriodicResolution E;
  E.length = length;
  E.f_degree = df;
  std::vector<Poly> rels = L->relations();
  rels.push_back(M.f);
  E.ring = QuotientRing::make(L->name() + "/(f)", L->ring(), rels, L->filtration_mode());
  E.algebra = algebra_of_ring(E.ring);
  E.psi.assign(a.size(), std::vector<Poly>(b.size(), L->zero()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    int t = a[i] + df;
    auto o1 = f1_offsets(t), o0 = f0_offsets(t);
    SVec rhs = shifted(L->to_vector(M.f, 0, df), o0[i]);
    auto sol = solve(phi_matrix(t), rhs);
    if (!sol) throw StructuralError("f does not annihilate the module");
    for (std::size_t j = 0; j < b.size(); ++j) {
      SVec part;
      for (const auto& [r, c] : *sol)
        if (r >= o1[j] && r < o1[j + 1]) part.emplace_back(r - o1[j], c);
      E.psi[i][j] = L->from_vector(part, 0, t - b[j]);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t jj = 0; jj < b.size(); ++jj) {
      Poly s = L->zero();
      for (std::size_t i = 0; i < a.size(); ++i)
        if (M.phi[j][i].ring() && !M.phi[j][i].is_zero()) s += L->multiply(M.phi[j][i], E.psi[i][jj]);
      Poly want = j == jj ? M.f : L->zero();
      if (L->normal_form(s - want) != L->zero())
        throw StructuralError("presentation is not a matrix factorization of f");
    }
  }

  const auto& B = E.ring;
  auto reduce_cols = [&](const std::vector<std::vector<Poly>>& cols) {
    std::vector<std::vector<Poly>> out;
    for (const auto& col : cols) {
      std::vector<Poly> c;
      for (const auto& p : col) c.push_back(p.ring() ? B->normal_form(p) : B->zero());
      out.push_back(std::move(c));
    }
    return out;
  };
  E.full = FreeComplex(B, -length, 0);
  for (int m = 0; m <= length; ++m) {
    int s = (m / 2) * df;
    std::vector<int> g;
    for (int d0 : (m % 2 == 0 ? a : b)) g.push_back(d0 + s);
    E.full.set_generators(-m, g);
  }
  for (int m = 1; m <= length; ++m) E.full.set_d(-m, reduce_cols(m % 2 == 1 ? M.phi : E.psi));
  E.full.check();
  E.minimal = minimize(E.full);
  E.module = std::make_shared<const QuotientModule>(E.algebra, a, reduce_cols(M.phi));

  int gmax = 0;
  for (int x : a) gmax = std::max(gmax, x);
  for (int x : b) gmax = std::max(gmax, x);
  const int qmax = gmax + (length / 2 + 1) * df;
  E.exact = true;
  for (const FreeComplex* C : {&E.full, &E.minimal}) {
    for (int q = 0; q <= qmax; ++q) {
      BoundedComplex X = C->materialize(q);
      auto rk = [&](int n) { return (n < X.n_min() || n >= X.n_max()) ? 0 : rank(X.d(n)); };
      for (int n = -length + 1; n <= 0; ++n) {
        int h = X.dim(n) - rk(n) - rk(n - 1);
        int want = n == 0 ? E.module->dim(0, q) : 0;
        if (h != want) {
          E.exact = false;
          E.failures.push_back((C == &E.full ? "full" : "minimal") + std::string(" complex: H^") +
                               std::to_string(n) + " in internal degree " + std::to_string(q) + " is " +
                               std::to_string(h) + ", expected " + std::to_string(want));
        }
      }
    }
  }
  return E;
}

SemifreeMorphism periodicity_operator(const PeriodicResolution& E, const SemifreePtr& module) {
  const int df = E.f_degree;
  std::map<std::pair<int, int>, int> index;
  int idx = 0;
  for (int n = 0; n >= -E.length; --n)
    for (int j = 0; j < E.full.rank(n); ++j) index[{n, j}] = idx++;
  std::vector<SVec> vals(module->size());
  for (int n = -2; n >= -E.length; --n)
    for (int j = 0; j < E.full.rank(n); ++j) {
      int t = index.at({n + 2, j});
      const auto& g = module->generators()[static_cast<std::size_t>(t)];
      vals[static_cast<std::size_t>(index.at({n, j}))] =
          module->embed(t, E.ring->one(), g.hom, g.weight);
    }
  return SemifreeMorphism(module, module, 2, -df, vals);
}

SemifreeMorphism resolution_augmentation(const PeriodicResolution& E, const SemifreePtr& module) {
  auto Q = std::dynamic_pointer_cast<const QuotientModule>(E.module);
  std::vector<SVec> vals(module->size());
  const auto& g0 = E.full.generators(0);
  for (std::size_t i = 0; i < g0.size(); ++i) {
    std::vector<Poly> coeffs(g0.size(), E.ring->zero());
    coeffs[i] = E.ring->one();
    vals[i] = Q->element(coeffs, g0[i]);
  }
  return SemifreeMorphism(module, E.module, 0, 0, vals);
}

// ------------------------------------------------------------ transport

TransportModule::TransportModule(const HochschildSetup& setup, ModPtr M)
    : DGModule(setup.B), setup_(&setup), M_(std::move(M)), B_(setup.B) {
  if (setup.f.source()->nvars() != 0) throw StructuralError("transport is implemented over the ground field only");
  if (M_->algebra()->poly_ring() != B_->poly_ring()) throw StructuralError("transport needs a module over the target ring");
  auto top = AlgebraModule(B_).internal_max();
  if (!top) throw OracleUnavailable("transport needs a finite-dimensional algebra");
  top_ = *top;
  const auto& S = *setup.env.S;
  copy_.assign(S.nvars(), 0);
  counit_.assign(S.nvars(), B_->ring()->zero());
  const auto& R = *setup.tate.algebra;
  for (std::size_t i = 0; i < R.nvars(); ++i) {
    const Poly& eps = setup.tate.augmentation.images()[i];
    for (int c = 1; c <= 2; ++c) {
      const Poly& im = (c == 1 ? setup.env.j1 : setup.env.j2).images()[i];
      auto s = im.terms().begin()->first.support();
      auto v = static_cast<std::size_t>(s[0].first);
      if (copy_[v] == 0) copy_[v] = c;
      counit_[v] = eps;
    }
  }
}

int TransportModule::hom_min() const { return M_->hom_min() - setup_->bounds.hom_bound; }

std::optional<int> TransportModule::internal_max() const {
  auto m = M_->internal_max();
  if (!m) return std::nullopt;
  int w = 0;
  for (const auto& g : setup_->P->generators()) w = std::max(w, g.weight);
  return *m + w + top_;
}

int TransportModule::complete_from() const { return M_->hom_max() - setup_->bounds.hom_bound; }

const TransportModule::Layout& TransportModule::layout(int n, int q) const {
  auto key = std::make_pair(n, q);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = layouts_.find(key);
  if (it != layouts_.end()) return it->second;
  Layout L;
  const auto& gens = setup_->P->generators();
  for (int a = M_->hom_max(); a >= M_->hom_min(); --a) {
    for (std::size_t w = 0; w < gens.size(); ++w) {
      if (gens[w].hom != n - a) continue;
      for (int qb = 0; qb <= top_; ++qb) {
        int qm = q - gens[w].weight - qb;
        int dm = M_->dim(a, qm), db = B_->dim(0, qb);
        if (dm == 0 || db == 0) continue;
        L.blocks.push_back({a, qm, static_cast<int>(w), qb, L.dim, dm, db});
        L.dim += dm * db;
      }
    }
  }
  return layouts_.emplace(key, std::move(L)).first->second;
}

int TransportModule::dim(int n, int q) const {
  if (n > M_->hom_max() || n < hom_min()) return 0;
  return layout(n, q).dim;
}

int TransportModule::block_offset(int n, int q, int a, int qm, int word, int qb) const {
  for (const auto& bl : layout(n, q).blocks)
    if (bl.a == a && bl.qm == qm && bl.word == word && bl.qb == qb) return bl.offset;
  return -1;
}

std::string TransportModule::label(int n, int q, int j) const {
  for (const auto& bl : layout(n, q).blocks) {
    if (j < bl.offset || j >= bl.offset + bl.dm * bl.db) continue;
    int im = (j - bl.offset) / bl.db, ib = (j - bl.offset) % bl.db;
    return M_->label(bl.a, bl.qm, im) + "⊗" + setup_->P->generators()[static_cast<std::size_t>(bl.word)].name + "⊗" +
           B_->poly_ring()->monomial_string(B_->basis(0, bl.qb)[static_cast<std::size_t>(ib)]);
  }
  return "?";
}

std::pair<Poly, Poly> TransportModule::split_counit(const Monomial& m) const {
  const auto& S = setup_->env.S;
  Poly e1 = B_->ring()->one(), e2 = B_->ring()->one();
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] == 0) continue;
    if (S->poly_ring()->var(v).hom != 0) return {B_->ring()->zero(), B_->ring()->zero()};
    Poly p = B_->ring()->normal_form(counit_[v].pow(m[v]));
    if (copy_[v] == 2) e2 = B_->ring()->multiply(e2, p);
    else e1 = B_->ring()->multiply(e1, p);
  }
  return {e1, e2};
}

void TransportModule::push_terms(const std::vector<std::pair<int, Poly>>& terms, const Scalar& sign, const Block& src,
                                 int im, int ib, int tn, int tq, std::vector<std::pair<int, Scalar>>& out) const {
  const auto& gens = setup_->P->generators();
  SVec m_unit = unit_vector(im);
  Poly b_mono = Poly::monomial(B_->poly_ring(), B_->basis(0, src.qb)[static_cast<std::size_t>(ib)], 1);
  for (const auto& [w2, c] : terms) {
    const auto& g2 = gens[static_cast<std::size_t>(w2)];
    if (src.a + g2.hom != tn) continue;
    for (const auto& [mono, lambda] : c.terms()) {
      auto [e1, e2] = split_counit(mono);
      if (e1.is_zero() || e2.is_zero()) continue;
      int d1 = e1.internal_degree(), d2 = e2.internal_degree();
      SVec mv = M_->act(e1, src.a, src.qm, m_unit);
      if (mv.empty()) continue;
      SVec bv = B_->ring()->to_vector(B_->ring()->multiply(e2, b_mono), 0, src.qb + d2);
      if (bv.empty()) continue;
      int off = block_offset(tn, tq, src.a, src.qm + d1, w2, src.qb + d2);
      if (off < 0) continue;
      int db = B_->dim(0, src.qb + d2);
      for (const auto& [i1, c1] : mv)
        for (const auto& [i2, c2] : bv) out.emplace_back(off + i1 * db + i2, sign * lambda * c1 * c2);
    }
  }
}

SparseMatrix TransportModule::compute_differential(int n, int q) const {
  SparseMatrix D(dim(n + 1, q), dim(n, q));
  if (D.cols() == 0) return D;
  const auto& gens = setup_->P->generators();
  for (const auto& bl : layout(n, q).blocks) {
    const SparseMatrix& dM = M_->differential(bl.a, bl.qm);
    int t1 = block_offset(n + 1, q, bl.a + 1, bl.qm, bl.word, bl.qb);
    for (int im = 0; im < bl.dm; ++im)
      for (int ib = 0; ib < bl.db; ++ib) {
        std::vector<std::pair<int, Scalar>> col;
        if (t1 >= 0)
          for (const auto& [i, c] : dM.column(im)) col.emplace_back(t1 + i * bl.db + ib, c);
        push_terms(gens[static_cast<std::size_t>(bl.word)].d, sign_of(bl.a), bl, im, ib, n + 1, q, col);
        D.set_column(bl.offset + im * bl.db + ib, make_svec(std::move(col)));
      }
  }
  return D;
}

SparseMatrix TransportModule::compute_act_var(std::size_t v, int n, int q) const {
  int w = B_->poly_ring()->var(v).weight;
  SparseMatrix A(dim(n, q + w), dim(n, q));
  if (A.cols() == 0) return A;
  Poly x = Poly::variable(B_->poly_ring(), v);
  for (const auto& bl : layout(n, q).blocks) {
    int t = block_offset(n, q + w, bl.a, bl.qm, bl.word, bl.qb + w);
    int db2 = B_->dim(0, bl.qb + w);
    for (int ib = 0; ib < bl.db; ++ib) {
      Poly b = Poly::monomial(B_->poly_ring(), B_->basis(0, bl.qb)[static_cast<std::size_t>(ib)], 1);
      SVec bv = t < 0 ? SVec{} : B_->ring()->to_vector(B_->ring()->multiply(x, b), 0, bl.qb + w);
      for (int im = 0; im < bl.dm; ++im) {
        std::vector<std::pair<int, Scalar>> col;
        for (const auto& [i2, c] : bv) col.emplace_back(t + im * db2 + i2, c);
        A.set_column(bl.offset + im * bl.db + ib, make_svec(std::move(col)));
      }
    }
  }
  return A;
}

SparseMatrix TransportModule::unit(int n, int q) const {
  SparseMatrix U(dim(n, q), M_->dim(n, q));
  int off = U.rows() == 0 ? -1 : block_offset(n, q, n, q, 0, 0);
  for (int j = 0; j < U.cols(); ++j) U.set_column(j, unit_vector(off + j * B_->dim(0, 0)));
  return U;
}

SparseMatrix TransportModule::counit(int n, int q) const {
  SparseMatrix C(M_->dim(n, q), dim(n, q));
  if (C.cols() == 0) return C;
  for (const auto& bl : layout(n, q).blocks) {
    if (bl.word != 0) continue;
    for (int ib = 0; ib < bl.db; ++ib) {
      Poly b = Poly::monomial(B_->poly_ring(), B_->basis(0, bl.qb)[static_cast<std::size_t>(ib)], 1);
      for (int im = 0; im < bl.dm; ++im) C.set_column(bl.offset + im * bl.db + ib, M_->act(b, bl.a, bl.qm, unit_vector(im)));
    }
  }
  return C;
}

SparseMatrix TransportModule::apply_endomorphism(const SemifreeMorphism& g, int n, int q) const {
  const int k = g.hom_shift(), r = g.internal_shift();
  SparseMatrix G(dim(n + k, q + r), dim(n, q));
  if (G.cols() == 0) return G;
  const auto& P = *setup_->P;
  for (const auto& bl : layout(n, q).blocks) {
    const auto& gw = P.generators()[static_cast<std::size_t>(bl.word)];
    auto terms = P.decompose(g.values()[static_cast<std::size_t>(bl.word)], gw.hom + k, gw.weight + r);
    for (int im = 0; im < bl.dm; ++im)
      for (int ib = 0; ib < bl.db; ++ib) {
        std::vector<std::pair<int, Scalar>> col;
        push_terms(terms, sign_of(k * bl.a), bl, im, ib, n + k, q + r, col);
        G.set_column(bl.offset + im * bl.db + ib, make_svec(std::move(col)));
      }
  }
  return G;
}

Transport transport(const HochschildSetup& setup, const ModPtr& M) {
  Transport T;
  T.module = std::make_shared<const TransportModule>(setup, M);
  auto Tm = T.module;
  T.counit = std::make_shared<const FunctionMap>(Tm, M, 0, 0, [Tm](int n, int q) { return Tm->counit(n, q); });
  auto qtop = M->internal_max();
  if (!qtop) throw OracleUnavailable("transport needs a module bounded in internal degree");
  const int qlo = M->internal_min(), qhi = *Tm->internal_max();
  T.counit_unit_identity = true;
  for (int n = M->hom_min(); n <= M->hom_max(); ++n)
    for (int q = qlo; q <= *qtop; ++q) {
      int d = M->dim(n, q);
      if (d == 0) continue;
      if (!(Tm->counit(n, q) * Tm->unit(n, q) == SparseMatrix::identity(d))) T.counit_unit_identity = false;
    }
  FunctionMap iota(M, Tm, 0, 0, [Tm](int n, int q) { return Tm->unit(n, q); });
  T.cone_acyclic = true;
  int lo = std::max(Tm->complete_from() + 1, M->hom_min() - 1);
  for (int n = lo; n <= M->hom_max(); ++n) {
    T.checked_degrees.push_back(n);
    for (int q = qlo; q <= qhi; ++q) {
      int c = cone_dim(iota, n, q);
      if (c == 0) continue;
      int h = c - rank(cone_differential(iota, n, q)) - rank(cone_differential(iota, n - 1, q));
      if (h != 0) T.cone_acyclic = false;
    }
  }
  if (auto P = std::dynamic_pointer_cast<const SemifreeModule>(M)) {
    std::vector<SVec> id;
    for (std::size_t i = 0; i < P->size(); ++i) {
      const auto& g = P->generators()[i];
      id.push_back(P->embed(static_cast<int>(i), setup.B->ring()->one(), g.hom, g.weight));
    }
    SemifreeMorphism idm(P, M, 0, 0, id);
    T.section = std::make_shared<const SemifreeMorphism>(lift_through(idm, Tm, *T.counit, P->hom_min()));
  }
  return T;
}

SemifreeMorphism chi_evaluate(const HochschildSetup& setup, const Transport& T, const SemifreeMorphism& g) {
  if (!T.section) throw StructuralError("χ needs a semifree module");
  const auto& P = T.section->semifree_source();
  const int k = g.hom_shift(), r = g.internal_shift();
  SemifreeMorphism gl = lift_endomorphism(setup, g, -setup.bounds.hom_bound);
  std::vector<SVec> vals;
  for (std::size_t i = 0; i < P->size(); ++i) {
    const auto& e = P->generators()[i];
    SVec s = T.section->values()[i];
    SVec v = T.module->apply_endomorphism(gl, e.hom, e.weight).apply(s);
    vals.push_back(T.module->counit(e.hom + k, e.weight + r).apply(v));
  }
  SemifreeMorphism chi(P, T.module->base(), k, r, vals);
  if (!chi.is_cocycle()) throw IntegrityError("χ(g) is not a chain map");
  return chi;
}

}  // namespace dgcohom
