#include "dgcohom/cech.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "dgcohom/errors.hpp"

namespace dgcohom {

Nerve::Nerve(int vertices, const std::vector<std::vector<int>>& faces) : n_(vertices) {
  std::set<std::vector<int>> all;
  for (auto f : faces) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    for (int v : f)
      if (v < 0 || v >= vertices) throw StructuralError("nerve face uses an unknown vertex");
    std::size_t k = f.size();
    if (k == 0) continue;
    if (k > 20) throw StructuralError("nerve face too large");
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> s;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1u << i)) s.push_back(f[i]);
      all.insert(std::move(s));
    }
  }
  simplices_.assign(all.begin(), all.end());
  std::stable_sort(simplices_.begin(), simplices_.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (int i = 0; i < size(); ++i) {
    const auto& s = simplices_[static_cast<std::size_t>(i)];
    index_[s] = i;
    std::size_t p = s.size() - 1;
    if (by_dim_.size() <= p) by_dim_.resize(p + 1);
    by_dim_[p].push_back(i);
  }
}

Nerve Nerve::full(int vertices) {
  std::vector<int> all(static_cast<std::size_t>(vertices));
  for (int i = 0; i < vertices; ++i) all[static_cast<std::size_t>(i)] = i;
  return Nerve(vertices, {all});
}

Nerve Nerve::discrete(int vertices) {
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < vertices; ++i) faces.push_back({i});
  return Nerve(vertices, faces);
}

const std::vector<int>& Nerve::of_dim(int p) const {
  if (p < 0 || p > max_dim()) return none_;
  return by_dim_[static_cast<std::size_t>(p)];
}

int Nerve::index(const std::vector<int>& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

SimplicialModule::SimplicialModule(Nerve nerve, int n_lo, int n_hi)
    : nerve_(std::move(nerve)), n_lo_(n_lo), n_hi_(n_hi) {
  std::vector<int> zeros(static_cast<std::size_t>(std::max(0, n_hi - n_lo + 1)), 0);
  complexes_.assign(static_cast<std::size_t>(nerve_.size()), BoundedComplex(n_lo, n_hi, zeros));
}

void SimplicialModule::set_complex(int simplex, BoundedComplex C) {
  if (C.n_min() != n_lo_ || C.n_max() != n_hi_) throw StructuralError("simplicial module: complex window mismatch");
  complexes_[static_cast<std::size_t>(simplex)] = std::move(C);
}

void SimplicialModule::set_face_map(int from, int to, int n, SparseMatrix m) {
  const auto& a = nerve_.simplex(from);
  const auto& b = nerve_.simplex(to);
  if (b.size() != a.size() + 1 || !std::includes(b.begin(), b.end(), a.begin(), a.end()))
    throw StructuralError("face map must go to a simplex with one more vertex");
  if (m.rows() != dim(to, n) || m.cols() != dim(from, n)) throw StructuralError("face map has the wrong shape");
  face_[{from, to, n}] = std::move(m);
}

SparseMatrix SimplicialModule::transition(int from, int to, int n) const {
  const auto& a = nerve_.simplex(from);
  const auto& b = nerve_.simplex(to);
  if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) throw StructuralError("transition between non-nested simplices");
  SparseMatrix m = SparseMatrix::identity(dim(from, n));
  std::vector<int> cur = a;
  int ci = from;
  for (int v : b) {
    if (std::binary_search(a.begin(), a.end(), v)) continue;
    std::vector<int> next = cur;
    next.insert(std::upper_bound(next.begin(), next.end(), v), v);
    int ni = nerve_.index(next);
    auto it = face_.find({ci, ni, n});
    if (it != face_.end()) {
      m = it->second * m;
    } else {
      if (dim(ci, n) != 0 && dim(ni, n) != 0) throw StructuralError("missing face map");
      m = SparseMatrix(dim(ni, n), m.cols());
    }
    cur = std::move(next);
    ci = ni;
  }
  return m;
}

bool SimplicialModule::functorial() const {
  for (const auto& [key, m] : face_) {
    auto [from, to, n] = key;
    if (n >= n_hi_) continue;
    SparseMatrix lhs = at(to).d(n) * m;
    SparseMatrix rhs = transition(from, to, n + 1) * at(from).d(n);
    if (!(lhs == rhs)) return false;
  }
  for (int g = 0; g < nerve_.size(); ++g) {
    const auto& c = nerve_.simplex(g);
    if (c.size() < 3) continue;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        std::vector<int> a, ai = c, aj = c;
        for (std::size_t k = 0; k < c.size(); ++k)
          if (k != i && k != j) a.push_back(c[k]);
        ai.erase(ai.begin() + static_cast<long>(j));
        aj.erase(aj.begin() + static_cast<long>(i));
        int ia = nerve_.index(a), ii = nerve_.index(ai), ij = nerve_.index(aj);
        for (int n = n_lo_; n <= n_hi_; ++n) {
          SparseMatrix r1 = transition(ii, g, n) * transition(ia, ii, n);
          SparseMatrix r2 = transition(ij, g, n) * transition(ia, ij, n);
          if (!(r1 == r2)) return false;
        }
      }
  }
  return true;
}

namespace {

int safe_dim(const SimplicialModule& M, int s, int n) {
  return n < M.n_lo() || n > M.n_hi() ? 0 : M.dim(s, n);
}

int cech_dim(const SimplicialModule& M, int t) {
  int total = 0;
  for (int p = 0; p <= M.nerve().max_dim(); ++p)
    for (int s : M.nerve().of_dim(p)) total += safe_dim(M, s, t - p);
  return total;
}

Scalar sign(int e) { return e % 2 ? Scalar(-1) : Scalar(1); }

}  // namespace

int cech_offset(const SimplicialModule& M, int t, int simplex) {
  int off = 0;
  for (int p = 0; p <= M.nerve().max_dim(); ++p)
    for (int s : M.nerve().of_dim(p)) {
      if (s == simplex) return off;
      off += safe_dim(M, s, t - p);
    }
  throw StructuralError("simplex not in nerve");
}

BoundedComplex cech_complex(const SimplicialModule& M) {
  const Nerve& N = M.nerve();
  int lo = M.n_lo(), hi = M.n_hi() + std::max(0, N.max_dim());
  std::vector<int> dims;
  for (int t = lo; t <= hi; ++t) dims.push_back(cech_dim(M, t));
  BoundedComplex C(lo, hi, dims);
  for (int t = lo; t < hi; ++t) {
    SparseMatrix D(cech_dim(M, t + 1), cech_dim(M, t));
    for (int p = 0; p <= N.max_dim(); ++p) {
      int n = t - p;
      if (n < M.n_lo() || n > M.n_hi()) continue;
      for (int a : N.of_dim(p)) {
        int src = cech_offset(M, t, a), da = M.dim(a, n);
        if (da == 0) continue;
        const auto& av = N.simplex(a);
        std::vector<std::pair<int, SparseMatrix>> up;
        for (int v = 0; v < N.vertices(); ++v) {
          if (std::binary_search(av.begin(), av.end(), v)) continue;
          std::vector<int> bv = av;
          auto pos = std::upper_bound(bv.begin(), bv.end(), v);
          int i = static_cast<int>(pos - bv.begin());
          bv.insert(pos, v);
          int b = N.index(bv);
          if (b < 0 || M.dim(b, n) == 0) continue;
          up.emplace_back(b, M.transition(a, b, n).scaled(sign(i)));
        }
        SparseMatrix dd = n < M.n_hi() ? M.at(a).d(n).scaled(sign(p)) : SparseMatrix();
        int dst_d = n < M.n_hi() ? cech_offset(M, t + 1, a) : 0;
        for (int j = 0; j < da; ++j) {
          std::vector<std::pair<int, Scalar>> col;
          for (const auto& [b, m] : up)
            for (const auto& [r, c] : m.column(j)) col.emplace_back(cech_offset(M, t + 1, b) + r, c);
          if (n < M.n_hi())
            for (const auto& [r, c] : dd.column(j)) col.emplace_back(dst_d + r, c);
          D.set_column(src + j, make_svec(std::move(col)));
        }
      }
    }
    C.set_d(t, std::move(D));
  }
  return C;
}

SparseMatrix cech_map(const SimplicialModule& M, const SimplicialModule& N, const SimplicialMap& f, int t) {
  SparseMatrix F(cech_dim(N, t), cech_dim(M, t));
  for (int p = 0; p <= M.nerve().max_dim(); ++p) {
    int n = t - p;
    for (int a : M.nerve().of_dim(p)) {
      int dm = safe_dim(M, a, n), dn = safe_dim(N, a, n);
      if (dm == 0 || dn == 0) continue;
      auto it = f.blocks.find({a, n});
      if (it == f.blocks.end()) continue;
      if (it->second.rows() != dn || it->second.cols() != dm) throw StructuralError("simplicial map block has the wrong shape");
      int so = cech_offset(M, t, a), to = cech_offset(N, t, a);
      for (int j = 0; j < dm; ++j) F.set_column(so + j, shifted(it->second.column(j), to));
    }
  }
  return F;
}

bool cech_short_exact(const SimplicialModule& A, const SimplicialModule& B, const SimplicialModule& C,
                      const SimplicialMap& f, const SimplicialMap& g) {
  int lo = std::min({A.n_lo(), B.n_lo(), C.n_lo()});
  int hi = std::max({A.n_hi(), B.n_hi(), C.n_hi()}) + std::max(0, B.nerve().max_dim());
  for (int t = lo; t <= hi; ++t) {
    SparseMatrix F = cech_map(A, B, f, t), G = cech_map(B, C, g, t);
    int rf = rank(F), rg = rank(G);
    if (rf != F.cols() || rg != G.rows()) return false;
    if (!(G * F).is_zero()) return false;
    if (rf + rg != F.rows()) return false;
  }
  return true;
}

namespace {

ChainMap make_chain_map(const BoundedComplex& S, const BoundedComplex& T, const std::function<SparseMatrix(int)>& at) {
  ChainMap f(&S, &T, 0);
  for (int n = S.n_min(); n <= S.n_max(); ++n) f.set(n, at(n));
  return f;
}

bool quasiiso(const ChainMap& f) {
  int a = std::min(f.source().n_min(), f.target().n_min());
  int b = std::max(f.source().n_max(), f.target().n_max());
  return f.commutes() && is_quasiiso(f, a, b).iso;
}

}  // namespace

AdjunctionReport adjunction_check(const SimplicialModule& M, const BoundedComplex* global,
                                  const std::vector<std::vector<SparseMatrix>>* restrictions) {
  AdjunctionReport rep;
  const Nerve& N = M.nerve();
  for (int p = 0; p < N.max_dim(); ++p)
    for (int a : N.of_dim(p))
      for (int b : N.of_dim(p + 1)) {
        const auto& av = N.simplex(a);
        const auto& bv = N.simplex(b);
        if (!std::includes(bv.begin(), bv.end(), av.begin(), av.end())) continue;
        ChainMap f = make_chain_map(M.at(a), M.at(b), [&](int n) { return M.transition(a, b, n); });
        if (!quasiiso(f)) rep.transitions_quasiiso = false;
      }

  if (global) {
    if (!restrictions || static_cast<int>(restrictions->size()) != N.vertices())
      throw StructuralError("adjunction check needs one restriction per vertex");
    BoundedComplex C = cech_complex(M);
    ChainMap u = make_chain_map(*global, C, [&](int n) {
      SparseMatrix m(C.dim(n), global->dim(n));
      for (int v = 0; v < N.vertices(); ++v) {
        int s = N.index({v});
        if (n < M.n_lo() || n > M.n_hi() || M.dim(s, n) == 0) continue;
        const SparseMatrix& r = (*restrictions)[static_cast<std::size_t>(v)][static_cast<std::size_t>(n - M.n_lo())];
        int off = cech_offset(M, n, s);
        for (int j = 0; j < m.cols(); ++j) {
          SVec col = add_scaled(m.column(j), shifted(r.column(j), off), 1);
          m.set_column(j, std::move(col));
        }
      }
      return m;
    });
    rep.unit_quasiiso = quasiiso(u);
  }

  for (int g = 0; g < N.size(); ++g) {
    const auto& gv = N.simplex(g);
    auto joined = [&](const std::vector<int>& b) {
      std::vector<int> u;
      std::set_union(b.begin(), b.end(), gv.begin(), gv.end(), std::back_inserter(u));
      return u;
    };
    std::vector<int> star;
    for (int v = 0; v < N.vertices(); ++v)
      if (N.index(joined({v})) >= 0) star.push_back(v);
    std::vector<std::vector<int>> faces;
    for (int s = 0; s < N.size(); ++s)
      if (N.index(joined(N.simplex(s))) >= 0) faces.push_back(N.simplex(s));
    auto relabel = [&](const std::vector<int>& b) {
      std::vector<int> r;
      for (int v : b) r.push_back(static_cast<int>(std::lower_bound(star.begin(), star.end(), v) - star.begin()));
      return r;
    };
    std::vector<std::vector<int>> local_faces;
    for (const auto& f : faces) local_faces.push_back(relabel(f));
    Nerve L(static_cast<int>(star.size()), local_faces);
    auto global_of = [&](int ls) {
      std::vector<int> b;
      for (int v : L.simplex(ls)) b.push_back(star[static_cast<std::size_t>(v)]);
      return N.index(b);
    };
    SimplicialModule S1(L, M.n_lo(), M.n_hi()), S2(L, M.n_lo(), M.n_hi());
    SimplicialMap phi;
    for (int s = 0; s < L.size(); ++s) {
      int b = global_of(s), bj = N.index(joined(N.simplex(b)));
      S1.set_complex(s, M.at(b));
      S2.set_complex(s, M.at(bj));
      for (int n = M.n_lo(); n <= M.n_hi(); ++n) phi.blocks[{s, n}] = M.transition(b, bj, n);
    }
    for (int s = 0; s < L.size(); ++s)
      for (int s2 = 0; s2 < L.size(); ++s2) {
        if (L.simplex(s2).size() != L.simplex(s).size() + 1) continue;
        const auto& a = L.simplex(s);
        const auto& b = L.simplex(s2);
        if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
        int ga = global_of(s), gb = global_of(s2);
        int ja = N.index(joined(N.simplex(ga))), jb = N.index(joined(N.simplex(gb)));
        for (int n = M.n_lo(); n <= M.n_hi(); ++n) {
          S1.set_face_map(s, s2, n, M.transition(ga, gb, n));
          S2.set_face_map(s, s2, n, M.transition(ja, jb, n));
        }
      }
    BoundedComplex C1 = cech_complex(S1), C2 = cech_complex(S2);
    ChainMap f = make_chain_map(C1, C2, [&](int t) { return cech_map(S1, S2, phi, t); });
    if (!quasiiso(f)) {
      rep.restricted_quasiiso = false;
      rep.failing_simplices.push_back(g);
    }
  }
  return rep;
}

void TensorCochain::add(const CochainKey& key, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(key, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

bool operator==(const TensorCochain& a, const TensorCochain& b) { return a.terms == b.terms; }

namespace {

using Coords = std::vector<std::pair<int, int>>;

/// Pushes factor coordinates along from → to, expanding the tensor product.
std::vector<std::pair<Coords, Scalar>> push(const std::vector<const SimplicialModule*>& factors, std::size_t first,
                                            const Coords& c, int from, int to, std::size_t count) {
  std::vector<std::pair<Coords, Scalar>> out{{Coords{}, Scalar(1)}};
  for (std::size_t k = 0; k < count; ++k) {
    auto [n, i] = c[k];
    SVec col = factors[first + k]->transition(from, to, n).column(i);
    std::vector<std::pair<Coords, Scalar>> next;
    for (const auto& [cc, s] : out)
      for (const auto& [r, v] : col) {
        Coords e = cc;
        e.emplace_back(n, r);
        next.emplace_back(std::move(e), s * v);
      }
    out = std::move(next);
  }
  return out;
}

int internal_degree(const Coords& c, std::size_t first, std::size_t count) {
  int a = 0;
  for (std::size_t k = first; k < first + count; ++k) a += c[k].first;
  return a;
}

}  // namespace

TensorCochain alexander_whitney(const std::vector<const SimplicialModule*>& left, const TensorCochain& s,
                                const std::vector<const SimplicialModule*>& right, const TensorCochain& t) {
  std::vector<const SimplicialModule*> all = left;
  all.insert(all.end(), right.begin(), right.end());
  if (all.empty()) {
    if (s.terms.empty() || t.terms.empty()) return {};
  }
  const Nerve* N = nullptr;
  for (auto* f : all) N = &f->nerve();
  TensorCochain out;
  for (const auto& [ks, cs] : s.terms)
    for (const auto& [kt, ct] : t.terms) {
      if (!N) throw StructuralError("cup product needs at least one factor to fix the nerve");
      const auto& fv = N->simplex(ks.first);
      const auto& bv = N->simplex(kt.first);
      if (fv.back() != bv.front()) continue;
      std::vector<int> g = fv;
      g.insert(g.end(), bv.begin() + 1, bv.end());
      int gi = N->index(g);
      if (gi < 0) continue;
      int a = internal_degree(ks.second, 0, left.size());
      int q = static_cast<int>(bv.size()) - 1;
      Scalar c = cs * ct * sign(a * q);
      auto xs = push(left, 0, ks.second, ks.first, gi, left.size());
      auto ys = push(right, 0, kt.second, kt.first, gi, right.size());
      for (const auto& [xc, xv] : xs)
        for (const auto& [yc, yv] : ys) {
          Coords k = xc;
          k.insert(k.end(), yc.begin(), yc.end());
          out.add({gi, std::move(k)}, c * xv * yv);
        }
    }
  return out;
}

TensorCochain cech_differential(const std::vector<const SimplicialModule*>& factors, const TensorCochain& s) {
  if (factors.empty()) throw StructuralError("differential needs at least one factor");
  const Nerve& N = factors[0]->nerve();
  TensorCochain out;
  for (const auto& [key, c] : s.terms) {
    const auto& av = N.simplex(key.first);
    int p = static_cast<int>(av.size()) - 1;
    for (int v = 0; v < N.vertices(); ++v) {
      if (std::binary_search(av.begin(), av.end(), v)) continue;
      std::vector<int> bv = av;
      auto pos = std::upper_bound(bv.begin(), bv.end(), v);
      int i = static_cast<int>(pos - bv.begin());
      bv.insert(pos, v);
      int b = N.index(bv);
      if (b < 0) continue;
      for (const auto& [cc, x] : push(factors, 0, key.second, key.first, b, factors.size()))
        out.add({b, cc}, c * x * sign(i));
    }
    int before = 0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      auto [n, idx] = key.second[k];
      const SimplicialModule& F = *factors[k];
      if (n < F.n_hi()) {
        for (const auto& [r, x] : F.at(key.first).d(n).column(idx)) {
          Coords e = key.second;
          e[k] = {n + 1, r};
          out.add({key.first, std::move(e)}, c * x * sign(p + before));
        }
      }
      before += n;
    }
  }
  return out;
}

TensorCochain cochain_from_vector(const SimplicialModule& M, int t, const SVec& v) {
  TensorCochain out;
  const Nerve& N = M.nerve();
  for (const auto& [i, c] : v) {
    int off = 0;
    bool found = false;
    for (int p = 0; p <= N.max_dim() && !found; ++p)
      for (int s : N.of_dim(p)) {
        int d = safe_dim(M, s, t - p);
        if (i < off + d) {
          out.add({s, {{t - p, i - off}}}, c);
          found = true;
          break;
        }
        off += d;
      }
    if (!found) throw StructuralError("cochain index out of range");
  }
  return out;
}

SVec cochain_to_vector(const SimplicialModule& M, int t, const TensorCochain& s) {
  std::vector<std::pair<int, Scalar>> out;
  for (const auto& [key, c] : s.terms) {
    if (key.second.size() != 1) throw StructuralError("cochain has more than one factor");
    int p = static_cast<int>(M.nerve().simplex(key.first).size()) - 1;
    if (key.second[0].first + p != t) throw StructuralError("cochain term outside total degree");
    out.emplace_back(cech_offset(M, t, key.first) + key.second[0].second, c);
  }
  return make_svec(std::move(out));
}

TensorCochain unit_cochain(const Nerve& nerve, const FieldSpec& field) {
  TensorCochain out;
  for (int s : nerve.of_dim(0)) out.add({s, {}}, Scalar::one(field));
  return out;
}

ChartedSpace::ChartedSpace(int rank, std::vector<ToricChart> charts, std::optional<Nerve> nerve)
    : rank_(rank), charts_(std::move(charts)) {
  for (const auto& c : charts_) {
    if (static_cast<int>(c.signs.size()) != rank_) throw StructuralError("chart " + c.name + " has the wrong rank");
    for (int s : c.signs)
      if (s < -1 || s > 1) throw StructuralError("chart signs must be -1, 0 or 1");
  }
  nerve_ = nerve ? *nerve : Nerve::full(static_cast<int>(charts_.size()));
  if (nerve_.vertices() != static_cast<int>(charts_.size())) throw StructuralError("nerve does not match the charts");
}

ChartedSpace ChartedSpace::projective_line() { return ChartedSpace(1, {{"U0", {1}}, {"U1", {-1}}}); }

ChartedSpace ChartedSpace::projective_line_squared() {
  return ChartedSpace(2, {{"U00", {1, 1}}, {"U01", {1, -1}}, {"U10", {-1, 1}}, {"U11", {-1, -1}}});
}

std::vector<int> ChartedSpace::cone(int simplex) const {
  const auto& s = nerve_.simplex(simplex);
  std::vector<int> c = charts_[static_cast<std::size_t>(s[0])].signs;
  for (int v : s)
    for (int j = 0; j < rank_; ++j)
      if (charts_[static_cast<std::size_t>(v)].signs[static_cast<std::size_t>(j)] != c[static_cast<std::size_t>(j)])
        c[static_cast<std::size_t>(j)] = 0;
  return c;
}

QRingPtr ChartedSpace::chart_ring(int chart, const FieldSpec& field) const {
  const auto& c = charts_[static_cast<std::size_t>(chart)];
  std::vector<std::string> names;
  for (int j = 0; j < rank_; ++j) {
    int s = c.signs[static_cast<std::size_t>(j)];
    if (s == 0) throw StructuralError("chart " + c.name + " inverts a coordinate");
    names.push_back((s > 0 ? "t" : "u") + std::to_string(j));
  }
  return QuotientRing::make(c.name, make_ring(field, names), {});
}

namespace {

std::vector<std::vector<int>> window_monomials(const std::vector<int>& cone, const std::vector<int>& frame, int window) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t j = 0; j < cone.size(); ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& m : out)
      for (int e = -window; e <= window; ++e) {
        if (cone[j] > 0 && e < frame[j]) continue;
        if (cone[j] < 0 && e > frame[j]) continue;
        auto m2 = m;
        m2.push_back(e);
        next.push_back(std::move(m2));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

SimplicialModule ChartedSpace::line_bundle(const std::vector<std::vector<int>>& frames, int window) const {
  if (frames.size() != charts_.size()) throw StructuralError("one frame per chart required");
  SimplicialModule L(nerve_, 0, 0);
  std::vector<std::map<std::vector<int>, int>> index(static_cast<std::size_t>(nerve_.size()));
  for (int s = 0; s < nerve_.size(); ++s) {
    auto mons = window_monomials(cone(s), frames[static_cast<std::size_t>(nerve_.simplex(s)[0])], window);
    for (std::size_t i = 0; i < mons.size(); ++i) index[static_cast<std::size_t>(s)][mons[i]] = static_cast<int>(i);
    L.set_complex(s, BoundedComplex(0, 0, {static_cast<int>(mons.size())}));
  }
  for (int a = 0; a < nerve_.size(); ++a)
    for (int b = 0; b < nerve_.size(); ++b) {
      const auto& av = nerve_.simplex(a);
      const auto& bv = nerve_.simplex(b);
      if (bv.size() != av.size() + 1 || !std::includes(bv.begin(), bv.end(), av.begin(), av.end())) continue;
      const auto& src = index[static_cast<std::size_t>(a)];
      const auto& dst = index[static_cast<std::size_t>(b)];
      SparseMatrix m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
      for (const auto& [mono, i] : src) {
        auto it = dst.find(mono);
        if (it == dst.end()) throw StructuralError("line bundle frames are not compatible on an overlap");
        m.set_column(i, unit_vector(it->second));
      }
      L.set_face_map(a, b, 0, std::move(m));
    }
  return L;
}

std::vector<std::vector<int>> ChartedSpace::twist(int n) { return {{0}, {n}}; }

bool ChartedSpace::frames_compatible(const std::vector<std::vector<int>>& frames) const {
  for (int s = 0; s < nerve_.size(); ++s) {
    auto c = cone(s);
    const auto& sv = nerve_.simplex(s);
    const auto& f0 = frames[static_cast<std::size_t>(sv[0])];
    for (int v : sv)
      for (int j = 0; j < rank_; ++j)
        if (c[static_cast<std::size_t>(j)] != 0 &&
            frames[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)] != f0[static_cast<std::size_t>(j)])
          return false;
  }
  return true;
}

bool ChartedSpace::cocycle_condition(const SimplicialModule& L) const { return L.functorial(); }

SheafCohomology line_bundle_cohomology(const ChartedSpace& X, const std::vector<std::vector<int>>& frames, int window) {
  auto dims_at = [&](int w) {
    auto H = cohomology(cech_complex(X.line_bundle(frames, w)));
    std::vector<int> h;
    for (int p = 0; p <= std::max(0, X.nerve().max_dim()); ++p) h.push_back(H.dim(p));
    return h;
  };
  SheafCohomology out;
  out.window = window;
  out.h = dims_at(window);
  out.stable = dims_at(window + 2) == out.h;
  return out;
}

HHReport glued_hochschild(const std::vector<RingMorphism>& charts, int n_max, int r_cap) {
  if (charts.empty()) throw StructuralError("glued Hochschild cohomology needs at least one chart");
  HHReport out;
  std::map<std::pair<int, int>, HHCell> cells;
  for (const auto& f : charts) {
    auto setup = build_setup(f, default_bounds(f, n_max));
    auto rep = hh_cohomology(setup, std::make_shared<const AlgebraModule>(setup.B), n_max, r_cap);
    if (charts.size() == 1) return rep;
    out.n_max = rep.n_max;
    for (const auto& c : rep.cells) {
      auto [it, fresh] = cells.emplace(std::make_pair(c.degree, c.internal), c);
      if (!fresh) {
        it->second.dim += c.dim;
        it->second.certified = it->second.certified && c.certified;
      }
    }
    for (const auto& c : rep.caveats)
      if (std::find(out.caveats.begin(), out.caveats.end(), c) == out.caveats.end()) out.caveats.push_back(c);
  }
  for (const auto& [k, c] : cells) out.cells.push_back(c);
  return out;
}

namespace {

long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

GluedReport glued_hochschild(const ChartedSpace& X, int n_max, int window, const FieldSpec& field) {
  GluedReport out;
  const int d = X.rank();
  const int r_cap = 3;
  auto K = QuotientRing::make("K", make_ring(field, {}), {});
  for (int i = 0; i < static_cast<int>(X.charts().size()); ++i) {
    RingMorphism f(K, X.chart_ring(i, field), {});
    auto setup = build_setup(f, default_bounds(f, std::max(d, 1)));
    auto rep = hh_cohomology(setup, std::make_shared<const AlgebraModule>(setup.B), d, r_cap);
    for (int q = 0; q <= d; ++q)
      for (int r = -q; r <= r_cap; ++r) {
        long want = binomial(d, q) * binomial(r + q + d - 1, d - 1);
        if (rep.dim(q, r) != want) out.charts_verified = false;
      }
  }

  int top = std::min(n_max, d);
  out.table.assign(static_cast<std::size_t>(top + 1), std::vector<int>(static_cast<std::size_t>(X.nerve().max_dim() + 1), 0));
  for (int q = 0; q <= top; ++q)
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      if (__builtin_popcount(mask) != q) continue;
      std::vector<std::vector<int>> frames;
      for (const auto& c : X.charts()) {
        std::vector<int> s(static_cast<std::size_t>(d), 0);
        for (int j = 0; j < d; ++j)
          if (mask & (1u << j)) s[static_cast<std::size_t>(j)] = -c.signs[static_cast<std::size_t>(j)];
        frames.push_back(std::move(s));
      }
      if (!X.frames_compatible(frames)) {
        out.transitions_quasiiso = false;
        continue;
      }
      auto H = line_bundle_cohomology(X, frames, window);
      out.stable = out.stable && H.stable;
      for (std::size_t p = 0; p < H.h.size(); ++p) out.table[static_cast<std::size_t>(q)][p] += H.h[p];
    }

  out.report.n_max = n_max;
  bool ok = out.charts_verified && out.transitions_quasiiso && out.stable;
  for (int n = 0; n <= n_max; ++n) {
    int total = 0;
    for (int q = 0; q <= top; ++q) {
      int p = n - q;
      if (p >= 0 && p < static_cast<int>(out.table[static_cast<std::size_t>(q)].size()))
        total += out.table[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
    }
    out.report.cells.push_back({n, 0, total, ok});
  }
  out.report.caveats.push_back("internal grading collapsed to 0 across charts");
  return out;
}

}  // namespace dgcohom
