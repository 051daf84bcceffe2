#include "dgcohom/complex.hpp"

#include "dgcohom/errors.hpp"

namespace dgcohom {

BoundedComplex::BoundedComplex(int n_min, int n_max, std::vector<int> dims)
    : n_min_(n_min), n_max_(n_max), dims_(std::move(dims)) {
  if (n_max_ < n_min_ - 1) throw StructuralError("empty complex window");
  if (static_cast<int>(dims_.size()) != n_max_ - n_min_ + 1) throw StructuralError("complex window size mismatch");
  for (int n = n_min_ - 1; n <= n_max_; ++n) d_.emplace_back(dim(n + 1), dim(n));
  labels_.resize(dims_.size());
}

int BoundedComplex::dim(int n) const {
  if (!in_window(n)) return 0;
  return dims_[static_cast<std::size_t>(n - n_min_)];
}

namespace {
const SparseMatrix kEmpty;
}

const SparseMatrix& BoundedComplex::d(int n) const {
  if (n < n_min_ - 1 || n > n_max_) return kEmpty;
  return d_[static_cast<std::size_t>(n - n_min_ + 1)];
}

void BoundedComplex::set_d(int n, SparseMatrix m) {
  if (!in_window(n)) {
    if (!m.is_zero()) throw StructuralError("differential outside the window");
    return;
  }
  if (m.rows() != dim(n + 1) || m.cols() != dim(n))
    throw StructuralError("differential of degree " + std::to_string(n) + " has the wrong shape");
  d_[static_cast<std::size_t>(n - n_min_ + 1)] = std::move(m);
}

const std::vector<std::string>& BoundedComplex::labels(int n) const {
  if (!in_window(n)) return no_labels_;
  return labels_[static_cast<std::size_t>(n - n_min_)];
}

void BoundedComplex::set_labels(int n, std::vector<std::string> labels) {
  if (in_window(n)) labels_[static_cast<std::size_t>(n - n_min_)] = std::move(labels);
}

void BoundedComplex::check() const {
  for (int n = n_min_; n < n_max_; ++n) {
    if (!(d(n + 1) * d(n)).is_zero())
      throw IntegrityError("d∘d ≠ 0 at degree " + std::to_string(n));
  }
}

int BoundedComplex::euler_characteristic() const {
  int chi = 0;
  for (int n = n_min_; n <= n_max_; ++n) chi += ((n % 2) == 0 ? 1 : -1) * dim(n);
  return chi;
}

int BoundedComplex::total_dim() const {
  int t = 0;
  for (int x : dims_) t += x;
  return t;
}

ChainMap::ChainMap(const BoundedComplex* source, const BoundedComplex* target, int shift)
    : source_(source), target_(target), shift_(shift) {
  for (int n = source_->n_min(); n <= source_->n_max(); ++n)
    f_.emplace_back(target_->dim(n + shift_), source_->dim(n));
}

const SparseMatrix& ChainMap::at(int n) const {
  if (!source_->in_window(n)) return kEmpty;
  return f_[static_cast<std::size_t>(n - source_->n_min())];
}

void ChainMap::set(int n, SparseMatrix m) {
  if (!source_->in_window(n)) return;
  if (m.rows() != target_->dim(n + shift_) || m.cols() != source_->dim(n))
    throw StructuralError("chain map component has the wrong shape");
  f_[static_cast<std::size_t>(n - source_->n_min())] = std::move(m);
}

bool ChainMap::commutes() const {
  for (int n = source_->n_min() - 1; n <= source_->n_max(); ++n) {
    int rows = target_->dim(n + shift_ + 1), cols = source_->dim(n);
    if (rows == 0 || cols == 0) continue;
    SparseMatrix lhs = target_->dim(n + shift_) ? target_->d(n + shift_) * at(n) : SparseMatrix(rows, cols);
    SparseMatrix rhs = source_->dim(n + 1) ? at(n + 1) * source_->d(n) : SparseMatrix(rows, cols);
    if (shift_ % 2) rhs = rhs.scaled(-1);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

const CohomologyDegree& CohomologyReport::at(int n) const {
  for (const auto& d : degrees)
    if (d.degree == n) return d;
  throw StructuralError("degree " + std::to_string(n) + " not in cohomology report");
}

int CohomologyReport::dim(int n) const {
  for (const auto& d : degrees)
    if (d.degree == n) return d.dim;
  return 0;
}

bool CohomologyReport::edge(int n) const {
  for (const auto& d : degrees)
    if (d.degree == n) return d.edge;
  return false;
}

std::vector<int> CohomologyReport::dims() const {
  std::vector<int> out;
  for (const auto& d : degrees) out.push_back(d.dim);
  return out;
}

bool CohomologyReport::acyclic_interior() const {
  for (const auto& d : degrees)
    if (!d.edge && d.dim != 0) return false;
  return true;
}

CohomologyReport cohomology(const BoundedComplex& c) {
  c.check();
  CohomologyReport rep;
  for (int n = c.n_min(); n <= c.n_max(); ++n) {
    CohomologyDegree deg;
    deg.degree = n;
    deg.edge = (c.open_below && n <= c.n_min() + 1) || (c.open_above && n >= c.n_max() - 1);
    auto Z = kernel(c.d(n));
    auto B = image_basis(c.d(n - 1));
    deg.classes = Subquotient(c.dim(n), Z, B);
    deg.dim = deg.classes.dim();
    rep.degrees.push_back(std::move(deg));
  }
  return rep;
}

BoundedComplex cone(const ChainMap& f) {
  if (f.shift() != 0) throw StructuralError("cone needs a degree-0 map");
  const auto& C = f.source();
  const auto& D = f.target();
  int lo = std::min(C.n_min() - 1, D.n_min());
  int hi = std::max(C.n_max() - 1, D.n_max());
  std::vector<int> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(C.dim(n + 1) + D.dim(n));
  BoundedComplex K(lo, hi, dims);
  K.open_below = C.open_below || D.open_below;
  K.open_above = C.open_above || D.open_above;
  for (int n = lo; n <= hi; ++n) {
    SparseMatrix m(K.dim(n + 1), K.dim(n));
    int c0 = C.dim(n + 1);
    int c1 = C.dim(n + 2);
    const auto& dc = C.d(n + 1);
    const auto& fn = f.at(n + 1);
    const auto& dd = D.d(n);
    for (int j = 0; j < c0; ++j) {
      SVec col = scaled(dc.column(j), -1);
      SVec fc = shifted(fn.column(j), c1);
      col.insert(col.end(), fc.begin(), fc.end());
      m.set_column(j, std::move(col));
    }
    for (int j = 0; j < D.dim(n); ++j) m.set_column(c0 + j, shifted(dd.column(j), c1));
    K.set_d(n, std::move(m));
  }
  K.check();
  return K;
}

BoundedComplex tensor_complex(const BoundedComplex& C, const BoundedComplex& D) {
  int lo = C.n_min() + D.n_min();
  int hi = C.n_max() + D.n_max();
  if (hi < lo) hi = lo - 1;
  // offsets[n][a] = start of C^a ⊗ D^{n-a} inside degree n
  auto offset = [&](int n, int a) {
    int off = 0;
    for (int x = C.n_min(); x < a; ++x) off += C.dim(x) * D.dim(n - x);
    return off;
  };
  std::vector<int> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(offset(n, C.n_max() + 1));
  BoundedComplex T(lo, hi, dims);
  T.open_below = C.open_below || D.open_below;
  T.open_above = C.open_above || D.open_above;
  for (int n = lo; n <= hi; ++n) {
    SparseMatrix m(T.dim(n + 1), T.dim(n));
    for (int a = C.n_min(); a <= C.n_max(); ++a) {
      int b = n - a;
      int da = C.dim(a), db = D.dim(b);
      if (da == 0 || db == 0) continue;
      int base = offset(n, a);
      int tgt1 = offset(n + 1, a + 1);
      int tgt2 = offset(n + 1, a);
      int db1 = D.dim(b + 1);
      Scalar sgn = (a % 2 == 0) ? 1 : -1;
      for (int i = 0; i < da; ++i) {
        for (int j = 0; j < db; ++j) {
          std::vector<std::pair<int, Scalar>> col;
          for (const auto& [r, c] : C.d(a).column(i)) col.emplace_back(tgt1 + r * db + j, c);
          for (const auto& [r, c] : D.d(b).column(j)) col.emplace_back(tgt2 + i * db1 + r, sgn * c);
          m.set_column(base + i * db + j, make_svec(std::move(col)));
        }
      }
    }
    T.set_d(n, std::move(m));
  }
  T.check();
  return T;
}

BoundedComplex hom_complex(const BoundedComplex& C, const BoundedComplex& D) {
  int lo = D.n_min() - C.n_max();
  int hi = D.n_max() - C.n_min();
  auto offset = [&](int n, int k) {
    int off = 0;
    for (int x = C.n_min(); x < k; ++x) off += C.dim(x) * D.dim(x + n);
    return off;
  };
  std::vector<int> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(offset(n, C.n_max() + 1));
  BoundedComplex H(lo, hi, dims);
  H.open_below = C.open_above || D.open_below;
  H.open_above = C.open_below || D.open_above;
  for (int n = lo; n <= hi; ++n) {
    SparseMatrix m(H.dim(n + 1), H.dim(n));
    Scalar sgn = (n % 2 == 0) ? -1 : 1;  // −(−1)^n
    for (int k = C.n_min(); k <= C.n_max(); ++k) {
      int rows = D.dim(k + n), cols = C.dim(k);
      if (rows == 0 || cols == 0) continue;
      int base = offset(n, k);
      // f = E_{r,c}: C^k → D^{k+n}
      int t1 = offset(n + 1, k);      // d_D f : C^k → D^{k+n+1}
      int t2 = offset(n + 1, k - 1);  // f d_C : C^{k-1} → D^{k+n}
      int rows1 = D.dim(k + n + 1);
      const auto& dD = D.d(k + n);
      const auto& dC = C.d(k - 1);
      // rows of dC restricted to row c: columns m of dC with entry at row c
      std::vector<std::vector<std::pair<int, Scalar>>> dC_rows(static_cast<std::size_t>(cols));
      for (int mcol = 0; mcol < dC.cols(); ++mcol)
        for (const auto& [r, v] : dC.column(mcol)) dC_rows[static_cast<std::size_t>(r)].emplace_back(mcol, v);
      for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
          std::vector<std::pair<int, Scalar>> col;
          for (const auto& [l, v] : dD.column(r)) col.emplace_back(t1 + c * rows1 + l, v);
          for (const auto& [mcol, v] : dC_rows[static_cast<std::size_t>(c)])
            col.emplace_back(t2 + mcol * rows + r, sgn * v);
          m.set_column(base + c * rows + r, make_svec(std::move(col)));
        }
      }
    }
    H.set_d(n, std::move(m));
  }
  H.check();
  return H;
}

QuasiIsoReport is_quasiiso(const ChainMap& f, int a, int b) {
  QuasiIsoReport rep;
  auto HC = cohomology(f.source());
  auto HD = cohomology(f.target());
  for (int n = a; n <= b; ++n) {
    int dc = f.source().in_window(n) ? HC.dim(n) : 0;
    int dd = f.target().in_window(n) ? HD.dim(n) : 0;
    SparseMatrix m(dd, dc);
    for (int j = 0; j < dc; ++j) {
      SVec img = f.at(n).apply(HC.at(n).classes.representatives()[static_cast<std::size_t>(j)]);
      m.set_column(j, HD.at(n).classes.coordinates(img));
    }
    bool ok = dc == dd && rank(m) == dc;
    if (!ok) {
      rep.iso = false;
      rep.failing_degrees.push_back(n);
    }
    rep.induced.push_back(std::move(m));
  }
  return rep;
}

FreeComplex::FreeComplex(QRingPtr ring, int n_min, int n_max) : ring_(std::move(ring)), n_min_(n_min), n_max_(n_max) {
  if (n_max_ < n_min_ - 1) throw StructuralError("empty complex window");
  gens_.resize(static_cast<std::size_t>(n_max_ - n_min_ + 1));
  d_.resize(gens_.size());
}

const std::vector<int>& FreeComplex::generators(int n) const {
  if (n < n_min_ || n > n_max_) return no_gens_;
  return gens_[static_cast<std::size_t>(n - n_min_)];
}

void FreeComplex::set_generators(int n, std::vector<int> internal_degrees) {
  if (n < n_min_ || n > n_max_) throw StructuralError("generators outside the window");
  gens_[static_cast<std::size_t>(n - n_min_)] = std::move(internal_degrees);
}

const std::vector<std::vector<Poly>>& FreeComplex::d(int n) const {
  if (n < n_min_ || n > n_max_) return no_d_;
  return d_[static_cast<std::size_t>(n - n_min_)];
}

void FreeComplex::set_d(int n, std::vector<std::vector<Poly>> columns) {
  if (n < n_min_ || n > n_max_) throw StructuralError("differential outside the window");
  if (static_cast<int>(columns.size()) != rank(n)) throw StructuralError("differential has the wrong column count");
  for (auto& col : columns) {
    if (static_cast<int>(col.size()) != rank(n + 1)) throw StructuralError("differential has the wrong row count");
    for (auto& p : col) p = p.ring() ? ring_->normal_form(p) : ring_->zero();
  }
  d_[static_cast<std::size_t>(n - n_min_)] = std::move(columns);
}

void FreeComplex::check() const {
  for (int n = n_min_; n <= n_max_; ++n) {
    const auto& dn = d(n);
    if (dn.empty()) continue;
    const auto& g0 = generators(n);
    const auto& g1 = generators(n + 1);
    for (std::size_t j = 0; j < dn.size(); ++j)
      for (std::size_t i = 0; i < dn[j].size(); ++i) {
        const Poly& p = dn[j][i];
        if (p.is_zero()) continue;
        if (!p.is_homogeneous() || p.internal_degree() != g0[j] - g1[i] || p.hom_degree() != 0)
          throw IntegrityError("free complex differential is not homogeneous");
      }
    const auto& dn1 = d(n + 1);
    if (dn1.empty()) continue;
    for (std::size_t j = 0; j < dn.size(); ++j) {
      for (int l = 0; l < rank(n + 2); ++l) {
        Poly s = ring_->zero();
        for (std::size_t i = 0; i < dn[j].size(); ++i) s += dn[j][i] * dn1[i][static_cast<std::size_t>(l)];
        if (!ring_->normal_form(s).is_zero()) throw IntegrityError("free complex d∘d ≠ 0 at " + std::to_string(n));
      }
    }
  }
}

BoundedComplex FreeComplex::materialize(int q) const {
  std::vector<int> dims;
  std::vector<std::vector<int>> offs;
  for (int n = n_min_; n <= n_max_; ++n) {
    std::vector<int> off;
    int tot = 0;
    for (int g : generators(n)) {
      off.push_back(tot);
      tot += ring_->dim(0, q - g);
    }
    off.push_back(tot);
    offs.push_back(off);
    dims.push_back(tot);
  }
  BoundedComplex C(n_min_, n_max_, dims);
  for (int n = n_min_; n < n_max_; ++n) {
    SparseMatrix m(C.dim(n + 1), C.dim(n));
    const auto& g0 = generators(n);
    const auto& g1 = generators(n + 1);
    const auto& off0 = offs[static_cast<std::size_t>(n - n_min_)];
    const auto& off1 = offs[static_cast<std::size_t>(n + 1 - n_min_)];
    const auto& dn = d(n);
    for (std::size_t j = 0; j < g0.size(); ++j) {
      const auto& basis = ring_->basis(0, q - g0[j]);
      for (std::size_t b = 0; b < basis.size(); ++b) {
        std::vector<std::pair<int, Scalar>> col;
        Poly mono = Poly::monomial(ring_->ring(), basis[b], 1);
        for (std::size_t i = 0; i < g1.size() && !dn.empty(); ++i) {
          const Poly& e = dn[j][i];
          if (e.is_zero()) continue;
          SVec v = ring_->to_vector(mono * e, 0, q - g1[i]);
          for (const auto& [r, c] : v) col.emplace_back(off1[i] + r, c);
        }
        m.set_column(off0[j] + static_cast<int>(b), make_svec(std::move(col)));
      }
    }
    C.set_d(n, std::move(m));
  }
  C.check();
  return C;
}

FreeComplex tensor_complex(const FreeComplex& C, const FreeComplex& D) {
  if (C.ring().get() != D.ring().get()) throw StructuralError("tensor of free complexes over different rings");
  const auto& R = C.ring();
  int lo = C.n_min() + D.n_min(), hi = C.n_max() + D.n_max();
  FreeComplex T(R, lo, hi);
  auto offset = [&](int n, int a) {
    int off = 0;
    for (int x = C.n_min(); x < a; ++x) off += C.rank(x) * D.rank(n - x);
    return off;
  };
  for (int n = lo; n <= hi; ++n) {
    std::vector<int> g;
    for (int a = C.n_min(); a <= C.n_max(); ++a)
      for (int i : C.generators(a))
        for (int j : D.generators(n - a)) g.push_back(i + j);
    T.set_generators(n, g);
  }
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::vector<Poly>> cols(static_cast<std::size_t>(T.rank(n)),
                                        std::vector<Poly>(static_cast<std::size_t>(T.rank(n + 1)), R->zero()));
    for (int a = C.n_min(); a <= C.n_max(); ++a) {
      int b = n - a;
      int ra = C.rank(a), rb = D.rank(b);
      if (ra == 0 || rb == 0) continue;
      int base = offset(n, a), t1 = offset(n + 1, a + 1), t2 = offset(n + 1, a);
      int rb1 = D.rank(b + 1);
      const auto& dC = C.d(a);
      const auto& dD = D.d(b);
      for (int i = 0; i < ra; ++i)
        for (int j = 0; j < rb; ++j) {
          auto& col = cols[static_cast<std::size_t>(base + i * rb + j)];
          if (!dC.empty())
            for (int r = 0; r < C.rank(a + 1); ++r)
              col[static_cast<std::size_t>(t1 + r * rb + j)] += dC[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
          if (!dD.empty())
            for (int r = 0; r < rb1; ++r) {
              Poly e = dD[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
              col[static_cast<std::size_t>(t2 + i * rb1 + r)] += (a % 2 == 0) ? e : -e;
            }
        }
    }
    if (T.rank(n) > 0 && n < hi) T.set_d(n, cols);
  }
  return T;
}

FreeComplex hom_complex(const FreeComplex& C, const FreeComplex& D) {
  if (C.ring().get() != D.ring().get()) throw StructuralError("hom of free complexes over different rings");
  const auto& R = C.ring();
  int lo = D.n_min() - C.n_max(), hi = D.n_max() - C.n_min();
  FreeComplex H(R, lo, hi);
  auto offset = [&](int n, int k) {
    int off = 0;
    for (int x = C.n_min(); x < k; ++x) off += C.rank(x) * D.rank(x + n);
    return off;
  };
  for (int n = lo; n <= hi; ++n) {
    std::vector<int> g;
    for (int k = C.n_min(); k <= C.n_max(); ++k)
      for (int c : C.generators(k))
        for (int r : D.generators(k + n)) g.push_back(r - c);
    H.set_generators(n, g);
  }
  for (int n = lo; n < hi; ++n) {
    std::vector<std::vector<Poly>> cols(static_cast<std::size_t>(H.rank(n)),
                                        std::vector<Poly>(static_cast<std::size_t>(H.rank(n + 1)), R->zero()));
    for (int k = C.n_min(); k <= C.n_max(); ++k) {
      int rows = D.rank(k + n), ncols = C.rank(k);
      if (rows == 0 || ncols == 0) continue;
      int base = offset(n, k), t1 = offset(n + 1, k), t2 = offset(n + 1, k - 1);
      int rows1 = D.rank(k + n + 1);
      const auto& dD = D.d(k + n);
      const auto& dC = C.d(k - 1);
      for (int c = 0; c < ncols; ++c)
        for (int r = 0; r < rows; ++r) {
          auto& col = cols[static_cast<std::size_t>(base + c * rows + r)];
          if (!dD.empty())
            for (int l = 0; l < rows1; ++l)
              col[static_cast<std::size_t>(t1 + c * rows1 + l)] += dD[static_cast<std::size_t>(r)][static_cast<std::size_t>(l)];
          if (!dC.empty())
            for (int m = 0; m < C.rank(k - 1); ++m) {
              Poly e = dC[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
              col[static_cast<std::size_t>(t2 + m * rows + r)] += (n % 2 == 0) ? -e : e;
            }
        }
    }
    if (H.rank(n) > 0) H.set_d(n, cols);
  }
  return H;
}

FreeComplex unit_complex(const QRingPtr& ring) {
  FreeComplex U(ring, 0, 0);
  U.set_generators(0, {0});
  return U;
}

}  // namespace dgcohom
