#include "dgcohom/module.hpp"

#include <algorithm>
#include <sstream>

#include "dgcohom/errors.hpp"

namespace dgcohom {

namespace {

int parity(int n) { return n & 1; }

Scalar sign_of(int exponent) { return parity(exponent) ? Scalar(-1) : Scalar(1); }

class ColumnBuilder {
 public:
  explicit ColumnBuilder(int cols) : cols_(static_cast<std::size_t>(cols)) {}
  void add(int col, int row_offset, const SVec& v, const Scalar& c) {
    auto& acc = cols_[static_cast<std::size_t>(col)];
    for (const auto& [i, a] : v) acc.emplace_back(i + row_offset, a * c);
  }
  SparseMatrix build(int rows) {
    SparseMatrix m(rows, static_cast<int>(cols_.size()));
    for (std::size_t j = 0; j < cols_.size(); ++j) m.set_column(static_cast<int>(j), make_svec(std::move(cols_[j])));
    return m;
  }

 private:
  std::vector<std::vector<std::pair<int, Scalar>>> cols_;
};

/// Largest internal degree of a finite-dimensional ring concentrated in
/// homological degree 0.
std::optional<int> ring_top(const DGAlgebra& A) {
  for (std::size_t i = 0; i < A.nvars(); ++i)
    if (A.poly_ring()->var(i).hom != 0) return std::nullopt;
  if (!A.ring()->finite_degree_zero()) return std::nullopt;
  int maxw = 1;
  for (const auto& v : A.poly_ring()->vars()) maxw = std::max(maxw, v.weight);
  int top = 0, zeros = 0;
  for (int q = 1; zeros < maxw; ++q) {
    if (A.dim(0, q) > 0) {
      top = q;
      zeros = 0;
    } else {
      ++zeros;
    }
  }
  return top;
}

}  // namespace

// ---------------------------------------------------------------- DGModule

const SparseMatrix& DGModule::differential(int n, int q) const {
  auto key = std::make_pair(n, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = d_cache_.find(key);
    if (it != d_cache_.end()) return it->second;
  }
  SparseMatrix m = compute_differential(n, q);
  std::lock_guard<std::mutex> lock(mu_);
  return d_cache_.emplace(key, std::move(m)).first->second;
}

const SparseMatrix& DGModule::act_var(std::size_t v, int n, int q) const {
  auto key = std::make_tuple(v, n, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = act_cache_.find(key);
    if (it != act_cache_.end()) return it->second;
  }
  SparseMatrix m = compute_act_var(v, n, q);
  std::lock_guard<std::mutex> lock(mu_);
  return act_cache_.emplace(key, std::move(m)).first->second;
}

SVec DGModule::act_monomial(const Monomial& m, int n, int q, const SVec& x) const {
  SVec y = x;
  const auto& R = algebra_->poly_ring();
  for (std::size_t k = m.size(); k-- > 0;) {
    for (int a = 0; a < m[k]; ++a) {
      if (y.empty()) return y;
      y = act_var(k, n, q).apply(y);
      n += R->var(k).hom;
      q += R->var(k).weight;
    }
  }
  return y;
}

SVec DGModule::act(const Poly& a, int n, int q, const SVec& x) const {
  std::vector<std::pair<int, Scalar>> acc;
  for (const auto& [m, c] : a.terms())
    for (auto& [i, s] : act_monomial(m, n, q, x)) acc.emplace_back(i, s * c);
  return make_svec(std::move(acc));
}

SparseMatrix DGModule::act_matrix(const Poly& a, int n, int q) const {
  int cols = dim(n, q);
  if (a.is_zero()) return SparseMatrix(0, cols);
  SparseMatrix m(dim(n + a.hom_degree(), q + a.internal_degree()), cols);
  for (int j = 0; j < cols; ++j) m.set_column(j, act(a, n, q, unit_vector(j)));
  return m;
}

std::string DGModule::label(int n, int q, int j) const {
  return "v" + std::to_string(n) + "," + std::to_string(q) + "," + std::to_string(j);
}

BoundedComplex DGModule::slice(int q, int n_lo, int n_hi) const {
  std::vector<int> dims;
  for (int n = n_lo; n <= n_hi; ++n) dims.push_back(dim(n, q));
  BoundedComplex C(n_lo, n_hi, dims);
  for (int n = n_lo; n < n_hi; ++n) C.set_d(n, differential(n, q));
  C.open_below = n_lo > hom_min();
  C.open_above = n_hi < hom_max();
  return C;
}

void DGModule::check(int n_lo, int n_hi, int q_lo, int q_hi) const {
  const auto& R = algebra_->poly_ring();
  for (int q = q_lo; q <= q_hi; ++q) {
    for (int n = n_lo; n <= n_hi; ++n) {
      if (dim(n, q) == 0) continue;
      if (!(differential(n + 1, q) * differential(n, q)).is_zero())
        throw IntegrityError("module differential squares to nonzero at (" + std::to_string(n) + "," +
                             std::to_string(q) + ")");
      for (std::size_t v = 0; v < R->nvars(); ++v) {
        const Variable& var = R->var(v);
        const Poly& dv = algebra_->d_var(v);
        for (int j = 0; j < dim(n, q); ++j) {
          SVec x = unit_vector(j);
          SVec lhs = differential(n + var.hom, q + var.weight).apply(act_var(v, n, q).apply(x));
          SVec rhs = act(dv, n, q, x);
          rhs = add_scaled(rhs, act_var(v, n + 1, q).apply(differential(n, q).apply(x)), sign_of(var.hom));
          if (lhs != rhs)
            throw IntegrityError("Leibniz rule fails for " + var.name + " at (" + std::to_string(n) + "," +
                                 std::to_string(q) + ")");
        }
      }
    }
  }
}

// ---------------------------------------------------------- SemifreeModule

SemifreeModule::SemifreeModule(DGAPtr algebra, std::vector<SemifreeGenerator> generators)
    : DGModule(std::move(algebra)), gens_(std::move(generators)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    for (auto& [j, t] : gens_[i].d) {
      if (!t.ring()) t = this->algebra()->ring()->zero();
      if (j < 0 || static_cast<std::size_t>(j) >= i)
        throw StructuralError("semifree generator " + gens_[i].name + " has a differential on a later generator");
      t = this->algebra()->ring()->normal_form(t);
      if (t.is_zero()) continue;
      const auto& g = gens_[static_cast<std::size_t>(j)];
      if (t.hom_degree() + g.hom != gens_[i].hom + 1 || t.internal_degree() + g.weight != gens_[i].weight)
        throw StructuralError("semifree differential of " + gens_[i].name + " has the wrong bidegree");
    }
  }
}

const SemifreeModule::Layout& SemifreeModule::layout(int n, int q) const {
  auto key = std::make_pair(n, q);
  std::lock_guard<std::mutex> lock(layout_mu_);
  auto it = layouts_.find(key);
  if (it != layouts_.end()) return it->second;
  Layout L;
  L.offsets.resize(gens_.size(), -1);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    int d = algebra()->dim(n - gens_[i].hom, q - gens_[i].weight);
    if (d > 0) {
      L.offsets[i] = L.dim;
      L.dim += d;
    }
  }
  return layouts_.emplace(key, std::move(L)).first->second;
}

int SemifreeModule::dim(int n, int q) const { return layout(n, q).dim; }

int SemifreeModule::offset(int i, int n, int q) const { return layout(n, q).offsets[static_cast<std::size_t>(i)]; }

SVec SemifreeModule::embed(int i, const Poly& coefficient, int n, int q) const {
  if (coefficient.is_zero()) return {};
  const auto& g = gens_[static_cast<std::size_t>(i)];
  SVec v = algebra()->ring()->to_vector(coefficient, n - g.hom, q - g.weight);
  if (v.empty()) return v;
  int off = offset(i, n, q);
  if (off < 0) throw IntegrityError("embedding into an empty block of " + g.name);
  return shifted(v, off);
}

std::vector<std::pair<int, Poly>> SemifreeModule::decompose(const SVec& v, int n, int q) const {
  const Layout& L = layout(n, q);
  std::vector<std::pair<int, Poly>> out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < gens_.size() && pos < v.size(); ++i) {
    int off = L.offsets[i];
    if (off < 0) continue;
    const auto& g = gens_[i];
    int d = algebra()->dim(n - g.hom, q - g.weight);
    SVec part;
    while (pos < v.size() && v[pos].first < off + d) {
      part.emplace_back(v[pos].first - off, v[pos].second);
      ++pos;
    }
    if (!part.empty())
      out.emplace_back(static_cast<int>(i), algebra()->ring()->from_vector(part, n - g.hom, q - g.weight));
  }
  return out;
}

int SemifreeModule::hom_max() const {
  int m = INT_MIN / 4;
  for (const auto& g : gens_) m = std::max(m, g.hom);
  return m;
}

int SemifreeModule::hom_min() const {
  for (const auto& v : algebra()->poly_ring()->vars())
    if (v.hom != 0) return INT_MIN / 4;
  int m = INT_MAX / 4;
  for (const auto& g : gens_) m = std::min(m, g.hom);
  return gens_.empty() ? 0 : m;
}

std::optional<int> SemifreeModule::internal_max() const {
  auto top = ring_top(*algebra());
  if (!top) return std::nullopt;
  int m = INT_MIN / 4;
  for (const auto& g : gens_) m = std::max(m, g.weight + *top);
  return m;
}

int SemifreeModule::internal_min() const {
  int m = INT_MAX / 4;
  for (const auto& g : gens_) m = std::min(m, g.weight);
  return m;
}

std::string SemifreeModule::label(int n, int q, int j) const {
  const Layout& L = layout(n, q);
  for (std::size_t i = gens_.size(); i-- > 0;) {
    int off = L.offsets[i];
    if (off >= 0 && j >= off) {
      const auto& b = algebra()->basis(n - gens_[i].hom, q - gens_[i].weight);
      return algebra()->poly_ring()->monomial_string(b[static_cast<std::size_t>(j - off)]) + "·" + gens_[i].name;
    }
  }
  return "?";
}

SparseMatrix SemifreeModule::compute_differential(int n, int q) const {
  const Layout& L = layout(n, q);
  const auto& T = *algebra();
  const auto& R = T.poly_ring();
  ColumnBuilder cb(L.dim);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (L.offsets[i] < 0) continue;
    const auto& g = gens_[i];
    const auto& basis = T.basis(n - g.hom, q - g.weight);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      int col = L.offsets[i] + static_cast<int>(b);
      Poly m = Poly::monomial(R, basis[b], 1);
      cb.add(col, 0, embed(static_cast<int>(i), T.d(m), n + 1, q), 1);
      Scalar s = sign_of(n - g.hom);
      for (const auto& [j, t] : g.d) {
        if (t.is_zero()) continue;
        cb.add(col, 0, embed(j, T.ring()->multiply(m, t), n + 1, q), s);
      }
    }
  }
  return cb.build(dim(n + 1, q));
}

SparseMatrix SemifreeModule::compute_act_var(std::size_t v, int n, int q) const {
  const Layout& L = layout(n, q);
  const auto& T = *algebra();
  const auto& R = T.poly_ring();
  const Variable& var = R->var(v);
  Poly x = Poly::variable(R, v);
  ColumnBuilder cb(L.dim);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (L.offsets[i] < 0) continue;
    const auto& basis = T.basis(n - gens_[i].hom, q - gens_[i].weight);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Poly p = T.ring()->multiply(x, Poly::monomial(R, basis[b], 1));
      cb.add(L.offsets[i] + static_cast<int>(b), 0, embed(static_cast<int>(i), p, n + var.hom, q + var.weight), 1);
    }
  }
  return cb.build(dim(n + var.hom, q + var.weight));
}

void SemifreeModule::check_generators() const {
  auto one = algebra()->ring()->one();
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    SVec e = embed(static_cast<int>(i), one, g.hom, g.weight);
    SVec dd = differential(g.hom + 1, g.weight).apply(differential(g.hom, g.weight).apply(e));
    if (!dd.empty()) throw IntegrityError("d∘d ≠ 0 on semifree generator " + g.name);
  }
}

// ----------------------------------------------------------- AlgebraModule

std::optional<int> AlgebraModule::internal_max() const { return ring_top(*algebra()); }

int AlgebraModule::hom_min() const {
  int lo = 0;
  for (const auto& v : algebra()->poly_ring()->vars()) {
    if (v.hom == 0) continue;
    if (!v.odd()) return INT_MIN / 4;
    lo += v.hom;
  }
  return lo;
}

std::string AlgebraModule::label(int n, int q, int j) const {
  return algebra()->poly_ring()->monomial_string(algebra()->basis(n, q)[static_cast<std::size_t>(j)]);
}

SparseMatrix AlgebraModule::compute_act_var(std::size_t v, int n, int q) const {
  return algebra()->mult_matrix(Poly::variable(algebra()->poly_ring(), v), n, q);
}

// ---------------------------------------------------------- QuotientModule

QuotientModule::QuotientModule(DGAPtr ring, std::vector<int> generator_degrees, std::vector<std::vector<Poly>> relations,
                               int shift)
    : DGModule(std::move(ring)), gdeg_(std::move(generator_degrees)), rels_(std::move(relations)), shift_(shift) {
  for (std::size_t i = 0; i < algebra()->nvars(); ++i)
    if (algebra()->poly_ring()->var(i).hom != 0)
      throw StructuralError("presented modules need a ring concentrated in degree 0");
  for (auto& r : rels_) {
    if (r.size() != gdeg_.size()) throw StructuralError("relation length differs from the number of generators");
    std::optional<int> deg;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!r[j].ring()) r[j] = algebra()->ring()->zero();
      r[j] = algebra()->ring()->normal_form(r[j]);
      if (r[j].is_zero()) continue;
      if (!r[j].is_homogeneous()) throw UngradedRing("module relation is not homogeneous");
      int d = r[j].internal_degree() + gdeg_[j];
      if (deg && *deg != d) throw UngradedRing("module relation is not homogeneous");
      deg = d;
    }
    rdeg_.push_back(deg.value_or(INT_MAX / 4));
  }
}

const QuotientModule::Piece& QuotientModule::piece(int q) const {
  std::lock_guard<std::mutex> lock(piece_mu_);
  auto it = pieces_.find(q);
  if (it != pieces_.end()) return *it->second;
  auto P = std::make_unique<Piece>();
  const auto& B = *algebra();
  for (int g : gdeg_) {
    P->offsets.push_back(P->free_dim);
    P->free_dim += B.dim(0, q - g);
  }
  for (std::size_t r = 0; r < rels_.size(); ++r) {
    if (rdeg_[r] > q) continue;
    for (const auto& m : B.basis(0, q - rdeg_[r])) {
      Poly mono = Poly::monomial(B.poly_ring(), m, 1);
      std::vector<std::pair<int, Scalar>> acc;
      for (std::size_t j = 0; j < gdeg_.size(); ++j) {
        if (rels_[r][j].is_zero()) continue;
        for (auto& [i, c] : B.ring()->to_vector(B.ring()->multiply(mono, rels_[r][j]), 0, q - gdeg_[j]))
          acc.emplace_back(i + P->offsets[j], c);
      }
      P->relations.insert(make_svec(std::move(acc)));
    }
  }
  for (int c = 0; c < P->free_dim; ++c) {
    if (P->relations.is_pivot(c)) continue;
    P->index[c] = static_cast<int>(P->basis.size());
    P->basis.push_back(c);
  }
  return *pieces_.emplace(q, std::move(P)).first->second;
}

int QuotientModule::dim(int n, int q) const {
  if (n != shift_) return 0;
  if (q < internal_min()) return 0;
  return static_cast<int>(piece(q).basis.size());
}

int QuotientModule::internal_min() const {
  int m = INT_MAX / 4;
  for (int g : gdeg_) m = std::min(m, g);
  return m;
}

std::optional<int> QuotientModule::internal_max() const {
  auto top = ring_top(*algebra());
  if (!top) return std::nullopt;
  int m = INT_MIN / 4;
  for (int g : gdeg_) m = std::max(m, g + *top);
  return m;
}

std::string QuotientModule::label(int, int q, int j) const {
  const Piece& P = piece(q);
  int c = P.basis[static_cast<std::size_t>(j)];
  std::size_t g = 0;
  while (g + 1 < P.offsets.size() && P.offsets[g + 1] <= c) ++g;
  const auto& b = algebra()->basis(0, q - gdeg_[g]);
  std::string mono = algebra()->poly_ring()->monomial_string(b[static_cast<std::size_t>(c - P.offsets[g])]);
  return gdeg_.size() == 1 ? mono : mono + "·g" + std::to_string(g + 1);
}

SVec QuotientModule::reduce_free(const SVec& v, int q) const {
  const Piece& P = piece(q);
  std::vector<std::pair<int, Scalar>> out;
  for (const auto& [i, c] : P.relations.reduce(v)) out.emplace_back(P.index.at(i), c);
  return make_svec(std::move(out));
}

SVec QuotientModule::element(const std::vector<Poly>& coefficients, int q) const {
  const Piece& P = piece(q);
  std::vector<std::pair<int, Scalar>> acc;
  for (std::size_t j = 0; j < coefficients.size() && j < gdeg_.size(); ++j) {
    if (!coefficients[j].ring() || coefficients[j].is_zero()) continue;
    for (auto& [i, c] : algebra()->ring()->to_vector(coefficients[j], 0, q - gdeg_[j]))
      acc.emplace_back(i + P.offsets[j], c);
  }
  return reduce_free(make_svec(std::move(acc)), q);
}

SparseMatrix QuotientModule::compute_differential(int n, int q) const { return SparseMatrix(dim(n + 1, q), dim(n, q)); }

SparseMatrix QuotientModule::compute_act_var(std::size_t v, int n, int q) const {
  const auto& B = *algebra();
  const Variable& var = B.poly_ring()->var(v);
  int tq = q + var.weight;
  SparseMatrix M(dim(n + var.hom, tq), dim(n, q));
  if (M.cols() == 0 || M.rows() == 0) return M;
  const Piece& P = piece(q);
  const Piece& T = piece(tq);
  Poly x = Poly::variable(B.poly_ring(), v);
  for (int j = 0; j < M.cols(); ++j) {
    int c = P.basis[static_cast<std::size_t>(j)];
    std::size_t g = 0;
    while (g + 1 < P.offsets.size() && P.offsets[g + 1] <= c) ++g;
    const auto& b = B.basis(0, q - gdeg_[g]);
    Poly p = B.ring()->multiply(x, Poly::monomial(B.poly_ring(), b[static_cast<std::size_t>(c - P.offsets[g])], 1));
    SVec free = shifted(B.ring()->to_vector(p, 0, tq - gdeg_[g]), T.offsets[g]);
    M.set_column(j, reduce_free(free, tq));
  }
  return M;
}

// ------------------------------------------------------- FreeComplexModule

FreeComplexModule::FreeComplexModule(DGAPtr ring, FreeComplex complex) : DGModule(std::move(ring)), fc_(std::move(complex)) {
  for (std::size_t i = 0; i < algebra()->nvars(); ++i)
    if (algebra()->poly_ring()->var(i).hom != 0)
      throw StructuralError("free complexes need a ring concentrated in degree 0");
}

int FreeComplexModule::dim(int n, int q) const {
  if (n < fc_.n_min() || n > fc_.n_max()) return 0;
  int d = 0;
  for (int g : fc_.generators(n)) d += algebra()->dim(0, q - g);
  return d;
}

int FreeComplexModule::offset(int n, int g, int q) const {
  int d = 0;
  const auto& gens = fc_.generators(n);
  for (int i = 0; i < g; ++i) d += algebra()->dim(0, q - gens[static_cast<std::size_t>(i)]);
  return d;
}

int FreeComplexModule::internal_min() const {
  int m = INT_MAX / 4;
  for (int n = fc_.n_min(); n <= fc_.n_max(); ++n)
    for (int g : fc_.generators(n)) m = std::min(m, g);
  return m;
}

std::optional<int> FreeComplexModule::internal_max() const {
  auto top = ring_top(*algebra());
  if (!top) return std::nullopt;
  int m = INT_MIN / 4;
  for (int n = fc_.n_min(); n <= fc_.n_max(); ++n)
    for (int g : fc_.generators(n)) m = std::max(m, g + *top);
  return m;
}

SparseMatrix FreeComplexModule::compute_differential(int n, int q) const {
  ColumnBuilder cb(dim(n, q));
  const auto& B = *algebra();
  if (n >= fc_.n_min() && n < fc_.n_max()) {
    const auto& gens = fc_.generators(n);
    const auto& tgens = fc_.generators(n + 1);
    const auto& D = fc_.d(n);
    int col = 0;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      for (const auto& m : B.basis(0, q - gens[g])) {
        Poly mono = Poly::monomial(B.poly_ring(), m, 1);
        for (std::size_t i = 0; i < tgens.size(); ++i) {
          const Poly& e = D[g][i];
          if (!e.ring() || e.is_zero()) continue;
          cb.add(col, offset(n + 1, static_cast<int>(i), q),
                 B.ring()->to_vector(B.ring()->multiply(mono, e), 0, q - tgens[i]), 1);
        }
        ++col;
      }
    }
  }
  return cb.build(dim(n + 1, q));
}

SparseMatrix FreeComplexModule::compute_act_var(std::size_t v, int n, int q) const {
  const auto& B = *algebra();
  const Variable& var = B.poly_ring()->var(v);
  ColumnBuilder cb(dim(n, q));
  Poly x = Poly::variable(B.poly_ring(), v);
  if (n >= fc_.n_min() && n <= fc_.n_max()) {
    const auto& gens = fc_.generators(n);
    int col = 0;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      for (const auto& m : B.basis(0, q - gens[g])) {
        Poly p = B.ring()->multiply(x, Poly::monomial(B.poly_ring(), m, 1));
        cb.add(col, offset(n, static_cast<int>(g), q + var.weight),
               B.ring()->to_vector(p, 0, q + var.weight - gens[g]), 1);
        ++col;
      }
    }
  }
  return cb.build(dim(n + var.hom, q + var.weight));
}

// -------------------------------------------------------- RestrictedModule

RestrictedModule::RestrictedModule(ModPtr module, DGAlgebraMap along)
    : DGModule(along.source()), base_(std::move(module)), along_(std::move(along)) {
  if (along_.target()->poly_ring() != base_->algebra()->poly_ring())
    throw StructuralError("restriction map does not land in the module's algebra");
}

SparseMatrix RestrictedModule::compute_act_var(std::size_t v, int n, int q) const {
  const Variable& var = algebra()->poly_ring()->var(v);
  const Poly& im = along_.images()[v];
  if (im.is_zero()) return SparseMatrix(dim(n + var.hom, q + var.weight), dim(n, q));
  return base_->act_matrix(im, n, q);
}

// ---------------------------------------------------------- ExplicitModule

ExplicitModule::ExplicitModule(DGAPtr algebra, int n_lo, int n_hi, int q_lo, int q_hi)
    : DGModule(std::move(algebra)), n_lo_(n_lo), n_hi_(n_hi), q_lo_(q_lo), q_hi_(q_hi) {}

void ExplicitModule::set_dim(int n, int q, int d) { dims_[{n, q}] = d; }
void ExplicitModule::set_differential(int n, int q, SparseMatrix m) { d_[{n, q}] = std::move(m); }
void ExplicitModule::set_action(std::size_t v, int n, int q, SparseMatrix m) { act_[{v, n, q}] = std::move(m); }

int ExplicitModule::dim(int n, int q) const {
  auto it = dims_.find({n, q});
  return it == dims_.end() ? 0 : it->second;
}

SparseMatrix ExplicitModule::compute_differential(int n, int q) const {
  auto it = d_.find({n, q});
  if (it != d_.end()) return it->second;
  return SparseMatrix(dim(n + 1, q), dim(n, q));
}

SparseMatrix ExplicitModule::compute_act_var(std::size_t v, int n, int q) const {
  auto it = act_.find({v, n, q});
  if (it != act_.end()) return it->second;
  const Variable& var = algebra()->poly_ring()->var(v);
  return SparseMatrix(dim(n + var.hom, q + var.weight), dim(n, q));
}

// -------------------------------------------------------- SemifreeMorphism

SemifreeMorphism::SemifreeMorphism(SemifreePtr source, ModPtr target, int k, int r, std::vector<SVec> values)
    : source_(std::move(source)), target_(std::move(target)), k_(k), r_(r), values_(std::move(values)) {
  if (values_.size() != source_->size()) throw StructuralError("morphism needs one value per generator");
  if (source_->algebra()->poly_ring() != target_->algebra()->poly_ring())
    throw StructuralError("morphism between modules over different algebras");
}

SparseMatrix SemifreeMorphism::matrix(int n, int q) const {
  auto key = std::make_pair(n, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const auto& P = *source_;
  const auto& T = *P.algebra();
  ColumnBuilder cb(P.dim(n, q));
  for (std::size_t i = 0; i < P.size(); ++i) {
    int off = P.offset(static_cast<int>(i), n, q);
    if (off < 0 || values_[i].empty()) continue;
    const auto& g = P.generators()[i];
    const auto& basis = T.basis(n - g.hom, q - g.weight);
    Scalar s = sign_of(k_ * (n - g.hom));
    for (std::size_t b = 0; b < basis.size(); ++b)
      cb.add(off + static_cast<int>(b), 0, target_->act_monomial(basis[b], g.hom + k_, g.weight + r_, values_[i]), s);
  }
  SparseMatrix m = cb.build(target_->dim(n + k_, q + r_));
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, m);
  return m;
}

SVec SemifreeMorphism::apply(const SVec& x, int n, int q) const {
  if (x.empty()) return {};
  return matrix(n, q).apply(x);
}

SemifreeMorphism SemifreeMorphism::after(const SemifreeMorphism& g) const {
  if (&g.target() != static_cast<const DGModule*>(source_.get()))
    throw StructuralError("composing morphisms that do not match");
  std::vector<SVec> vals;
  const auto& P = *g.semifree_source();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& e = P.generators()[i];
    vals.push_back(apply(g.values()[i], e.hom + g.hom_shift(), e.weight + g.internal_shift()));
  }
  return SemifreeMorphism(g.semifree_source(), target_, k_ + g.hom_shift(), r_ + g.internal_shift(), vals);
}

std::vector<SVec> SemifreeMorphism::coboundary() const {
  std::vector<SVec> out;
  const auto& P = *source_;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& g = P.generators()[i];
    int n = g.hom + k_, q = g.weight + r_;
    SVec v = values_[i].empty() ? SVec{} : target_->differential(n, q).apply(values_[i]);
    for (const auto& [j, t] : g.d) {
      if (t.is_zero() || values_[static_cast<std::size_t>(j)].empty()) continue;
      const auto& gj = P.generators()[static_cast<std::size_t>(j)];
      SVec tv = target_->act(t, gj.hom + k_, gj.weight + r_, values_[static_cast<std::size_t>(j)]);
      v = add_scaled(v, tv, -sign_of(k_) * sign_of(k_ * t.hom_degree()));
    }
    out.push_back(v);
  }
  return out;
}

bool SemifreeMorphism::is_cocycle() const {
  for (const auto& v : coboundary())
    if (!v.empty()) return false;
  return true;
}

// ------------------------------------------------------------------ cones

int cone_dim(const ModuleMap& f, int n, int q) { return f.source().dim(n + 1, q) + f.target().dim(n, q); }

SparseMatrix cone_differential(const ModuleMap& f, int n, int q) {
  const auto& P = f.source();
  const auto& M = f.target();
  int p1 = P.dim(n + 1, q), p2 = P.dim(n + 2, q);
  int m0 = M.dim(n, q), m1 = M.dim(n + 1, q);
  ColumnBuilder cb(p1 + m0);
  if (p1 > 0) {
    const SparseMatrix& dP = P.differential(n + 1, q);
    SparseMatrix fm = f.matrix(n + 1, q);
    for (int j = 0; j < p1; ++j) {
      cb.add(j, 0, dP.column(j), -1);
      cb.add(j, p2, fm.column(j), 1);
    }
  }
  if (m0 > 0) {
    const SparseMatrix& dM = M.differential(n, q);
    for (int j = 0; j < m0; ++j) cb.add(p1 + j, p2, dM.column(j), 1);
  }
  return cb.build(p2 + m1);
}

// ------------------------------------------------------- semifree_resolve

ModuleResolution semifree_resolve(const ModPtr& module, const Bounds& bounds, const std::string& prefix) {
  const DGModule& M = *module;
  const DGAPtr& T = M.algebra();
  std::vector<SemifreeGenerator> gens;
  std::vector<SVec> values;
  int counter = 0;
  SemifreePtr P = std::make_shared<const SemifreeModule>(T, gens);
  auto pi = std::make_shared<const SemifreeMorphism>(P, module, 0, 0, values);
  auto rebuild = [&]() {
    P = std::make_shared<const SemifreeModule>(T, gens);
    pi = std::make_shared<const SemifreeMorphism>(P, module, 0, 0, values);
  };
  const Scalar one = Scalar::one(T->ring()->field());
  int top = M.hom_max();
  for (int n = top; n >= -bounds.hom_bound; --n) {
    for (int q = M.internal_min(); q <= bounds.internal_bound; ++q) {
      int cd = cone_dim(*pi, n, q);
      if (cd > 0) {
        Subquotient H(cd, kernel(cone_differential(*pi, n, q)), image_basis(cone_differential(*pi, n - 1, q)));
        if (H.dim() > 0) {
          int pd = P->dim(n + 1, q);
          std::vector<SemifreeGenerator> fresh;
          std::vector<SVec> fresh_values;
          for (const auto& r : H.representatives()) {
            SVec p, m;
            for (const auto& [i, c] : r) {
              if (i < pd) p.emplace_back(i, c);
              else m.emplace_back(i - pd, -c);
            }
            fresh.push_back(SemifreeGenerator{prefix + std::to_string(++counter), n, q, P->decompose(p, n + 1, q)});
            fresh_values.push_back(m);
          }
          for (std::size_t i = 0; i < fresh.size(); ++i) {
            gens.push_back(fresh[i]);
            values.push_back(fresh_values[i]);
          }
          rebuild();
        }
      }
      int md = M.dim(n, q);
      if (md == 0) continue;
      SparseMatrix im = pi->matrix(n, q);
      Echelon E;
      for (int j = 0; j < im.cols(); ++j) E.insert(im.column(j));
      if (E.rank() == md) continue;
      for (int c = 0; c < md; ++c) {
        SVec u = unit_vector(c, one);
        if (!E.insert(u)) continue;
        SVec du = M.differential(n, q).apply(u);
        int idx = static_cast<int>(gens.size());
        gens.push_back(SemifreeGenerator{prefix + std::to_string(++counter), n + 1, q, {}});
        values.push_back(du);
        gens.push_back(SemifreeGenerator{prefix + std::to_string(++counter), n, q, {{idx, T->ring()->one()}}});
        values.push_back(u);
      }
      rebuild();
    }
  }
  ModuleResolution res;
  res.module = P;
  res.augmentation = pi;
  res.bounds = bounds;
  return res;
}

// ------------------------------------------------------------ lift_through

SemifreeMorphism lift_through(const SemifreeMorphism& phi, const ModPtr& Q, const ModuleMap& pi_Q,
                              int min_generator_hom) {
  const auto& P = *phi.semifree_source();
  const int k = phi.hom_shift(), r = phi.internal_shift();
  const DGModule& N = phi.target();
  std::vector<SVec> vals(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& g = P.generators()[i];
    if (g.hom < min_generator_hom) continue;
    int a = g.hom + k, b = g.weight + r;
    SVec rhs_d;
    for (const auto& [j, t] : g.d) {
      if (t.is_zero() || vals[static_cast<std::size_t>(j)].empty()) continue;
      const auto& gj = P.generators()[static_cast<std::size_t>(j)];
      SVec tv = Q->act(t, gj.hom + k, gj.weight + r, vals[static_cast<std::size_t>(j)]);
      rhs_d = add_scaled(rhs_d, tv, sign_of(k) * sign_of(k * t.hom_degree()));
    }
    const SVec& target = phi.values()[i];
    if (target.empty() && rhs_d.empty()) continue;
    int nd = N.dim(a, b), qd = Q->dim(a, b), qd1 = Q->dim(a + 1, b);
    SparseMatrix pim = pi_Q.matrix(a, b);
    const SparseMatrix& dq = Q->differential(a, b);
    ColumnBuilder cb(qd);
    for (int j = 0; j < qd; ++j) {
      cb.add(j, 0, pim.column(j), 1);
      cb.add(j, nd, dq.column(j), 1);
    }
    SparseMatrix A = cb.build(nd + qd1);
    SVec rhs = target;
    for (const auto& [idx, c] : rhs_d) rhs.emplace_back(idx + nd, c);
    auto sol = solve(A, rhs);
    if (!sol) throw BoundInsufficient("lifting through the resolution failed at generator " + g.name, a);
    vals[i] = *sol;
  }
  return SemifreeMorphism(phi.semifree_source(), Q, k, r, vals);
}

// ------------------------------------------------------------- HomComplex

HomComplex::HomComplex(SemifreePtr P, ModPtr M) : P_(std::move(P)), M_(std::move(M)) {
  if (P_->algebra()->poly_ring() != M_->algebra()->poly_ring())
    throw StructuralError("Hom between modules over different algebras");
}

int HomComplex::dim(int k, int r) const {
  int d = 0;
  for (const auto& g : P_->generators()) d += M_->dim(g.hom + k, g.weight + r);
  return d;
}

int HomComplex::offset(int i, int k, int r) const {
  int d = 0;
  for (int j = 0; j < i; ++j) {
    const auto& g = P_->generators()[static_cast<std::size_t>(j)];
    d += M_->dim(g.hom + k, g.weight + r);
  }
  return d;
}

SparseMatrix HomComplex::differential(int k, int r) const {
  const auto& gens = P_->generators();
  std::vector<int> off0(gens.size()), off1(gens.size());
  int d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    off0[i] = d0;
    off1[i] = d1;
    d0 += M_->dim(gens[i].hom + k, gens[i].weight + r);
    d1 += M_->dim(gens[i].hom + k + 1, gens[i].weight + r);
  }
  ColumnBuilder cb(d0);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    int mj = M_->dim(gens[j].hom + k, gens[j].weight + r);
    if (mj == 0) continue;
    const SparseMatrix& dM = M_->differential(gens[j].hom + k, gens[j].weight + r);
    for (int c = 0; c < mj; ++c) cb.add(off0[j] + c, off1[j], dM.column(c), 1);
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (M_->dim(gens[i].hom + k + 1, gens[i].weight + r) == 0) continue;
    for (const auto& [j, t] : gens[i].d) {
      if (t.is_zero()) continue;
      const auto& gj = gens[static_cast<std::size_t>(j)];
      int mj = M_->dim(gj.hom + k, gj.weight + r);
      if (mj == 0) continue;
      SparseMatrix A = M_->act_matrix(t, gj.hom + k, gj.weight + r);
      Scalar s = -sign_of(k) * sign_of(k * t.hom_degree());
      for (int c = 0; c < mj; ++c) cb.add(off0[static_cast<std::size_t>(j)] + c, off1[i], A.column(c), s);
    }
  }
  return cb.build(d1);
}

BoundedComplex HomComplex::slice(int r, int k_lo, int k_hi) const {
  std::vector<int> dims;
  for (int k = k_lo; k <= k_hi; ++k) dims.push_back(dim(k, r));
  BoundedComplex C(k_lo, k_hi, dims);
  for (int k = k_lo; k < k_hi; ++k) C.set_d(k, differential(k, r));
  C.open_above = true;
  return C;
}

SemifreeMorphism HomComplex::morphism(const SVec& v, int k, int r) const {
  const auto& gens = P_->generators();
  std::vector<SVec> vals(gens.size());
  std::vector<int> offs;
  int d = 0;
  for (const auto& g : gens) {
    offs.push_back(d);
    d += M_->dim(g.hom + k, g.weight + r);
  }
  for (const auto& [idx, c] : v) {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(offs.begin(), offs.end(), idx) - offs.begin() - 1);
    vals[i].emplace_back(idx - offs[i], c);
  }
  return SemifreeMorphism(P_, M_, k, r, vals);
}

SVec HomComplex::element(const SemifreeMorphism& f) const {
  std::vector<std::pair<int, Scalar>> acc;
  int d = 0;
  const auto& gens = P_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (const auto& [idx, c] : f.values()[i]) acc.emplace_back(idx + d, c);
    d += M_->dim(gens[i].hom + f.hom_shift(), gens[i].weight + f.internal_shift());
  }
  return make_svec(std::move(acc));
}

std::pair<int, int> HomComplex::internal_range(int k_lo, int k_hi, int r_cap) const {
  int lo = INT_MAX / 4, hi = INT_MIN / 4;
  int mtop = M_->internal_max().value_or(r_cap + 1);
  for (const auto& g : P_->generators()) {
    if (g.hom + k_hi < M_->hom_min() || g.hom + k_lo > M_->hom_max()) continue;
    lo = std::min(lo, M_->internal_min() - g.weight);
    hi = std::max(hi, mtop - g.weight);
  }
  hi = std::min(hi, r_cap);
  return {lo, hi};
}

// ---------------------------------------------------------- TensorComplex

TensorComplex::TensorComplex(ModPtr M, SemifreePtr P) : M_(std::move(M)), P_(std::move(P)) {
  if (P_->algebra()->poly_ring() != M_->algebra()->poly_ring())
    throw StructuralError("tensor product of modules over different algebras");
}

int TensorComplex::dim(int n, int q) const {
  int d = 0;
  for (const auto& g : P_->generators()) d += M_->dim(n - g.hom, q - g.weight);
  return d;
}

int TensorComplex::offset(int i, int n, int q) const {
  int d = 0;
  for (int j = 0; j < i; ++j) {
    const auto& g = P_->generators()[static_cast<std::size_t>(j)];
    d += M_->dim(n - g.hom, q - g.weight);
  }
  return d;
}

SparseMatrix TensorComplex::differential(int n, int q) const {
  const auto& gens = P_->generators();
  std::vector<int> off0(gens.size()), off1(gens.size());
  int d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    off0[i] = d0;
    off1[i] = d1;
    d0 += M_->dim(n - gens[i].hom, q - gens[i].weight);
    d1 += M_->dim(n + 1 - gens[i].hom, q - gens[i].weight);
  }
  ColumnBuilder cb(d0);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    int a = n - gens[i].hom, b = q - gens[i].weight;
    int mi = M_->dim(a, b);
    if (mi == 0) continue;
    const SparseMatrix& dM = M_->differential(a, b);
    for (int c = 0; c < mi; ++c) cb.add(off0[i] + c, off1[i], dM.column(c), 1);
    for (const auto& [j, t] : gens[i].d) {
      if (t.is_zero()) continue;
      SparseMatrix A = M_->act_matrix(t, a, b);
      if (A.rows() == 0) continue;
      Scalar s = sign_of(a) * sign_of(a * t.hom_degree());
      for (int c = 0; c < mi; ++c) cb.add(off0[i] + c, off1[static_cast<std::size_t>(j)], A.column(c), s);
    }
  }
  return cb.build(d1);
}

BoundedComplex TensorComplex::slice(int q, int n_lo, int n_hi) const {
  std::vector<int> dims;
  for (int n = n_lo; n <= n_hi; ++n) dims.push_back(dim(n, q));
  BoundedComplex C(n_lo, n_hi, dims);
  for (int n = n_lo; n < n_hi; ++n) C.set_d(n, differential(n, q));
  C.open_below = true;
  return C;
}

SparseMatrix TensorComplex::map_right(const SemifreeMorphism& f, const TensorComplex& target, int n, int q) const {
  const auto& gens = P_->generators();
  const auto& tgt = *target.P_;
  const int k = f.hom_shift(), r = f.internal_shift();
  ColumnBuilder cb(dim(n, q));
  int off = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    int a = n - gens[i].hom, b = q - gens[i].weight;
    int mi = M_->dim(a, b);
    if (mi == 0) continue;
    auto parts = tgt.decompose(f.values()[i], gens[i].hom + k, gens[i].weight + r);
    for (const auto& [j, s] : parts) {
      int toff = target.offset(j, n + k, q + r);
      for (const auto& [mono, c] : s.terms()) {
        Poly term = Poly::monomial(s.ring(), mono, c);
        int h = term.hom_degree();
        SparseMatrix A = M_->act_matrix(term, a, b);
        Scalar sg = sign_of(k * a) * sign_of(a * h);
        for (int col = 0; col < mi; ++col) cb.add(off + col, toff, A.column(col), sg);
      }
    }
    off += mi;
  }
  return cb.build(target.dim(n + k, q + r));
}

std::pair<int, int> TensorComplex::internal_range(int n_lo, int n_hi, int q_cap) const {
  int lo = INT_MAX / 4, hi = INT_MIN / 4;
  int mtop = M_->internal_max().value_or(q_cap + 1);
  for (const auto& g : P_->generators()) {
    if (n_hi - g.hom < M_->hom_min() || n_lo - g.hom > M_->hom_max()) continue;
    lo = std::min(lo, M_->internal_min() + g.weight);
    hi = std::max(hi, mtop + g.weight);
  }
  hi = std::min(hi, q_cap);
  return {lo, hi};
}

// ------------------------------------------------------------- bar_complex

BarResolution bar_complex(const DGAPtr& B_in, int max_length) {
  for (std::size_t i = 0; i < B_in->nvars(); ++i)
    if (B_in->poly_ring()->var(i).hom != 0) throw StructuralError("bar complex needs an algebra in degree 0");
  auto top = ring_top(*B_in);
  if (!top) throw OracleUnavailable("bar complex needs a finite-dimensional algebra");
  BarResolution bar;
  bar.B = std::make_shared<const DGAlgebra>(B_in->name(), B_in->ring(), B_in->differential(), 0);
  bar.env = enveloping(bar.B);
  const auto& B = *bar.B;
  const auto& E = bar.env.S;
  for (int q = 0; q <= *top; ++q)
    for (const auto& m : B.basis(0, q)) bar.letters.emplace_back(q, m);
  const int nl = static_cast<int>(bar.letters.size());
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> frontier{{}};
  for (int len = 0; len <= max_length; ++len) {
    std::vector<std::vector<int>> next;
    for (auto& w : frontier) {
      index[w] = static_cast<int>(bar.words.size());
      bar.words.push_back(w);
      if (len < max_length)
        for (int l = 0; l < nl; ++l) {
          auto w2 = w;
          w2.push_back(l);
          next.push_back(std::move(w2));
        }
    }
    frontier = std::move(next);
  }
  auto letter_poly = [&](int l) { return Poly::monomial(B.poly_ring(), bar.letters[static_cast<std::size_t>(l)].second, 1); };
  auto to_letters = [&](const Poly& p) {
    std::vector<std::pair<int, Scalar>> out;
    Poly nf = B.ring()->normal_form(p);
    for (const auto& [m, c] : nf.terms())
      for (int l = 0; l < nl; ++l)
        if (bar.letters[static_cast<std::size_t>(l)].second == m) out.emplace_back(l, c);
    return out;
  };
  std::vector<SemifreeGenerator> gens;
  for (const auto& w : bar.words) {
    SemifreeGenerator g;
    int wt = 0;
    std::ostringstream name;
    name << "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
      wt += bar.letters[static_cast<std::size_t>(w[i])].first;
      if (i) name << "|";
      name << B.poly_ring()->monomial_string(bar.letters[static_cast<std::size_t>(w[i])].second);
    }
    name << "]";
    g.name = name.str();
    g.hom = -static_cast<int>(w.size());
    g.weight = wt;
    const int n = static_cast<int>(w.size());
    if (n > 0) {
      std::map<int, Poly> acc;
      auto add = [&](int j, const Poly& c) {
        auto it = acc.find(j);
        if (it == acc.end()) acc.emplace(j, c);
        else it->second += c;
      };
      std::vector<int> tail(w.begin() + 1, w.end());
      add(index.at(tail), bar.env.j1.apply(letter_poly(w[0])));
      for (int i = 0; i + 1 < n; ++i) {
        Poly prod = B.ring()->multiply(letter_poly(w[static_cast<std::size_t>(i)]),
                                       letter_poly(w[static_cast<std::size_t>(i + 1)]));
        for (const auto& [l, c] : to_letters(prod)) {
          std::vector<int> w2(w.begin(), w.begin() + i);
          w2.push_back(l);
          w2.insert(w2.end(), w.begin() + i + 2, w.end());
          add(index.at(w2), E->ring()->one().scaled(c * sign_of(i + 1)));
        }
      }
      std::vector<int> head(w.begin(), w.end() - 1);
      add(index.at(head), bar.env.j2.apply(letter_poly(w.back())).scaled(sign_of(n)));
      for (auto& [j, c] : acc)
        if (!c.is_zero()) g.d.emplace_back(j, c);
    }
    gens.push_back(std::move(g));
  }
  bar.module = std::make_shared<const SemifreeModule>(E, gens);
  auto Bmod = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(bar.B), bar.env.mu);
  std::vector<SVec> vals(gens.size());
  vals[0] = unit_vector(0, Scalar::one(B.ring()->field()));
  bar.augmentation = std::make_shared<const SemifreeMorphism>(bar.module, Bmod, 0, 0, vals);
  return bar;
}

}  // namespace dgcohom
