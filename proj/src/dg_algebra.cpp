#include "dgcohom/dg_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "dgcohom/errors.hpp"

namespace dgcohom {

DGAlgebra::DGAlgebra(std::string name, QRingPtr ring, std::vector<Poly> differential, std::size_t ncoeff)
    : name_(std::move(name)), ring_(std::move(ring)), diff_(std::move(differential)), ncoeff_(ncoeff) {
  if (diff_.size() != ring_->nvars()) throw StructuralError("DG algebra needs one differential per variable");
  for (std::size_t i = 0; i < diff_.size(); ++i) {
    const Variable& v = ring_->ring()->var(i);
    if (!diff_[i].ring()) diff_[i] = ring_->zero();
    diff_[i] = ring_->normal_form(diff_[i]);
    if (v.hom == 0 && !diff_[i].is_zero()) throw StructuralError("degree-0 variable " + v.name + " has a differential");
    if (diff_[i].is_zero()) continue;
    if (!diff_[i].is_homogeneous() || diff_[i].hom_degree() != v.hom + 1 || diff_[i].internal_degree() != v.weight)
      throw StructuralError("differential of " + v.name + " is not of bidegree (" + std::to_string(v.hom + 1) + "," +
                            std::to_string(v.weight) + "): " + diff_[i].to_string());
  }
}

std::vector<std::size_t> DGAlgebra::generators() const {
  std::vector<std::size_t> g;
  for (std::size_t i = ncoeff_; i < nvars(); ++i) g.push_back(i);
  return g;
}

int DGAlgebra::generator_count(int n) const {
  int c = 0;
  for (std::size_t i = ncoeff_; i < nvars(); ++i)
    if (ring_->ring()->var(i).hom == n) ++c;
  return c;
}

Poly DGAlgebra::d_monomial(const Monomial& m) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = d_cache_.find(m);
    if (it != d_cache_.end()) return it->second;
  }
  const auto& R = ring_->ring();
  Poly out(R);
  int prefix_parity = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    int a = m[i];
    if (a == 0) continue;
    const Variable& v = R->var(i);
    if (!diff_[i].is_zero()) {
      Monomial pre(m.size()), post(m.size());
      for (std::size_t j = 0; j < i; ++j) pre[j] = m[j];
      for (std::size_t j = i + 1; j < m.size(); ++j) post[j] = m[j];
      Monomial mid(m.size());
      mid[i] = a - 1;
      Poly middle = Poly::monomial(R, mid, Scalar(a)) * diff_[i];
      Poly term = Poly::monomial(R, pre, 1) * middle * Poly::monomial(R, post, 1);
      if (prefix_parity) term = -term;
      out += term;
    }
    prefix_parity = (prefix_parity + a * (v.hom & 1)) & 1;
  }
  out = ring_->normal_form(out);
  std::lock_guard<std::mutex> lock(mu_);
  d_cache_.emplace(m, out);
  return out;
}

Poly DGAlgebra::d(const Poly& p) const {
  Poly out = ring_->zero();
  for (const auto& [m, c] : p.terms()) out += d_monomial(m).scaled(c);
  return out;
}

SparseMatrix DGAlgebra::d_matrix(int n, int q) const {
  const auto& b = basis(n, q);
  SparseMatrix M(dim(n + 1, q), static_cast<int>(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j) M.set_column(static_cast<int>(j), ring_->to_vector(d_monomial(b[j]), n + 1, q));
  return M;
}

SparseMatrix DGAlgebra::mult_matrix(const Poly& a, int n, int q) const {
  const auto& b = basis(n, q);
  int tn = n + a.hom_degree(), tq = q + a.internal_degree();
  SparseMatrix M(dim(tn, tq), static_cast<int>(b.size()));
  if (a.is_zero()) return M;
  for (std::size_t j = 0; j < b.size(); ++j)
    M.set_column(static_cast<int>(j), ring_->to_vector(a * Poly::monomial(poly_ring(), b[j], 1), tn, tq));
  return M;
}

BoundedComplex DGAlgebra::slice(int q, int n_lo, int n_hi) const {
  std::vector<int> dims;
  for (int n = n_lo; n <= n_hi; ++n) dims.push_back(dim(n, q));
  BoundedComplex C(n_lo, n_hi, dims);
  for (int n = n_lo; n < n_hi; ++n) C.set_d(n, d_matrix(n, q));
  C.open_below = true;
  return C;
}

Poly extend_poly(const Poly& p, const RingPtr& target) {
  Poly out(target);
  if (!p.ring()) return out;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(target->nvars(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i >= e.size()) {
        if (m[i] != 0) throw StructuralError("extend_poly: target ring is too small");
        continue;
      }
      e[i] = m[i];
    }
    out.add_term(Monomial(e), c);
  }
  return out;
}

std::shared_ptr<const DGAlgebra> DGAlgebra::adjoin(
    const std::vector<Variable>& vars, const std::function<std::vector<Poly>(const QRingPtr&)>& diffs) const {
  std::vector<Variable> all = poly_ring()->vars();
  for (const auto& v : vars) {
    if (poly_ring()->index_of(v.name) >= 0) throw StructuralError("duplicate generator name " + v.name);
    all.push_back(v);
  }
  RingPtr R = PolyRing::make(ring_->field(), all, poly_ring()->order());
  std::vector<Poly> rels;
  for (const auto& r : ring_->relations()) rels.push_back(extend_poly(r, R));
  auto Q = QuotientRing::make(ring_->name(), R, rels, ring_->filtration_mode());
  std::vector<Poly> d;
  for (const auto& p : diff_) d.push_back(extend_poly(p, R));
  auto extra = diffs(Q);
  if (extra.size() != vars.size()) throw StructuralError("adjoin: one differential per new generator");
  for (auto& p : extra) d.push_back(p);
  return std::make_shared<const DGAlgebra>(name_, Q, d, ncoeff_);
}

void DGAlgebra::check() const {
  auto gens = generators();
  for (auto i : gens) {
    if (!d(diff_[i]).is_zero())
      throw IntegrityError("d∘d ≠ 0 on generator " + poly_ring()->var(i).name);
  }
  for (auto i : gens) {
    for (auto j : gens) {
      Poly g = Poly::variable(poly_ring(), i), h = Poly::variable(poly_ring(), j);
      Poly lhs = d(ring_->multiply(g, h));
      Poly rhs = ring_->multiply(diff_[i], h);
      Poly t = ring_->multiply(g, diff_[j]);
      if (poly_ring()->var(i).odd()) rhs -= t;
      else rhs += t;
      if (lhs != ring_->normal_form(rhs)) throw IntegrityError("Leibniz rule fails on a generator pair");
    }
  }
}

std::string DGAlgebra::describe() const {
  std::ostringstream os;
  os << name_ << " = " << ring_->name() << "[";
  bool first = true;
  for (auto i : generators()) {
    if (!first) os << ", ";
    first = false;
    const auto& v = poly_ring()->var(i);
    os << v.name << "(" << v.hom << "," << v.weight << ")";
    if (!diff_[i].is_zero()) os << ": d=" << diff_[i].to_string();
  }
  os << "]";
  return os.str();
}

DGAPtr algebra_of_ring(const QRingPtr& ring) {
  std::vector<Poly> d(ring->nvars(), ring->zero());
  return std::make_shared<const DGAlgebra>(ring->name(), ring, d, ring->nvars());
}

DGAlgebraMap::DGAlgebraMap(DGAPtr source, DGAPtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)) {
  if (images.size() != source_->nvars()) throw StructuralError("DG algebra map needs one image per variable");
  for (auto& im : images) {
    if (!im.ring()) im = target_->ring()->zero();
    images_.push_back(target_->ring()->normal_form(im));
  }
  map_ = RingMap(source_->poly_ring(), target_->poly_ring(), images_);
}

Poly DGAlgebraMap::apply(const Poly& p) const { return target_->ring()->normal_form(map_.apply(p)); }

SparseMatrix DGAlgebraMap::matrix(int n, int q) const {
  const auto& b = source_->basis(n, q);
  SparseMatrix M(target_->dim(n, q), static_cast<int>(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j)
    M.set_column(static_cast<int>(j),
                 target_->ring()->to_vector(map_.apply_monomial(b[j]), n, q));
  return M;
}

DGAlgebraMap DGAlgebraMap::after(const DGAlgebraMap& first) const {
  if (first.target_.get() != source_.get()) throw StructuralError("composing maps that do not match");
  std::vector<Poly> im;
  for (const auto& p : first.images_) im.push_back(apply(p));
  return DGAlgebraMap(first.source_, target_, im);
}

bool DGAlgebraMap::commutes() const {
  for (std::size_t i = 0; i < source_->nvars(); ++i) {
    if (apply(source_->d_var(i)) != target_->d(images_[i])) return false;
  }
  return true;
}

DGAPtr koszul_complex(const QRingPtr& base, const std::vector<Poly>& elements) {
  auto A = algebra_of_ring(base);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Poly& f = elements[i];
    if (!f.is_homogeneous()) throw UngradedRing("Koszul element " + f.to_string() + " is not homogeneous");
    vars.push_back(Variable{"e" + std::to_string(i + 1), -1, f.is_zero() ? 1 : f.internal_degree()});
  }
  return A->adjoin(vars, [&](const QRingPtr& Q) {
    std::vector<Poly> d;
    for (const auto& f : elements) d.push_back(extend_poly(f, Q->ring()));
    return d;
  });
}

namespace {

SparseMatrix reverse_rows(const SparseMatrix& m) {
  SparseMatrix r(m.rows(), m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    std::vector<std::pair<int, Scalar>> col;
    for (const auto& [i, c] : m.column(j)) col.emplace_back(m.rows() - 1 - i, c);
    r.set_column(j, make_svec(std::move(col)));
  }
  return r;
}

SparseMatrix reverse_cols(const SparseMatrix& m) {
  SparseMatrix r(m.rows(), m.cols());
  for (int j = 0; j < m.cols(); ++j) r.set_column(m.cols() - 1 - j, m.column(j));
  return r;
}

SVec reverse_vec(const SVec& v, int dim) {
  std::vector<std::pair<int, Scalar>> out;
  for (const auto& [i, c] : v) out.emplace_back(dim - 1 - i, c);
  return make_svec(std::move(out));
}

void guard_characteristic(const FieldSpec& field, const Variable& v, int internal_bound) {
  std::uint32_t p = field.characteristic();
  if (p == 0) return;
  if (p == 2 && v.odd()) throw CharacteristicGuard("odd generators need characteristic different from 2");
  if (!v.odd() && v.hom < 0 && static_cast<long>(p) * v.weight <= internal_bound)
    throw CharacteristicGuard("even generator " + v.name + " of weight " + std::to_string(v.weight) +
                              " would need divided powers in characteristic " + std::to_string(p));
}

}  // namespace

BoundedComplex cone_slice(const DGAlgebraMap& phi, int q, int n_lo, int n_hi) {
  BoundedComplex C = phi.source()->slice(q, n_lo + 1, n_hi + 1);
  BoundedComplex D = phi.target()->slice(q, n_lo, n_hi);
  ChainMap f(&C, &D, 0);
  for (int n = n_lo + 1; n <= n_hi; ++n) f.set(n, phi.matrix(n, q));
  // the top of C maps outside D's window
  BoundedComplex K = cone(f);
  K.open_below = true;
  return K;
}

Resolution kill_cohomology(const DGAlgebraMap& start, const Bounds& bounds, const TateOptions& options,
                           const std::string& prefix) {
  DGAPtr X = start.source();
  DGAPtr Y = start.target();
  std::vector<Poly> images = start.images();
  Resolution res;
  res.bounds = bounds;
  int counter = 0;
  const FieldSpec field = X->ring()->field();
  for (int n = 0; n >= -bounds.hom_bound; --n) {
    for (int q = 0; q <= bounds.internal_bound; ++q) {
      DGAlgebraMap phi(X, Y, images);
      BoundedComplex K = cone_slice(phi, q, n - 1, n + 1);
      int dimn = K.dim(n);
      if (dimn == 0) continue;
      SparseMatrix dn = K.d(n), dprev = K.d(n - 1);
      if (options.reverse_pivots) {
        dn = reverse_cols(dn);
        dprev = reverse_rows(dprev);
      }
      Subquotient H(dimn, kernel(dn), image_basis(dprev));
      if (H.dim() == 0) continue;
      std::vector<SVec> reps = H.representatives();
      if (options.reverse_pivots)
        for (auto& r : reps) r = reverse_vec(r, dimn);
      if (options.reverse_order) std::reverse(reps.begin(), reps.end());
      int xdim = X->dim(n + 1, q);
      std::vector<Variable> vars;
      std::vector<Poly> ps, ms;
      for (const auto& r : reps) {
        SVec pv, mv;
        for (const auto& [i, c] : r) {
          if (i < xdim) pv.emplace_back(i, c);
          else mv.emplace_back(i - xdim, c);
        }
        Variable v{prefix + std::to_string(++counter), n, q};
        guard_characteristic(field, v, bounds.internal_bound);
        vars.push_back(v);
        ps.push_back(X->ring()->from_vector(pv, n + 1, q));
        ms.push_back(-Y->ring()->from_vector(mv, n, q));
        res.adjoined.emplace_back(n, q);
      }
      X = X->adjoin(vars, [&](const QRingPtr& Q) {
        std::vector<Poly> d;
        for (const auto& p : ps) d.push_back(extend_poly(p, Q->ring()));
        return d;
      });
      for (auto& im : ms) images.push_back(im);
    }
  }
  res.algebra = X;
  res.augmentation = DGAlgebraMap(X, Y, images);
  return res;
}

Resolution tate_resolve(const RingMorphism& f, const Bounds& bounds, const TateOptions& options) {
  const auto& A = f.source();
  const auto& B = f.target();
  if (!(A->is_graded() && B->is_graded() && f.is_graded()) && !(A->filtration_mode() || B->filtration_mode()))
    throw UngradedRing("Tate resolution needs weighted-homogeneous input");
  std::vector<int> hit(B->nvars(), -1);
  for (std::size_t a = 0; a < A->nvars(); ++a) {
    const Poly& im = f.images()[a];
    if (im.size() != 1 || !im.terms().begin()->second.is_one()) continue;
    auto s = im.terms().begin()->first.support();
    if (s.size() == 1 && s[0].second == 1 && hit[static_cast<std::size_t>(s[0].first)] < 0)
      hit[static_cast<std::size_t>(s[0].first)] = static_cast<int>(a);
  }
  std::vector<Variable> vars = A->ring()->vars();
  std::vector<std::size_t> extra;
  for (std::size_t i = 0; i < B->nvars(); ++i) {
    if (hit[i] >= 0) continue;
    Variable v = B->ring()->var(i);
    if (A->ring()->index_of(v.name) >= 0) v.name += "_b";
    vars.push_back(v);
    extra.push_back(i);
  }
  RingPtr R = PolyRing::make(A->field(), vars, A->ring()->order());
  std::vector<Poly> rels;
  for (const auto& r : A->relations()) rels.push_back(extend_poly(r, R));
  auto Q = QuotientRing::make("R", R, rels, A->filtration_mode());
  auto X0 = std::make_shared<const DGAlgebra>("R", Q, std::vector<Poly>(R->nvars(), Q->zero()), A->nvars());
  auto Y = algebra_of_ring(B);
  std::vector<Poly> images = f.images();
  for (auto i : extra) images.push_back(Poly::variable(B->ring(), i));
  return kill_cohomology(DGAlgebraMap(X0, Y, images), bounds, options, "e");
}

EnvelopingAlgebra enveloping(const DGAPtr& R) {
  const std::size_t nc = R->ncoeff();
  std::vector<Variable> cv(R->poly_ring()->vars().begin(), R->poly_ring()->vars().begin() + static_cast<long>(nc));
  RingPtr Ar = PolyRing::make(R->ring()->field(), cv, R->poly_ring()->order());
  std::vector<Poly> rels;
  for (const auto& r : R->ring()->relations()) {
    Poly p(Ar);
    bool inside = true;
    for (const auto& [m, c] : r.terms()) {
      for (std::size_t i = nc; i < m.size(); ++i)
        if (m[i] != 0) inside = false;
      std::vector<int> e(m.exponents().begin(), m.exponents().begin() + static_cast<long>(nc));
      p.add_term(Monomial(e), c);
    }
    if (inside) rels.push_back(p);
  }
  auto A = QuotientRing::make("A", Ar, rels, R->ring()->filtration_mode());
  std::vector<Poly> inc;
  for (std::size_t i = 0; i < nc; ++i) inc.push_back(Poly::variable(R->poly_ring(), i));
  RingMorphism f(A, R->ring(), inc);
  RingTensor T = tensor_rings(R->ring(), A, f, f);
  const auto& Sring = T.ring;
  std::vector<Poly> diffs(Sring->nvars(), Sring->zero());
  std::vector<Poly> mu_images(Sring->nvars(), R->ring()->zero());
  for (std::size_t i = 0; i < R->nvars(); ++i) {
    Poly v1 = T.first.images()[i], v2 = T.second.images()[i];
    std::size_t a = static_cast<std::size_t>(v1.terms().begin()->first.support()[0].first);
    std::size_t b = static_cast<std::size_t>(v2.terms().begin()->first.support()[0].first);
    diffs[a] = T.first.apply(R->d_var(i));
    diffs[b] = T.second.apply(R->d_var(i));
    mu_images[a] = Poly::variable(R->poly_ring(), i);
    mu_images[b] = Poly::variable(R->poly_ring(), i);
  }
  auto S = std::make_shared<const DGAlgebra>("S", Sring, diffs, nc);
  EnvelopingAlgebra env;
  env.S = S;
  env.j1 = DGAlgebraMap(R, S, T.first.images());
  env.j2 = DGAlgebraMap(R, S, T.second.images());
  env.mu = DGAlgebraMap(S, R, mu_images);
  return env;
}

Resolution resolve_multiplication(const EnvelopingAlgebra& env, const Bounds& bounds, const TateOptions& options) {
  const DGAPtr& R = env.mu.target();
  auto gens = R->generators();
  if (!options.generic_only && gens.size() == 1 && R->poly_ring()->var(gens[0]).hom == -1) {
    const Variable& e = R->poly_ring()->var(gens[0]);
    Variable eta{"u1", -2, e.weight};
    guard_characteristic(R->ring()->field(), eta, bounds.internal_bound);
    Poly e1 = env.j1.images()[gens[0]], e2 = env.j2.images()[gens[0]];
    auto B = env.S->adjoin({eta}, [&](const QRingPtr& Q) {
      return std::vector<Poly>{extend_poly(e1 - e2, Q->ring())};
    });
    std::vector<Poly> images = env.mu.images();
    images.push_back(R->ring()->zero());
    Resolution res;
    res.algebra = B;
    res.augmentation = DGAlgebraMap(B, R, images);
    res.bounds = bounds;
    res.adjoined.emplace_back(-2, e.weight);
    return res;
  }
  return kill_cohomology(env.mu, bounds, options, "u");
}

}  // namespace dgcohom
