#include "dgcohom/hochschild.hpp"

#include <algorithm>
#include <climits>
#include <functional>

#include "dgcohom/errors.hpp"
#include "dgcohom/parallel.hpp"

namespace dgcohom {

namespace {

Scalar sign_of(int e) { return (e & 1) ? Scalar(-1) : Scalar(1); }

int max_relation_degree(const QuotientRing& B) {
  int d = 1;
  for (const auto& r : B.relations())
    if (!r.is_zero()) d = std::max(d, r.internal_degree());
  for (const auto& v : B.ring()->vars()) d = std::max(d, v.weight);
  return d;
}

/// Index of the single variable p is, or -1.
int single_variable(const Poly& p) {
  if (p.size() != 1 || !p.terms().begin()->second.is_one()) return -1;
  auto s = p.terms().begin()->first.support();
  if (s.size() != 1 || s[0].second != 1) return -1;
  return s[0].first;
}

SemifreeMorphism scaled_morphism(const SemifreeMorphism& f, const Scalar& c) {
  std::vector<SVec> vals;
  for (const auto& v : f.values()) vals.push_back(scaled(v, c));
  return SemifreeMorphism(f.semifree_source(), f.target_ptr(), f.hom_shift(), f.internal_shift(), vals);
}

std::vector<Monomial> enumerate_words(const DGAlgebra& Balg, std::size_t first, int min_hom) {
  const auto& R = Balg.poly_ring();
  std::vector<Monomial> out;
  std::vector<int> e(R->nvars(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int hom) {
    if (i == R->nvars()) {
      out.emplace_back(e);
      return;
    }
    const Variable& v = R->var(i);
    int maxe = v.odd() ? 1 : INT_MAX;
    for (int a = 0; a <= maxe && hom + a * v.hom >= min_hom; ++a) {
      e[i] = a;
      rec(i + 1, hom + a * v.hom);
      if (v.hom == 0) break;
    }
    e[i] = 0;
  };
  rec(first, 0);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    int ha = R->hom_degree(a), hb = R->hom_degree(b);
    if (ha != hb) return ha > hb;
    int wa = R->internal_degree(a), wb = R->internal_degree(b);
    if (wa != wb) return wa < wb;
    return a.exponents() > b.exponents();
  });
  return out;
}

}  // namespace

Bounds default_bounds(const RingMorphism& f, int n_max) {
  Bounds b;
  b.hom_bound = n_max + 1;
  b.internal_bound = std::max(2, max_relation_degree(*f.target())) * (b.hom_bound + 1);
  return b;
}

HochschildSetup build_setup(const RingMorphism& f, const Bounds& bounds, const TateOptions& options) {
  HochschildSetup s;
  s.f = f;
  s.bounds = bounds;
  s.options = options;
  s.tate = tate_resolve(f, bounds, options);
  s.env = enveloping(s.tate.algebra);
  auto gens = s.tate.algebra->generators();
  s.fast_path = !options.generic_only && gens.size() == 1 && s.tate.algebra->poly_ring()->var(gens[0]).hom == -1;
  s.mult = resolve_multiplication(s.env, bounds, options);
  s.B = s.tate.augmentation.target();
  s.S_to_B = s.tate.augmentation.after(s.env.mu);

  const auto& Balg = *s.mult.algebra;
  const auto& S = *s.env.S;
  const std::size_t nS = S.nvars();
  s.words = enumerate_words(Balg, nS, -bounds.hom_bound);
  std::map<Monomial, int> index;
  for (std::size_t i = 0; i < s.words.size(); ++i) index[s.words[i]] = static_cast<int>(i);
  std::vector<SemifreeGenerator> pg;
  for (const auto& w : s.words) {
    SemifreeGenerator g;
    g.name = w.is_one() ? "1" : Balg.poly_ring()->monomial_string(w);
    g.hom = Balg.poly_ring()->hom_degree(w);
    g.weight = Balg.poly_ring()->internal_degree(w);
    std::map<int, Poly> acc;
    Poly dw = Balg.d(Poly::monomial(Balg.poly_ring(), w, 1));
    for (const auto& [m, c] : dw.terms()) {
      std::vector<int> se(m.exponents().begin(), m.exponents().begin() + static_cast<long>(nS));
      std::vector<int> we(m.size(), 0);
      for (std::size_t i = nS; i < m.size(); ++i) we[i] = m[i];
      auto it = index.find(Monomial(we));
      if (it == index.end()) throw IntegrityError("word differential leaves the enumerated window");
      Poly term = Poly::monomial(S.poly_ring(), Monomial(se), c);
      auto a = acc.find(it->second);
      if (a == acc.end()) acc.emplace(it->second, term);
      else a->second += term;
    }
    for (auto& [j, t] : acc)
      if (!t.is_zero()) g.d.emplace_back(j, t);
    pg.push_back(std::move(g));
  }
  s.P = std::make_shared<const SemifreeModule>(s.env.S, pg);
  s.B_over_S = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(s.B), s.S_to_B);
  std::vector<SVec> vals(pg.size());
  vals[0] = unit_vector(0, Scalar::one(f.target()->field()));
  s.augmentation = std::make_shared<const SemifreeMorphism>(s.P, s.B_over_S, 0, 0, vals);
  return s;
}

ModPtr over_S(const HochschildSetup& setup, const ModPtr& M) {
  return std::make_shared<const RestrictedModule>(M, setup.S_to_B);
}

bool hom_certified(const HochschildSetup& setup, const DGModule& M, int k, int r) {
  int need = M.hom_min() - k - 1;
  if (need < -setup.bounds.hom_bound) return false;
  const int Q = setup.bounds.internal_bound;
  if (auto top = M.internal_max()) return *top - r <= Q;
  int wmax = 0;
  for (const auto& g : setup.P->generators())
    if (g.hom >= need) wmax = std::max(wmax, g.weight);
  return wmax + max_relation_degree(*setup.f.target()) <= Q;
}

bool tensor_certified(const HochschildSetup& setup, const DGModule& M, int n, int q) {
  if (n - 1 - M.hom_max() < -setup.bounds.hom_bound) return false;
  return q - M.internal_min() <= setup.bounds.internal_bound;
}

// ---------------------------------------------------------------- ExtSpace

ExtSpace::ExtSpace(SemifreePtr P, ModPtr M) : hom_(std::move(P), std::move(M)) {}

const Subquotient& ExtSpace::classes(int k, int r) const {
  auto key = std::make_pair(k, r);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  int d = hom_.dim(k, r);
  std::unique_ptr<Subquotient> sq;
  if (d == 0) {
    sq = std::make_unique<Subquotient>(0, std::vector<SVec>{}, std::vector<SVec>{});
  } else {
    sq = std::make_unique<Subquotient>(d, kernel(hom_.differential(k, r)), image_basis(hom_.differential(k - 1, r)));
  }
  std::lock_guard<std::mutex> lock(mu_);
  return *cache_.emplace(key, std::move(sq)).first->second;
}

SemifreeMorphism ExtSpace::representative(int k, int r, const SVec& coords) const {
  return hom_.morphism(classes(k, r).lift(coords), k, r);
}

SemifreeMorphism ExtSpace::basis_class(int k, int r, int j) const {
  return hom_.morphism(classes(k, r).representatives()[static_cast<std::size_t>(j)], k, r);
}

SVec ExtSpace::coordinates(const SemifreeMorphism& cocycle) const {
  return classes(cocycle.hom_shift(), cocycle.internal_shift()).coordinates(hom_.element(cocycle));
}

TorSpace::TorSpace(ModPtr M, SemifreePtr P) : tensor_(std::move(M), std::move(P)) {}

const Subquotient& TorSpace::classes(int n, int q) const {
  auto key = std::make_pair(n, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  int d = tensor_.dim(n, q);
  std::unique_ptr<Subquotient> sq;
  if (d == 0) {
    sq = std::make_unique<Subquotient>(0, std::vector<SVec>{}, std::vector<SVec>{});
  } else {
    sq = std::make_unique<Subquotient>(d, kernel(tensor_.differential(n, q)),
                                       image_basis(tensor_.differential(n - 1, q)));
  }
  std::lock_guard<std::mutex> lock(mu_);
  return *cache_.emplace(key, std::move(sq)).first->second;
}

// ---------------------------------------------------------------- HHReport

int HHReport::dim(int n, int r) const {
  for (const auto& c : cells)
    if (c.degree == n && c.internal == r) return c.dim;
  return 0;
}

int HHReport::total(int n) const {
  int t = 0;
  for (const auto& c : cells)
    if (c.degree == n) t += c.dim;
  return t;
}

bool HHReport::certified(int n) const {
  for (const auto& c : cells)
    if (c.degree == n && !c.certified) return false;
  return true;
}

std::vector<int> HHReport::totals() const {
  std::vector<int> t;
  for (int n = 0; n <= n_max; ++n) t.push_back(total(n));
  return t;
}

HHReport hh_cohomology(const HochschildSetup& setup, const ModPtr& M, int n_max, int r_cap) {
  HHReport rep;
  rep.direction = HHReport::Direction::Cohomology;
  rep.n_max = n_max;
  ModPtr Ms = over_S(setup, M);
  ExtSpace ext(setup.P, Ms);
  auto [lo, hi] = ext.hom().internal_range(-2, n_max, r_cap);
  if (!M->internal_max()) {
    rep.caveats.push_back("internal degrees truncated at " + std::to_string(r_cap));
    rep.caveats.push_back("completeness in internal degree judged from generator weights");
  }
  if (setup.f.source()->filtration_mode() || setup.f.target()->filtration_mode())
    rep.caveats.push_back("truncation caveat: filtration mode");
  std::vector<int> rs;
  for (int r = lo; r <= hi; ++r) rs.push_back(r);
  std::vector<std::vector<HHCell>> per(rs.size());
  parallel_for(static_cast<int>(rs.size()), [&](int idx) {
    int r = rs[static_cast<std::size_t>(idx)];
    for (int k = -2; k <= n_max; ++k) {
      HHCell c{k, r, ext.dim(k, r), hom_certified(setup, *M, k, r)};
      per[static_cast<std::size_t>(idx)].push_back(c);
    }
  });
  for (auto& v : per)
    for (auto& c : v) rep.cells.push_back(c);
  std::stable_sort(rep.cells.begin(), rep.cells.end(),
                   [](const HHCell& a, const HHCell& b) { return a.degree < b.degree; });
  return rep;
}

HHReport hh_homology(const HochschildSetup& setup, const ModPtr& M, int n_max, int q_cap) {
  HHReport rep;
  rep.direction = HHReport::Direction::Homology;
  rep.n_max = n_max;
  ModPtr Ms = over_S(setup, M);
  TorSpace tor(Ms, setup.P);
  auto [lo, hi] = tor.tensor().internal_range(-n_max, 2, q_cap);
  if (!M->internal_max()) rep.caveats.push_back("internal degrees truncated at " + std::to_string(q_cap));
  std::vector<int> qs;
  for (int q = lo; q <= hi; ++q) qs.push_back(q);
  std::vector<std::vector<HHCell>> per(qs.size());
  parallel_for(static_cast<int>(qs.size()), [&](int idx) {
    int q = qs[static_cast<std::size_t>(idx)];
    for (int j = -2; j <= n_max; ++j) {
      HHCell c{j, q, tor.dim(-j, q), tensor_certified(setup, *M, -j, q)};
      per[static_cast<std::size_t>(idx)].push_back(c);
    }
  });
  for (auto& v : per)
    for (auto& c : v) rep.cells.push_back(c);
  std::stable_sort(rep.cells.begin(), rep.cells.end(),
                   [](const HHCell& a, const HHCell& b) { return a.degree < b.degree; });
  return rep;
}

HochschildComplexRealization hochschild_complex(const HochschildSetup& setup, int q_cap) {
  HochschildComplexRealization h;
  h.complex = std::make_shared<const TensorComplex>(setup.B_over_S, setup.P);
  for (int q = 0; q <= q_cap; ++q) {
    int d = h.complex->dim(0, q);
    int z = d - rank(h.complex->differential(0, q));
    int b = rank(h.complex->differential(-1, q));
    h.h0_dims.push_back(z - b);
    h.b_dims.push_back(setup.B->dim(0, q));
    if (h.h0_dims.back() != h.b_dims.back()) h.h0_matches = false;
  }
  return h;
}

// ------------------------------------------------------ products, actions

SemifreeMorphism lift_endomorphism(const HochschildSetup& setup, const SemifreeMorphism& g, int min_generator_hom) {
  return lift_through(g, setup.P, *setup.augmentation, min_generator_hom);
}

SemifreeMorphism yoneda_product(const HochschildSetup& setup, const SemifreeMorphism& f, const SemifreeMorphism& g) {
  int K = f.hom_shift() + g.hom_shift();
  SemifreeMorphism gl = lift_endomorphism(setup, g, setup.B_over_S->hom_min() - K);
  return f.after(gl);
}

SemifreeMorphism module_action(const HochschildSetup& setup, const SemifreeMorphism& f, const SemifreeMorphism& c) {
  int K = f.hom_shift() + c.hom_shift();
  SemifreeMorphism fl = lift_endomorphism(setup, f, c.target().hom_min() - K);
  return scaled_morphism(c.after(fl), sign_of(f.hom_shift() * c.hom_shift()));
}

SparseMatrix homology_action(const HochschildSetup& setup, const SemifreeMorphism& f, const TensorComplex& MP, int n,
                             int q) {
  SemifreeMorphism fl = lift_endomorphism(setup, f, n - MP.left()->hom_max());
  return MP.map_right(fl, MP, n, q);
}

SparseMatrix pullback_classes(const ExtSpace& from, const ExtSpace& to, const SemifreeMorphism& lambda, int k, int r) {
  const auto& src = from.classes(k, r);
  const auto& P = *lambda.semifree_source();
  int tk = k + lambda.hom_shift(), tr = r + lambda.internal_shift();
  SparseMatrix m(to.dim(tk, tr), src.dim());
  for (int j = 0; j < src.dim(); ++j) {
    SemifreeMorphism phi = from.basis_class(k, r, j);
    std::vector<SVec> vals;
    for (std::size_t i = 0; i < P.size(); ++i) {
      const auto& g = P.generators()[i];
      vals.push_back(phi.apply(lambda.values()[i], g.hom + lambda.hom_shift(), g.weight + lambda.internal_shift()));
    }
    SemifreeMorphism pulled(lambda.semifree_source(), to.hom().target(), tk, tr, vals);
    m.set_column(j, to.coordinates(pulled));
  }
  return m;
}

SVec yoneda_coordinates(const HochschildSetup& setup, const ExtSpace& ext, int k1, int r1, const SVec& a, int k2,
                        int r2, const SVec& b) {
  SemifreeMorphism f = ext.representative(k1, r1, a);
  SemifreeMorphism g = ext.representative(k2, r2, b);
  return ext.coordinates(yoneda_product(setup, f, g));
}

// ---------------------------------------------------------- comparisons

bool ComparisonReport::all_iso_certified() const {
  for (const auto& c : cells)
    if (c.certified && !c.iso()) return false;
  return true;
}

bool ComparisonReport::some_certified_failure() const {
  for (const auto& c : cells)
    if (c.certified && !c.iso()) return true;
  return false;
}

namespace {

struct ExternalResolution {
  DGAPtr E;
  DGAlgebraMap mu;  // E → B
  SemifreePtr Q;
  std::function<SparseMatrix(int, int)> augmentation;
  std::vector<Poly> rho;  // images of S variables in E
  int depth;            // generators complete down to this homological degree
};

ComparisonReport compare_through(const HochschildSetup& setup, const ModPtr& M, const ExternalResolution& X, int n_max,
                                 int r_cap) {
  ComparisonReport rep;
  DGAlgebraMap rho(setup.env.S, X.E, X.rho);
  if (!rho.commutes()) throw IntegrityError("comparison map S → E is not a chain map");
  auto QS = std::make_shared<const RestrictedModule>(X.Q, rho);
  FunctionMap piQ(QS, setup.B_over_S, 0, 0, X.augmentation);
  SemifreeMorphism lambda = lift_through(*setup.augmentation, QS, piQ, M->hom_min() - n_max - 1);
  ExtSpace from(X.Q, std::make_shared<const RestrictedModule>(M, X.mu));
  ExtSpace to(setup.P, over_S(setup, M));
  auto [lo1, hi1] = from.hom().internal_range(0, n_max, r_cap);
  auto [lo2, hi2] = to.hom().internal_range(0, n_max, r_cap);
  int lo = std::min(lo1, lo2), hi = std::max(hi1, hi2);
  std::vector<std::pair<int, int>> keys;
  for (int k = 0; k <= n_max; ++k)
    for (int r = lo; r <= hi; ++r) keys.emplace_back(k, r);
  std::vector<ComparisonCell> cells(keys.size());
  parallel_for(static_cast<int>(keys.size()), [&](int idx) {
    auto [k, r] = keys[static_cast<std::size_t>(idx)];
    ComparisonCell c;
    c.degree = k;
    c.internal = r;
    c.source_dim = from.dim(k, r);
    c.target_dim = to.dim(k, r);
    c.rank = (c.source_dim == 0 || c.target_dim == 0) ? 0 : rank(pullback_classes(from, to, lambda, k, r));
    c.certified = hom_certified(setup, *M, k, r) && (M->hom_min() - k - 1 >= X.depth);
    cells[static_cast<std::size_t>(idx)] = c;
  });
  for (auto& c : cells)
    if (c.source_dim != 0 || c.target_dim != 0) rep.cells.push_back(c);
  return rep;
}

std::vector<Poly> rho_images(const HochschildSetup& setup, const std::function<Poly(const Poly&)>& first,
                             const std::function<Poly(const Poly&)>& second, const QRingPtr& E) {
  const auto& R = *setup.tate.algebra;
  std::vector<Poly> images(setup.env.S->nvars(), E->zero());
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < R.nvars(); ++i) {
    const Poly& eps = setup.tate.augmentation.images()[i];
    int a = single_variable(setup.env.j1.images()[i]);
    int b = single_variable(setup.env.j2.images()[i]);
    if (a < 0 || b < 0) throw StructuralError("enveloping algebra embeddings are not variable renamings");
    images[static_cast<std::size_t>(a)] = first(eps);
    images[static_cast<std::size_t>(b)] = second(eps);
    seen[static_cast<std::size_t>(a)] = seen[static_cast<std::size_t>(b)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw StructuralError("enveloping algebra has variables outside both embeddings");
  return images;
}

}  // namespace

ComparisonReport comparison_beta(const HochschildSetup& setup, const ModPtr& M, int n_max, int r_cap) {
  const auto& Bq = setup.f.target();
  RingTensor T = tensor_rings(Bq, setup.f.source(), setup.f, setup.f);
  ExternalResolution X;
  X.E = algebra_of_ring(T.ring);
  std::vector<Poly> mu(T.ring->nvars(), Bq->zero());
  for (std::size_t i = 0; i < Bq->nvars(); ++i) {
    int a = single_variable(T.first.images()[i]);
    int b = single_variable(T.second.images()[i]);
    if (a < 0 || b < 0) throw StructuralError("tensor presentation does not rename variables");
    mu[static_cast<std::size_t>(a)] = Poly::variable(Bq->ring(), i);
    mu[static_cast<std::size_t>(b)] = Poly::variable(Bq->ring(), i);
  }
  X.mu = DGAlgebraMap(X.E, setup.B, mu);
  auto BE = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(setup.B), X.mu);
  ModuleResolution QE = semifree_resolve(BE, setup.bounds, "q");
  X.Q = QE.module;
  auto aug = QE.augmentation;
  X.augmentation = [aug](int n, int q) { return aug->matrix(n, q); };
  X.rho = rho_images(
      setup, [&](const Poly& p) { return T.first.apply(p); }, [&](const Poly& p) { return T.second.apply(p); },
      T.ring);
  X.depth = -setup.bounds.hom_bound;
  return compare_through(setup, M, X, n_max, r_cap);
}

ComparisonReport comparison_alpha(const HochschildSetup& setup, const ModPtr& M, int n_max, int bar_length) {
  ComparisonReport rep;
  if (setup.f.source()->nvars() != 0) {
    rep.available = false;
    rep.reason = "the bar resolution is only used over the ground field";
    return rep;
  }
  if (!setup.B->ring()->finite_degree_zero()) {
    rep.available = false;
    rep.reason = "the bar resolution needs a finite-dimensional algebra";
    return rep;
  }
  int L = bar_length > 0 ? bar_length : n_max + 2;
  BarResolution bar = bar_complex(setup.B, L);
  ExternalResolution X;
  X.E = bar.env.S;
  X.mu = bar.env.mu;
  X.Q = bar.module;
  auto aug = bar.augmentation;
  X.augmentation = [aug](int n, int q) { return aug->matrix(n, q); };
  X.rho = rho_images(
      setup, [&](const Poly& p) { return bar.env.j1.apply(p); }, [&](const Poly& p) { return bar.env.j2.apply(p); },
      bar.env.S->ring());
  X.depth = -L;
  return compare_through(setup, M, X, n_max, 64);
}

namespace {

int algebra_top(const DGAPtr& B) {
  auto top = AlgebraModule(B).internal_max();
  if (!B->ring()->finite_degree_zero() || !top) throw StructuralError("the bar oracle needs a finite-dimensional algebra");
  return *top;
}

}  // namespace

HHReport bar_oracle_cohomology(const DGAPtr& B, int n_max) {
  int top = algebra_top(B);
  BarResolution bar = bar_complex(B, n_max + 2);
  auto target = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(B), bar.env.mu);
  ExtSpace ext(bar.module, target);
  HHReport rep;
  rep.n_max = n_max;
  for (int k = 0; k <= n_max; ++k)
    for (int r = -k * top; r <= top; ++r) rep.cells.push_back({k, r, ext.dim(k, r), true});
  return rep;
}

HHReport bar_oracle_homology(const DGAPtr& B, int n_max) {
  int top = algebra_top(B);
  BarResolution bar = bar_complex(B, n_max + 2);
  auto coeff = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(B), bar.env.mu);
  TorSpace tor(coeff, bar.module);
  HHReport rep;
  rep.direction = HHReport::Direction::Homology;
  rep.n_max = n_max;
  for (int n = 0; n <= n_max; ++n)
    for (int q = 0; q <= (n + 1) * top; ++q) rep.cells.push_back({n, q, tor.dim(-n, q), true});
  return rep;
}

int TorTable::total(int i) const {
  int t = 0;
  for (const auto& [key, d] : dims)
    if (key.first == i) t += d;
  return t;
}

TorTable transversality_check(const RingMorphism& f, int i_max, int q_cap) {
  auto A = algebra_of_ring(f.source());
  auto B = algebra_of_ring(f.target());
  DGAlgebraMap phi(A, B, f.images());
  auto BA = std::make_shared<const RestrictedModule>(std::make_shared<const AlgebraModule>(B), phi);
  ModuleResolution Q = semifree_resolve(BA, Bounds{i_max + 2, q_cap}, "t");
  TorSpace tor(BA, Q.module);
  TorTable t;
  t.i_max = i_max;
  std::vector<std::pair<int, int>> keys;
  for (int i = 0; i <= i_max; ++i)
    for (int q = 0; q <= q_cap; ++q) keys.emplace_back(i, q);
  std::vector<int> dims(keys.size());
  parallel_for(static_cast<int>(keys.size()), [&](int idx) {
    auto [i, q] = keys[static_cast<std::size_t>(idx)];
    dims[static_cast<std::size_t>(idx)] = tor.dim(-i, q);
  });
  for (std::size_t idx = 0; idx < keys.size(); ++idx)
    if (dims[idx] != 0) t.dims[keys[idx]] = dims[idx];
  return t;
}

// -------------------------------------------------------- restriction map

SparseMatrix RestrictionMap::at(int k, int r) const { return pullback_classes(*relative, *absolute, *lambda, k, r); }

RestrictionMap restriction_map(const HochschildSetup& relative, const HochschildSetup& absolute) {
  if (relative.f.target().get() != absolute.f.target().get())
    throw StructuralError("restriction needs setups over the same target ring");
  const auto& Ra = *absolute.tate.algebra;
  const auto& Rr = *relative.tate.algebra;
  const auto& B = *relative.B;
  // Algebra map Ra → Rr over B, generator by generator.
  std::vector<Poly> phi(Ra.nvars(), Rr.ring()->zero());
  for (std::size_t i = 0; i < Ra.nvars(); ++i) {
    const Variable& v = Ra.poly_ring()->var(i);
    RingMap partial(Ra.poly_ring(), Rr.poly_ring(), phi);
    if (v.hom == 0) {
      const Poly& target = absolute.tate.augmentation.images()[i];
      SVec rhs = B.ring()->to_vector(target, 0, v.weight);
      auto sol = solve(relative.tate.augmentation.matrix(0, v.weight), rhs);
      if (!sol) throw NotSurjective("resolution does not map onto the target ring");
      phi[i] = Rr.ring()->from_vector(*sol, 0, v.weight);
    } else {
      Poly dv = Rr.ring()->normal_form(partial.apply(Ra.d_var(i)));
      SVec rhs = Rr.ring()->to_vector(dv, v.hom + 1, v.weight);
      auto sol = solve(Rr.d_matrix(v.hom, v.weight), rhs);
      if (!sol) throw BoundInsufficient("comparison of resolutions failed at " + v.name, v.hom);
      phi[i] = Rr.ring()->from_vector(*sol, v.hom, v.weight);
    }
  }
  DGAlgebraMap R_map(absolute.tate.algebra, relative.tate.algebra, phi);
  std::vector<Poly> sigma(absolute.env.S->nvars(), relative.env.S->ring()->zero());
  for (std::size_t i = 0; i < Ra.nvars(); ++i) {
    int a = single_variable(absolute.env.j1.images()[i]);
    int b = single_variable(absolute.env.j2.images()[i]);
    sigma[static_cast<std::size_t>(a)] = relative.env.j1.apply(phi[i]);
    sigma[static_cast<std::size_t>(b)] = relative.env.j2.apply(phi[i]);
  }
  DGAlgebraMap S_map(absolute.env.S, relative.env.S, sigma);
  if (!S_map.commutes()) throw IntegrityError("induced map of enveloping algebras is not a chain map");
  auto Pr = std::make_shared<const RestrictedModule>(relative.P, S_map);
  auto aug = relative.augmentation;
  FunctionMap pi(Pr, absolute.B_over_S, 0, 0, [aug](int n, int q) { return aug->matrix(n, q); });
  RestrictionMap out;
  out.lambda = std::make_shared<const SemifreeMorphism>(
      lift_through(*absolute.augmentation, Pr, pi, -absolute.bounds.hom_bound + 1));
  out.relative = std::make_shared<ExtSpace>(relative.P, relative.B_over_S);
  out.absolute = std::make_shared<ExtSpace>(absolute.P, absolute.B_over_S);
  return out;
}

}  // namespace dgcohom
