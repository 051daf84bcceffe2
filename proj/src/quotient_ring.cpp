#include "dgcohom/quotient_ring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "dgcohom/errors.hpp"

namespace dgcohom {

namespace {

bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p.scaled(p.leading().second.inverse());
}

Poly reduce_base(Poly f, const std::vector<Poly>& divisors) {
  Poly r(f.ring());
  while (!f.is_zero()) {
    const auto lt = f.leading();
    const Monomial m = lt.first;
    const Scalar c = lt.second;
    const Poly* hit = nullptr;
    for (const auto& d : divisors) {
      if (d.leading().first.divides(m)) {
        hit = &d;
        break;
      }
    }
    if (hit) {
      const auto& [lm, lc] = hit->leading();
      f -= Poly::monomial(f.ring(), m / lm, c / lc) * *hit;
    } else {
      r.add_term(m, c);
      f.add_term(m, -c);
    }
  }
  return r;
}

bool base_only(const Poly& p) {
  for (const auto& [m, c] : p.terms())
    if (!p.ring()->gen_part(m).is_one()) return false;
  return true;
}

}  // namespace

Poly reduce(const Poly& p, const std::vector<Poly>& divisors) {
  if (divisors.empty() || p.is_zero()) return p;
  const auto& R = p.ring();
  std::map<Monomial, Poly> by_gen;
  for (const auto& [m, c] : p.terms()) {
    auto g = R->gen_part(m);
    auto it = by_gen.try_emplace(g, Poly(R)).first;
    it->second.add_term(R->base_part(m), c);
  }
  Poly out(R);
  for (auto& [g, b] : by_gen) {
    Poly r = reduce_base(b, divisors);
    for (const auto& [m, c] : r.terms()) out.add_term(m * g, c);
  }
  return out;
}

Poly s_polynomial(const Poly& f, const Poly& g) {
  const auto& [mf, cf] = f.leading();
  const auto& [mg, cg] = g.leading();
  Monomial l = mf.lcm(mg);
  return Poly::monomial(f.ring(), l / mf, cf.inverse()) * f - Poly::monomial(g.ring(), l / mg, cg.inverse()) * g;
}

std::vector<Poly> buchberger(const std::vector<Poly>& relations) {
  std::vector<Poly> G;
  for (const auto& r : relations) {
    if (!base_only(r)) throw StructuralError("relations may only involve degree-0 variables");
    if (!r.is_zero()) G.push_back(monic(r));
  }
  if (G.empty()) return G;
  const RingPtr R = G.front().ring();
  std::set<std::pair<int, int>> pending;
  for (int j = 0; j < static_cast<int>(G.size()); ++j)
    for (int i = 0; i < j; ++i) pending.insert({i, j});

  auto lcm_of = [&](const std::pair<int, int>& pr) {
    return G[pr.first].leading().first.lcm(G[pr.second].leading().first);
  };

  while (!pending.empty()) {
    // smallest lcm first, deterministic
    auto best = pending.begin();
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      Monomial a = lcm_of(*it), b = lcm_of(*best);
      if (R->greater(b, a)) best = it;
    }
    auto pr = *best;
    pending.erase(best);
    const Monomial& li = G[pr.first].leading().first;
    const Monomial& lj = G[pr.second].leading().first;
    if (coprime(li, lj)) continue;
    Monomial l = li.lcm(lj);
    bool chain = false;
    for (int k = 0; k < static_cast<int>(G.size()) && !chain; ++k) {
      if (k == pr.first || k == pr.second) continue;
      if (!G[k].leading().first.divides(l)) continue;
      auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      if (!pending.count(key(pr.first, k)) && !pending.count(key(pr.second, k))) chain = true;
    }
    if (chain) continue;
    Poly h = reduce_base(s_polynomial(G[pr.first], G[pr.second]), G);
    if (h.is_zero()) continue;
    G.push_back(monic(h));
    int n = static_cast<int>(G.size()) - 1;
    for (int k = 0; k < n; ++k) pending.insert({k, n});
  }

  // minimize
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      const Monomial& a = G[i].leading().first;
      const Monomial& b = G[j].leading().first;
      if (b.divides(a) && (b != a || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  // interreduce
  std::vector<Poly> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    const auto& [lm, lc] = minimal[i].leading();
    Poly tail = minimal[i];
    tail.add_term(lm, -lc);
    Poly r = Poly::monomial(R, lm, 1) + reduce_base(tail.scaled(lc.inverse()), others);
    reduced.push_back(r);
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Poly& a, const Poly& b) { return R->greater(b.leading().first, a.leading().first); });
  return reduced;
}

QuotientRing::QuotientRing(std::string name, RingPtr ring, std::vector<Poly> relations, bool filtration_mode)
    : name_(std::move(name)), ring_(std::move(ring)), filtration_(filtration_mode) {
  for (auto& r : relations) {
    if (!r.ring()) r = Poly(ring_);
    if (r.ring()->nvars() != ring_->nvars()) throw StructuralError("relation from a different ring");
    if (!base_only(r)) throw StructuralError("relations may only involve degree-0 variables");
    r = Poly(ring_) + r;
    if (!r.is_homogeneous()) graded_ = false;
    if (!r.is_zero()) relations_.push_back(r);
  }
  gb_ = buchberger(relations_);
  for (const auto& g : gb_) {
    leading_.push_back(g.leading().first);
    if (g.size() != 1) monomial_ideal_ = false;
  }
}

QRingPtr QuotientRing::make(std::string name, RingPtr ring, std::vector<Poly> relations, bool filtration_mode) {
  return std::make_shared<const QuotientRing>(std::move(name), std::move(ring), std::move(relations),
                                              filtration_mode);
}

bool QuotientRing::finite_degree_zero() const {
  for (std::size_t i = 0; i < nvars(); ++i) {
    if (ring_->var(i).hom != 0) continue;
    bool pure = false;
    for (const auto& l : leading_) {
      auto s = l.support();
      if (s.size() == 1 && s[0].first == static_cast<int>(i)) pure = true;
    }
    if (!pure) return false;
  }
  return true;
}

Poly QuotientRing::var(const std::string& name) const {
  int i = ring_->index_of(name);
  if (i < 0) throw StructuralError("ring " + name_ + " has no variable " + name);
  return Poly::variable(ring_, static_cast<std::size_t>(i));
}

Poly QuotientRing::parse(const std::string& text) const { return normal_form(parse_poly(text, ring_)); }

Poly QuotientRing::normal_form(const Poly& p) const {
  if (p.ring() && p.ring()->nvars() != ring_->nvars())
    throw StructuralError("polynomial does not belong to ring " + name_);
  if (gb_.empty()) {
    if (p.ring() == ring_ || !p.ring()) return p.ring() ? p : Poly(ring_);
    Poly r(ring_);
    for (const auto& [m, c] : p.terms()) r.add_term(m, c);
    return r;
  }
  if (monomial_ideal_) {
    Poly r(ring_);
    for (const auto& [m, c] : p.terms())
      if (is_standard(m)) r.add_term(m, c);
    return r;
  }
  Poly q(ring_);
  for (const auto& [m, c] : p.terms()) q.add_term(m, c);
  return reduce(q, gb_);
}

bool QuotientRing::is_standard(const Monomial& m) const {
  for (const auto& l : leading_) {
    bool div = true;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i] > m[i]) {
        div = false;
        break;
      }
    }
    if (div) return false;
  }
  return true;
}

const QuotientRing::Piece& QuotientRing::piece(int n, int q) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(n, q);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  auto pc = std::make_unique<Piece>();
  const std::size_t nv = ring_->nvars();
  Monomial cur(nv);
  // enumerate exponent vectors with weighted sum q and hom sum n
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int nrem, int qrem) {
    if (i == nv) {
      if (nrem == 0 && qrem == 0 && is_standard(cur)) pc->basis.push_back(cur);
      return;
    }
    const Variable& v = ring_->var(i);
    int maxe = qrem / v.weight;
    if (v.odd()) maxe = std::min(maxe, 1);
    for (int e = 0; e <= maxe; ++e) {
      if (v.hom != 0 && e * v.hom < nrem) break;
      cur[i] = e;
      rec(i + 1, nrem - e * v.hom, qrem - e * v.weight);
    }
    cur[i] = 0;
  };
  if (q >= 0 && n <= 0) rec(0, n, q);
  std::sort(pc->basis.begin(), pc->basis.end());
  for (std::size_t k = 0; k < pc->basis.size(); ++k) pc->index.emplace(pc->basis[k], static_cast<int>(k));
  auto& ref = *pc;
  cache_.emplace(key, std::move(pc));
  return ref;
}

const std::vector<Monomial>& QuotientRing::basis(int n, int q) const { return piece(n, q).basis; }

int QuotientRing::index_of(int n, int q, const Monomial& m) const {
  const auto& pc = piece(n, q);
  auto it = pc.index.find(m);
  return it == pc.index.end() ? -1 : it->second;
}

SVec QuotientRing::to_vector(const Poly& p, int n, int q) const {
  Poly nf = normal_form(p);
  const auto& pc = piece(n, q);
  std::vector<std::pair<int, Scalar>> out;
  for (const auto& [m, c] : nf.terms()) {
    auto it = pc.index.find(m);
    if (it == pc.index.end())
      throw StructuralError("element " + nf.to_string() + " is not of bidegree (" + std::to_string(n) + "," +
                            std::to_string(q) + ")");
    out.emplace_back(it->second, c);
  }
  return make_svec(std::move(out));
}

Poly QuotientRing::from_vector(const SVec& v, int n, int q) const {
  const auto& b = basis(n, q);
  Poly p(ring_);
  for (const auto& [i, c] : v) p.add_term(b[static_cast<std::size_t>(i)], c);
  return p;
}

std::vector<std::vector<Monomial>> kbasis(const QuotientRing& ring, int max_internal_degree) {
  if (!ring.is_graded() && !ring.filtration_mode())
    throw UngradedRing("ring " + ring.name() + " has inhomogeneous relations");
  std::vector<std::vector<Monomial>> out;
  for (int q = 0; q <= max_internal_degree; ++q) out.push_back(ring.basis(0, q));
  return out;
}

RingMorphism::RingMorphism(QRingPtr source, QRingPtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)) {
  if (images.size() != source_->nvars())
    throw StructuralError("morphism needs " + std::to_string(source_->nvars()) + " images, got " +
                          std::to_string(images.size()));
  for (auto& im : images) {
    if (!im.ring()) im = target_->zero();
    images_.push_back(target_->normal_form(im));
  }
  map_ = RingMap(source_->ring(), target_->ring(), images_);
  for (const auto& r : source_->relations()) {
    if (!apply(r).is_zero())
      throw StructuralError("relation " + r.to_string() + " of " + source_->name() + " does not map to zero in " +
                            target_->name());
  }
}

Poly RingMorphism::apply(const Poly& p) const { return target_->normal_form(map_.apply(p)); }

bool RingMorphism::is_identity() const {
  if (source_->nvars() != target_->nvars()) return false;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != Poly::variable(target_->ring(), i)) return false;
  return true;
}

bool RingMorphism::is_graded() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const auto& im = images_[i];
    if (im.is_zero()) continue;
    if (!im.is_homogeneous()) return false;
    if (im.internal_degree() != source_->ring()->var(i).weight) return false;
    if (im.hom_degree() != source_->ring()->var(i).hom) return false;
  }
  return true;
}

RingTensor tensor_rings(const QRingPtr& B, const QRingPtr& A, const RingMorphism& f, const RingMorphism& g) {
  if (f.source()->nvars() != A->nvars() || g.source()->nvars() != A->nvars() ||
      f.target()->nvars() != B->nvars() || g.target()->nvars() != B->nvars())
    throw StructuralError("tensor_rings: morphisms do not match A -> B");
  const auto& bv = B->ring()->vars();
  const std::size_t nb = bv.size();
  std::vector<bool> merged(nb, false);
  std::vector<std::pair<Poly, Poly>> identifications;
  for (std::size_t a = 0; a < A->nvars(); ++a) {
    const Poly& p = f.images()[a];
    const Poly& q = g.images()[a];
    if (p == q && p.size() == 1 && p.terms().begin()->second.is_one()) {
      auto s = p.terms().begin()->first.support();
      if (s.size() == 1 && s[0].second == 1 && !merged[static_cast<std::size_t>(s[0].first)]) {
        merged[static_cast<std::size_t>(s[0].first)] = true;
        continue;
      }
    }
    identifications.emplace_back(p, q);
  }
  std::vector<Variable> vars;
  std::vector<int> first_idx(nb), second_idx(nb);
  auto suffix = [](const std::string& name, const char* k) {
    return (!name.empty() && std::isdigit(static_cast<unsigned char>(name.back()))) ? name + "_" + k : name + k;
  };
  for (std::size_t i = 0; i < nb; ++i) {
    Variable v = bv[i];
    if (!merged[i]) v.name = suffix(v.name, "1");
    first_idx[i] = static_cast<int>(vars.size());
    vars.push_back(v);
  }
  for (std::size_t i = 0; i < nb; ++i) {
    if (merged[i]) {
      second_idx[i] = first_idx[i];
      continue;
    }
    Variable v = bv[i];
    v.name = suffix(v.name, "2");
    second_idx[i] = static_cast<int>(vars.size());
    vars.push_back(v);
  }
  RingPtr ring = PolyRing::make(B->field(), vars, B->ring()->order());
  std::vector<Poly> im1, im2;
  for (std::size_t i = 0; i < nb; ++i) {
    im1.push_back(Poly::variable(ring, static_cast<std::size_t>(first_idx[i])));
    im2.push_back(Poly::variable(ring, static_cast<std::size_t>(second_idx[i])));
  }
  RingMap c1(B->ring(), ring, im1), c2(B->ring(), ring, im2);
  std::vector<Poly> rels;
  for (const auto& r : B->relations()) rels.push_back(c1.apply(r));
  for (const auto& r : B->relations()) rels.push_back(c2.apply(r));
  for (const auto& [p, q] : identifications) rels.push_back(c1.apply(p) - c2.apply(q));
  auto T = QuotientRing::make(B->name() + "*" + B->name(), ring, rels, B->filtration_mode());
  return RingTensor{T, RingMorphism(B, T, im1), RingMorphism(B, T, im2)};
}

RingPtr make_ring(const FieldSpec& field, const std::vector<std::string>& names, const std::vector<int>& weights) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < names.size(); ++i)
    vars.push_back(Variable{names[i], 0, i < weights.size() ? weights[i] : 1});
  return PolyRing::make(field, vars);
}

}  // namespace dgcohom
