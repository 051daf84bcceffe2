#include "dgcohom/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dgcohom/errors.hpp"

namespace dgcohom {

bool Monomial::is_one() const {
  return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; });
}

std::vector<std::pair<int, int>> Monomial::support() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] != 0) out.emplace_back(static_cast<int>(i), e_[i]);
  return out;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = std::max(e_[i], o.e_[i]);
  return r;
}

PolyRing::PolyRing(FieldSpec field, std::vector<Variable> vars, MonomialOrder order)
    : field_(field), vars_(std::move(vars)), order_(order) {
  for (const auto& v : vars_) {
    if (v.hom > 0) throw StructuralError("variable " + v.name + " has positive homological degree");
    if (v.weight < 1) throw StructuralError("variable " + v.name + " needs a positive weight");
  }
}

RingPtr PolyRing::make(FieldSpec field, std::vector<Variable> vars, MonomialOrder order) {
  return std::make_shared<const PolyRing>(field, std::move(vars), order);
}

int PolyRing::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool PolyRing::is_commutative() const {
  return std::all_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.hom == 0; });
}

int PolyRing::hom_degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) d += m[i] * vars_[i].hom;
  return d;
}

int PolyRing::internal_degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) d += m[i] * vars_[i].weight;
  return d;
}

Monomial PolyRing::base_part(const Monomial& m) const {
  Monomial r = m;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].hom != 0) r[i] = 0;
  return r;
}

Monomial PolyRing::gen_part(const Monomial& m) const {
  Monomial r = m;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].hom == 0) r[i] = 0;
  return r;
}

int PolyRing::product_sign(const Monomial& a, const Monomial& b) const {
  // count pairs (i in a, j in b) of odd variables with i > j
  int swaps = 0;
  int odd_in_b_below = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!vars_[i].odd()) continue;
    if (a[i] > 0 && b[i] > 0) return 0;
    if (a[i] > 0) swaps += odd_in_b_below;
    if (b[i] > 0) ++odd_in_b_below;
  }
  return (swaps % 2) ? -1 : 1;
}

bool PolyRing::greater(const Monomial& a, const Monomial& b) const {
  if (order_ == MonomialOrder::Lex) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
  int da = internal_degree(a), db = internal_degree(b);
  if (da != db) return da > db;
  for (std::size_t i = vars_.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

std::string PolyRing::monomial_string(const Monomial& m) const {
  std::string s;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars_[i].name;
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

Poly Poly::constant(RingPtr ring, const Scalar& c) {
  Poly p(ring);
  p.add_term(Monomial(p.ring_->nvars()), c);
  return p;
}

Poly Poly::variable(RingPtr ring, std::size_t index) {
  Monomial m(ring->nvars());
  m[index] = 1;
  return monomial(std::move(ring), m, 1);
}

Poly Poly::monomial(RingPtr ring, Monomial m, const Scalar& c) {
  Poly p(std::move(ring));
  p.add_term(m, c);
  return p;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  Scalar cc = c;
  if (ring_ && cc.modulus() == 0 && ring_->field().characteristic() != 0)
    cc = cc * Scalar::one(ring_->field());
  auto [it, inserted] = terms_.try_emplace(m, cc);
  if (!inserted) {
    it->second += cc;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Scalar Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

const std::pair<const Monomial, Scalar>& Poly::leading() const {
  if (terms_.empty()) throw StructuralError("leading term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
    if (ring_->greater(it->first, best->first)) best = it;
  return *best;
}

std::vector<std::pair<Monomial, Scalar>> Poly::ordered_terms() const {
  std::vector<std::pair<Monomial, Scalar>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [this](const auto& a, const auto& b) { return ring_->greater(a.first, b.first); });
  return out;
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  int h = ring_->hom_degree(terms_.begin()->first);
  int q = ring_->internal_degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (ring_->hom_degree(m) != h || ring_->internal_degree(m) != q) return false;
  return true;
}

int Poly::hom_degree() const { return terms_.empty() ? 0 : ring_->hom_degree(leading().first); }

int Poly::internal_degree() const {
  return terms_.empty() ? 0 : ring_->internal_degree(leading().first);
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (!ring_) ring_ = o.ring_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (!ring_) ring_ = o.ring_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  const RingPtr& r = ring_ ? ring_ : o.ring_;
  Poly out(r);
  if (ring_ && o.ring_ && ring_ != o.ring_ && ring_->nvars() != o.ring_->nvars())
    throw StructuralError("multiplying polynomials from different rings");
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) {
      int s = r->product_sign(a, b);
      if (s == 0) continue;
      Scalar c = ca * cb;
      if (s < 0) c = -c;
      out.add_term(a * b, c);
    }
  }
  return out;
}

Poly Poly::scaled(const Scalar& c) const {
  Poly r(ring_);
  for (const auto& [m, a] : terms_) r.add_term(m, a * c);
  return r;
}

Poly Poly::pow(int n) const {
  Poly r = constant(ring_, 1);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : ordered_terms()) {
    mpq_class v = c.value();
    bool neg = v < 0 && c.modulus() == 0;
    if (neg) v = -v;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    bool unit = (v == 1);
    if (m.is_one()) {
      s += v.get_str();
    } else {
      if (!unit) s += v.get_str() + "*";
      s += ring_->monomial_string(m);
    }
  }
  return s;
}

RingMap::RingMap(RingPtr source, RingPtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->nvars()) throw StructuralError("ring map needs one image per source variable");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!images_[i].ring()) images_[i] = Poly(target_);
    if (images_[i].ring()->nvars() != target_->nvars())
      throw StructuralError("ring map image lives in the wrong ring");
  }
}

Poly RingMap::apply_monomial(const Monomial& m) const {
  Poly r = Poly::constant(target_, 1);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int k = 0; k < m[i]; ++k) r = r * images_[i];
  return r;
}

Poly RingMap::apply(const Poly& p) const {
  Poly out(target_);
  for (const auto& [m, c] : p.terms()) out += apply_monomial(m).scaled(c);
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, RingPtr ring) : s_(text), ring_(std::move(ring)) {}

  Poly parse() {
    Poly result(ring_);
    skip();
    bool first = true;
    while (pos_ < s_.size() || first) {
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      Poly t = term();
      result += sign > 0 ? t : -t;
      skip();
    }
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw StructuralError("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg +
                          " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Poly term() {
    Poly t = factor();
    skip();
    while (pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      skip();
      t = t * factor();
      skip();
    }
    return t;
  }

  long integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stol(s_.substr(start, pos_ - start));
  }

  Poly factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class z(s_.substr(start, pos_ - start));
      return Poly::constant(ring_, Scalar(mpq_class(z), ring_->field().characteristic()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      int idx = ring_->index_of(name);
      if (idx < 0) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      Poly v = Poly::variable(ring_, static_cast<std::size_t>(idx));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip();
        long e = integer();
        return v.pow(static_cast<int>(e));
      }
      return v;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string s_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const RingPtr& ring) { return PolyParser(text, ring).parse(); }

}  // namespace dgcohom
