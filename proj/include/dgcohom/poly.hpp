#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dgcohom/scalar.hpp"

namespace dgcohom {

/// A variable of a graded-commutative polynomial ring.
///
/// Homological degree is <= 0 (differentials raise it by one); variables of
/// degree 0 are the commutative "base" variables on which relations live.
/// Odd-degree variables anticommute and square to zero.
struct Variable {
  std::string name;
  int hom = 0;
  int weight = 1;
  bool odd() const { return (hom % 2) != 0; }
  bool operator==(const Variable&) const = default;
};

enum class MonomialOrder { Grevlex, Lex };

/// Exponent vector over the variables of one ring. Odd variables carry
/// exponent 0 or 1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<int> e) : e_(std::move(e)) {}

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  int& operator[](std::size_t i) { return e_[i]; }
  const std::vector<int>& exponents() const { return e_; }
  bool is_one() const;
  /// Sparse (variable index, exponent) view, sorted, without zeros.
  std::vector<std::pair<int, int>> support() const;

  bool divides(const Monomial& o) const;
  Monomial operator*(const Monomial& o) const;  // exponent sum, no sign
  Monomial operator/(const Monomial& o) const;  // requires divides
  Monomial lcm(const Monomial& o) const;

  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<int> e_;
};

class PolyRing;
using RingPtr = std::shared_ptr<const PolyRing>;

/// The free graded-commutative algebra on a list of variables over a field.
class PolyRing {
 public:
  PolyRing(FieldSpec field, std::vector<Variable> vars, MonomialOrder order = MonomialOrder::Grevlex);
  static RingPtr make(FieldSpec field, std::vector<Variable> vars,
                      MonomialOrder order = MonomialOrder::Grevlex);

  const FieldSpec& field() const { return field_; }
  const std::vector<Variable>& vars() const { return vars_; }
  const Variable& var(std::size_t i) const { return vars_[i]; }
  std::size_t nvars() const { return vars_.size(); }
  MonomialOrder order() const { return order_; }
  int index_of(const std::string& name) const;  // -1 if absent
  bool is_commutative() const;                  // all variables in degree 0

  int hom_degree(const Monomial& m) const;
  int internal_degree(const Monomial& m) const;
  /// Base part (degree-0 variables) and generator part of a monomial.
  Monomial base_part(const Monomial& m) const;
  Monomial gen_part(const Monomial& m) const;
  /// Sign of reordering m1*m2 into sorted order; 0 when an odd variable repeats.
  int product_sign(const Monomial& a, const Monomial& b) const;
  /// Monomial order on base parts (weighted grevlex or lex); true if a > b.
  bool greater(const Monomial& a, const Monomial& b) const;

  std::string monomial_string(const Monomial& m) const;

 private:
  FieldSpec field_;
  std::vector<Variable> vars_;
  MonomialOrder order_;
};

/// Element of a PolyRing: finite sum of nonzero terms.
class Poly {
 public:
  using Terms = std::map<Monomial, Scalar>;

  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}
  static Poly constant(RingPtr ring, const Scalar& c);
  static Poly variable(RingPtr ring, std::size_t index);
  static Poly monomial(RingPtr ring, Monomial m, const Scalar& c = 1);

  const RingPtr& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  void add_term(const Monomial& m, const Scalar& c);
  Scalar coefficient(const Monomial& m) const;

  /// Leading term with respect to the ring's monomial order.
  const std::pair<const Monomial, Scalar>& leading() const;
  /// Terms sorted by decreasing monomial order.
  std::vector<std::pair<Monomial, Scalar>> ordered_terms() const;

  bool is_homogeneous() const;
  int hom_degree() const;       // of the leading term; 0 for zero
  int internal_degree() const;  // of the leading term; 0 for zero

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator*(const Poly& o) const;
  Poly scaled(const Scalar& c) const;
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly pow(int n) const;
  std::string to_string() const;

 private:
  RingPtr ring_;
  Terms terms_;
};

/// Graded algebra map between free graded-commutative rings, given by the
/// images of the source variables. No normal forms are taken.
class RingMap {
 public:
  RingMap() = default;
  RingMap(RingPtr source, RingPtr target, std::vector<Poly> images);

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  Poly apply(const Poly& p) const;
  Poly apply_monomial(const Monomial& m) const;

 private:
  RingPtr source_;
  RingPtr target_;
  std::vector<Poly> images_;
};

/// Parses an integer-coefficient polynomial: variables [A-Za-z_][A-Za-z0-9_]*,
/// operators + - * ^, whitespace ignored. Throws StructuralError with a
/// column on malformed input or unknown variables.
Poly parse_poly(const std::string& text, const RingPtr& ring);

}  // namespace dgcohom
