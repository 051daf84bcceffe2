#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dgcohom/linalg.hpp"
#include "dgcohom/poly.hpp"

namespace dgcohom {

/// Full reduction of p by a list of polynomials (multivariate division).
/// Only base parts are reduced; generator parts ride along.
Poly reduce(const Poly& p, const std::vector<Poly>& divisors);

/// S-polynomial of two base polynomials.
Poly s_polynomial(const Poly& f, const Poly& g);

/// Reduced Gröbner basis (monic, sorted by leading monomial) of the ideal
/// generated by `relations`, which must involve degree-0 variables only.
std::vector<Poly> buchberger(const std::vector<Poly>& relations);

/// A graded-commutative polynomial ring modulo an ideal of its base part.
///
/// Bidegree pieces (homological n, internal q) are finite because every
/// variable carries a positive weight. Bases are standard monomials, cached
/// per bidegree.
class QuotientRing {
 public:
  QuotientRing(std::string name, RingPtr ring, std::vector<Poly> relations, bool filtration_mode = false);
  static std::shared_ptr<const QuotientRing> make(std::string name, RingPtr ring, std::vector<Poly> relations,
                                                  bool filtration_mode = false);

  const std::string& name() const { return name_; }
  const RingPtr& ring() const { return ring_; }
  const FieldSpec& field() const { return ring_->field(); }
  std::size_t nvars() const { return ring_->nvars(); }
  const std::vector<Poly>& relations() const { return relations_; }
  const std::vector<Poly>& groebner() const { return gb_; }
  /// All relations weighted-homogeneous.
  bool is_graded() const { return graded_; }
  bool filtration_mode() const { return filtration_; }
  /// True when no degree-0 variable remains after quotienting in degree 0,
  /// i.e. the degree-0 part is finite-dimensional.
  bool finite_degree_zero() const;

  Poly zero() const { return Poly(ring_); }
  Poly one() const { return Poly::constant(ring_, Scalar::one(field())); }
  Poly var(const std::string& name) const;
  Poly parse(const std::string& text) const;
  Poly normal_form(const Poly& p) const;
  Poly multiply(const Poly& a, const Poly& b) const { return normal_form(a * b); }
  bool is_standard(const Monomial& m) const;

  /// Standard monomials of bidegree (n, q), sorted.
  const std::vector<Monomial>& basis(int n, int q) const;
  int dim(int n, int q) const { return static_cast<int>(basis(n, q).size()); }
  int index_of(int n, int q, const Monomial& m) const;
  /// Coordinates of a (normal-formed internally) homogeneous element.
  SVec to_vector(const Poly& p, int n, int q) const;
  Poly from_vector(const SVec& v, int n, int q) const;

 private:
  std::string name_;
  RingPtr ring_;
  std::vector<Poly> relations_;
  std::vector<Poly> gb_;
  std::vector<Monomial> leading_;
  bool monomial_ideal_ = true;
  bool graded_ = true;
  bool filtration_ = false;

  struct Piece {
    std::vector<Monomial> basis;
    std::map<Monomial, int> index;
  };
  const Piece& piece(int n, int q) const;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Piece>> cache_;
};

using QRingPtr = std::shared_ptr<const QuotientRing>;

/// Standard monomials of homological degree 0 in each internal degree
/// 0..max_internal_degree. Throws UngradedRing for inhomogeneous relations
/// unless the ring was built in filtration mode.
std::vector<std::vector<Monomial>> kbasis(const QuotientRing& ring, int max_internal_degree);

/// Algebra map between quotient rings given by images of source variables.
/// Construction checks that every source relation maps to zero.
class RingMorphism {
 public:
  RingMorphism() = default;
  RingMorphism(QRingPtr source, QRingPtr target, std::vector<Poly> images);

  const QRingPtr& source() const { return source_; }
  const QRingPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  Poly apply(const Poly& p) const;
  bool is_identity() const;
  /// True when every image is weighted-homogeneous of the source weight.
  bool is_graded() const;

 private:
  QRingPtr source_;
  QRingPtr target_;
  std::vector<Poly> images_;
  RingMap map_;
};

/// Presentation of B ⊗_A B together with its two inclusions of B.
struct RingTensor {
  QRingPtr ring;
  RingMorphism first;
  RingMorphism second;
};

/// B ⊗_A B for f, g: A → B. Variables of B are duplicated into two blocks
/// (suffixes 1 and 2); identifications f(a) = g(a) that equate a block-2
/// variable with its block-1 copy are eliminated by substitution, the rest are
/// kept as relations.
RingTensor tensor_rings(const QRingPtr& B, const QRingPtr& A, const RingMorphism& f, const RingMorphism& g);

/// Polynomial ring with the given variable names (weight 1 unless listed).
RingPtr make_ring(const FieldSpec& field, const std::vector<std::string>& names,
                  const std::vector<int>& weights = {});

}  // namespace dgcohom
