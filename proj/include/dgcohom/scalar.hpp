#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "dgcohom/errors.hpp"

namespace dgcohom {

/// Base field of a computation: the rationals or a prime field F_p.
class FieldSpec {
 public:
  enum class Kind { Rationals, PrimeField };

  FieldSpec() = default;
  static FieldSpec rationals() { return FieldSpec(); }
  /// Throws StructuralError unless p is prime.
  static FieldSpec prime(std::uint32_t p);

  Kind kind() const { return kind_; }
  std::uint32_t characteristic() const { return p_; }
  bool is_rational() const { return kind_ == Kind::Rationals; }
  std::string to_string() const;

  bool operator==(const FieldSpec&) const = default;

 private:
  Kind kind_ = Kind::Rationals;
  std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

/// Exact scalar in Q or F_p.
///
/// The modulus travels with the value. A modulus of zero means "rational";
/// mixing a rational value with an F_p value maps the rational into F_p, so
/// integer literals can be combined freely with field elements.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class v, std::uint32_t p);

  static Scalar zero(const FieldSpec& f) { return Scalar(0, f.characteristic()); }
  static Scalar one(const FieldSpec& f) { return Scalar(1, f.characteristic()); }
  static Scalar from(long n, const FieldSpec& f) { return Scalar(n, f.characteristic()); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  std::uint32_t modulus() const { return p_; }
  const mpq_class& value() const { return v_; }

  Scalar inverse() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void adopt(std::uint32_t p);
  void reduce();

  mpq_class v_;
  std::uint32_t p_ = 0;
};

}  // namespace dgcohom
