#include "dgcohom/scalar.hpp"

#include "dgcohom/errors.hpp"

namespace dgcohom {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (!is_prime(p)) throw StructuralError("field characteristic " + std::to_string(p) + " is not prime");
  FieldSpec f;
  f.kind_ = Kind::PrimeField;
  f.p_ = p;
  return f;
}

std::string FieldSpec::to_string() const {
  return is_rational() ? std::string("Q") : "Fp:" + std::to_string(p_);
}

Scalar::Scalar(mpq_class v, std::uint32_t p) : v_(std::move(v)), p_(p) {
  v_.canonicalize();
  reduce();
}

void Scalar::reduce() {
  if (p_ == 0) return;
  mpz_class m(p_);
  mpz_class num = v_.get_num() % m;
  mpz_class den = v_.get_den() % m;
  if (den == 0) throw StructuralError("denominator divisible by the characteristic");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = (num * inv) % m;
  if (r < 0) r += m;
  v_ = mpq_class(r);
}

void Scalar::adopt(std::uint32_t p) {
  if (p == 0 || p == p_) return;
  if (p_ != 0) throw StructuralError("mixing scalars of different characteristic");
  p_ = p;
  reduce();
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw StructuralError("division by zero");
  Scalar r = *this;
  r.v_ = 1 / v_;
  r.reduce();
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.v_ = -v_;
  r.reduce();
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.p_ == p_) {
    v_ += o.v_;
  } else {
    adopt(o.p_);
    Scalar b = o;
    b.adopt(p_);
    v_ += b.v_;
  }
  reduce();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (o.p_ == p_) {
    v_ -= o.v_;
  } else {
    adopt(o.p_);
    Scalar b = o;
    b.adopt(p_);
    v_ -= b.v_;
  }
  reduce();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.p_ == p_) {
    v_ *= o.v_;
  } else {
    adopt(o.p_);
    Scalar b = o;
    b.adopt(p_);
    v_ *= b.v_;
  }
  reduce();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ == b.p_) return a.v_ == b.v_;
  Scalar x = a, y = b;
  x.adopt(b.p_);
  y.adopt(a.p_);
  return x.v_ == y.v_;
}

std::string Scalar::to_string() const { return v_.get_str(); }

}  // namespace dgcohom
