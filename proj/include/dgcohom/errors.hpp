#pragma once

#include <stdexcept>
#include <string>

namespace dgcohom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched rings, variables, shapes or degrees.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A constructed complex violates d∘d = 0 or a map fails to commute.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// The requested computation needs a larger degree window.
class BoundInsufficient : public Error {
 public:
  BoundInsufficient(const std::string& what, int degree)
      : Error(what + " (degree reached: " + std::to_string(degree) + ")"), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

/// Polynomial divided-power issues in positive characteristic.
class CharacteristicGuard : public Error {
 public:
  using Error::Error;
};

class UngradedRing : public Error {
 public:
  using Error::Error;
};

class OracleUnavailable : public Error {
 public:
  using Error::Error;
};

/// A lifting problem whose target map is not surjective.
class NotSurjective : public Error {
 public:
  using Error::Error;
};

}  // namespace dgcohom
