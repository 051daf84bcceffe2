#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgcohom/linalg.hpp"
#include "dgcohom/quotient_ring.hpp"

namespace dgcohom {

/// Finite-dimensional based cochain complex on a window [n_min, n_max].
///
/// d(n) maps degree n to degree n+1. Components outside the window are zero.
/// `open_below` / `open_above` record that the complex is a truncation on
/// that side, so cohomology next to that edge is not trustworthy.
class BoundedComplex {
 public:
  BoundedComplex() = default;
  BoundedComplex(int n_min, int n_max, std::vector<int> dims);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  int dim(int n) const;
  bool in_window(int n) const { return n >= n_min_ && n <= n_max_; }
  /// Differential out of degree n (rows = dim(n+1), cols = dim(n)).
  const SparseMatrix& d(int n) const;
  void set_d(int n, SparseMatrix m);

  const std::vector<std::string>& labels(int n) const;
  void set_labels(int n, std::vector<std::string> labels);

  bool open_below = false;
  bool open_above = false;

  /// Throws IntegrityError unless d∘d = 0 everywhere.
  void check() const;
  int euler_characteristic() const;
  int total_dim() const;

 private:
  int n_min_ = 0;
  int n_max_ = -1;
  std::vector<int> dims_;
  std::vector<SparseMatrix> d_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::string> no_labels_;
};

/// Graded map C → D of degree `shift` (C^n → D^{n+shift}).
class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(const BoundedComplex* source, const BoundedComplex* target, int shift);

  const BoundedComplex& source() const { return *source_; }
  const BoundedComplex& target() const { return *target_; }
  int shift() const { return shift_; }
  const SparseMatrix& at(int n) const;
  void set(int n, SparseMatrix m);
  /// d_D f = (−1)^shift f d_C on every degree.
  bool commutes() const;

 private:
  const BoundedComplex* source_ = nullptr;
  const BoundedComplex* target_ = nullptr;
  int shift_ = 0;
  std::vector<SparseMatrix> f_;
};

struct CohomologyDegree {
  int degree = 0;
  int dim = 0;
  bool edge = false;  // unreliable because of window truncation
  Subquotient classes;
};

class CohomologyReport {
 public:
  std::vector<CohomologyDegree> degrees;

  const CohomologyDegree& at(int n) const;
  int dim(int n) const;
  bool edge(int n) const;
  /// Dimensions over the whole window.
  std::vector<int> dims() const;
  bool acyclic_interior() const;
};

CohomologyReport cohomology(const BoundedComplex& c);

/// Standard cone of a degree-0 map: cone^n = C^{n+1} ⊕ D^n,
/// d(c, x) = (−dc, f(c) + dx).
BoundedComplex cone(const ChainMap& f);

/// Tensor product over the field with the Koszul sign
/// d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db; basis ordered by (|a|, a, b).
BoundedComplex tensor_complex(const BoundedComplex& C, const BoundedComplex& D);

/// Hom^n = ⊕_k Hom(C^k, D^{k+n}), δf = d_D f − (−1)^n f d_C. Basis of each
/// Hom(C^k, D^{k+n}) is the matrix entries in column-major order.
BoundedComplex hom_complex(const BoundedComplex& C, const BoundedComplex& D);

struct QuasiIsoReport {
  bool iso = true;
  std::vector<int> failing_degrees;
  std::vector<SparseMatrix> induced;  // per degree in the window, H(C) → H(D)
};

/// Checks H^n(f) is an isomorphism for n in [a, b].
QuasiIsoReport is_quasiiso(const ChainMap& f, int a, int b);

/// Complex of finitely generated graded free modules over a commutative
/// quotient ring (homological degree 0 variables only).
///
/// Degree n has generators in internal degrees gens[n]; d(n) is a matrix of
/// ring elements, column j = image of generator j.
class FreeComplex {
 public:
  FreeComplex() = default;
  FreeComplex(QRingPtr ring, int n_min, int n_max);

  const QRingPtr& ring() const { return ring_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  const std::vector<int>& generators(int n) const;
  void set_generators(int n, std::vector<int> internal_degrees);
  int rank(int n) const { return static_cast<int>(generators(n).size()); }
  /// entries[j][i]: coefficient of target generator i in d(generator j).
  const std::vector<std::vector<Poly>>& d(int n) const;
  void set_d(int n, std::vector<std::vector<Poly>> columns);

  /// Internal degree q slice as a based complex over the field.
  BoundedComplex materialize(int q) const;
  /// Checks d∘d = 0 and homogeneity; throws IntegrityError.
  void check() const;

 private:
  QRingPtr ring_;
  int n_min_ = 0;
  int n_max_ = -1;
  std::vector<std::vector<int>> gens_;
  std::vector<std::vector<std::vector<Poly>>> d_;
  std::vector<int> no_gens_;
  std::vector<std::vector<Poly>> no_d_;
};

/// Tensor and Hom over the ring of two free complexes (Koszul signs as above).
FreeComplex tensor_complex(const FreeComplex& C, const FreeComplex& D);
FreeComplex hom_complex(const FreeComplex& C, const FreeComplex& D);

/// Single ring in degree 0 as a free complex.
FreeComplex unit_complex(const QRingPtr& ring);

}  // namespace dgcohom
