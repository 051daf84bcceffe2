#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dgcohom/complex.hpp"
#include "dgcohom/quotient_ring.hpp"

namespace dgcohom {

/// Free graded-commutative DG algebra over a coefficient ring.
///
/// The underlying ring holds every variable: the first `ncoeff` variables
/// form the coefficient ring (with its relations), the remaining ones are the
/// free generators. Degree-0 variables have zero differential; the
/// differential is extended by the Leibniz rule.
class DGAlgebra {
 public:
  DGAlgebra(std::string name, QRingPtr ring, std::vector<Poly> differential, std::size_t ncoeff);

  const std::string& name() const { return name_; }
  const QRingPtr& ring() const { return ring_; }
  const RingPtr& poly_ring() const { return ring_->ring(); }
  std::size_t nvars() const { return ring_->nvars(); }
  std::size_t ncoeff() const { return ncoeff_; }
  std::vector<std::size_t> generators() const;
  /// Number of generators in homological degree n.
  int generator_count(int n) const;
  const Poly& d_var(std::size_t i) const { return diff_[i]; }
  const std::vector<Poly>& differential() const { return diff_; }

  Poly d(const Poly& p) const;
  int dim(int n, int q) const { return ring_->dim(n, q); }
  const std::vector<Monomial>& basis(int n, int q) const { return ring_->basis(n, q); }
  SparseMatrix d_matrix(int n, int q) const;
  /// Left multiplication by a homogeneous element, (n,q) → (n+|a|, q+w(a)).
  SparseMatrix mult_matrix(const Poly& a, int n, int q) const;
  /// Internal degree q slice on homological degrees [n_lo, n_hi].
  BoundedComplex slice(int q, int n_lo, int n_hi) const;

  /// New algebra with extra generators appended; `diffs` live in the new ring.
  std::shared_ptr<const DGAlgebra> adjoin(const std::vector<Variable>& vars,
                                          const std::function<std::vector<Poly>(const QRingPtr&)>& diffs) const;

  /// Checks d∘d = 0 on generators and Leibniz on generator pairs; throws
  /// IntegrityError.
  void check() const;
  std::string describe() const;

 private:
  Poly d_monomial(const Monomial& m) const;

  std::string name_;
  QRingPtr ring_;
  std::vector<Poly> diff_;
  std::size_t ncoeff_;
  mutable std::mutex mu_;
  mutable std::map<Monomial, Poly> d_cache_;
};

using DGAPtr = std::shared_ptr<const DGAlgebra>;

/// Coefficient ring in degree 0 with zero differential.
DGAPtr algebra_of_ring(const QRingPtr& ring);

/// Copies p into a ring whose leading variables agree with p's ring.
Poly extend_poly(const Poly& p, const RingPtr& target);

/// Map of DG algebras given by images of the source variables.
class DGAlgebraMap {
 public:
  DGAlgebraMap() = default;
  DGAlgebraMap(DGAPtr source, DGAPtr target, std::vector<Poly> images);

  const DGAPtr& source() const { return source_; }
  const DGAPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  Poly apply(const Poly& p) const;
  SparseMatrix matrix(int n, int q) const;
  /// Composite this ∘ first.
  DGAlgebraMap after(const DGAlgebraMap& first) const;
  /// φ∘d = d∘φ on every source variable.
  bool commutes() const;

 private:
  DGAPtr source_;
  DGAPtr target_;
  std::vector<Poly> images_;
  RingMap map_;
};

/// Λ[ε_1..ε_k] with dε_i = f_i (weights of ε_i = internal degree of f_i).
DGAPtr koszul_complex(const QRingPtr& base, const std::vector<Poly>& elements);

struct TateOptions {
  /// Choose cycle representatives with pivots scanned from the other end.
  bool reverse_pivots = false;
  /// Adjoin the generators of each bidegree in reverse order.
  bool reverse_order = false;
  /// Disable the one-relation shortcut in resolve_multiplication.
  bool generic_only = false;
};

struct Bounds {
  int hom_bound = 6;        // generators adjoined down to homological degree -hom_bound
  int internal_bound = 14;  // generators adjoined up to this internal degree
};

/// Free DG algebra X with a surjective quasiisomorphism X → Y in the window.
struct Resolution {
  DGAPtr algebra;
  DGAlgebraMap augmentation;
  Bounds bounds;
  /// (homological degree, internal degree) of each adjoined generator.
  std::vector<std::pair<int, int>> adjoined;
};

/// Adjoins generators to X0 until the cone of X → Y has no cohomology in
/// degrees ≥ -hom_bound and internal degrees ≤ internal_bound.
Resolution kill_cohomology(const DGAlgebraMap& start, const Bounds& bounds, const TateOptions& options,
                           const std::string& prefix);

/// Tate resolution R → B of B over A.
Resolution tate_resolve(const RingMorphism& f, const Bounds& bounds, const TateOptions& options = {});

/// S = R ⊗_A R with its embeddings and the multiplication onto R.
struct EnvelopingAlgebra {
  DGAPtr S;
  DGAlgebraMap j1;
  DGAlgebraMap j2;
  DGAlgebraMap mu;
};

EnvelopingAlgebra enveloping(const DGAPtr& R);

/// Free S-algebra resolution B_alg → R of R over S. With one Koszul
/// generator over the coefficient ring the result is S[η], dη = ε_1 − ε_2.
Resolution resolve_multiplication(const EnvelopingAlgebra& env, const Bounds& bounds,
                                  const TateOptions& options = {});

/// Cohomology of the cone of X → Y at internal degree q, degrees [n_lo, n_hi].
BoundedComplex cone_slice(const DGAlgebraMap& phi, int q, int n_lo, int n_hi);

}  // namespace dgcohom
