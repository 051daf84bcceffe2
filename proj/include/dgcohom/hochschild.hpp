#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dgcohom/module.hpp"

namespace dgcohom {

/// Everything needed to compute Hochschild invariants of f: A → B.
///
/// R → B is a Tate resolution, S = R ⊗_A R, B_alg → R resolves R over S and
/// P is B_alg viewed as a semifree S-module on its generator words.
struct HochschildSetup {
  RingMorphism f;
  Bounds bounds;
  TateOptions options;
  Resolution tate;
  EnvelopingAlgebra env;
  Resolution mult;
  bool fast_path = false;
  DGAPtr B;
  DGAlgebraMap S_to_B;
  SemifreePtr P;
  std::vector<Monomial> words;
  ModPtr B_over_S;
  std::shared_ptr<const SemifreeMorphism> augmentation;
};

/// hom_bound = n_max + 1 and an internal bound proportional to it.
Bounds default_bounds(const RingMorphism& f, int n_max);

HochschildSetup build_setup(const RingMorphism& f, const Bounds& bounds, const TateOptions& options = {});

/// A module over B seen over S.
ModPtr over_S(const HochschildSetup& setup, const ModPtr& M);

/// True when the Hom complex Hom_S(P, M) is complete at (k, r).
bool hom_certified(const HochschildSetup& setup, const DGModule& M, int k, int r);
/// True when M ⊗_S P is complete in degree n, internal q.
bool tensor_certified(const HochschildSetup& setup, const DGModule& M, int n, int q);

/// Cohomology classes of Hom_T(P, M), cached per bidegree.
class ExtSpace {
 public:
  ExtSpace(SemifreePtr P, ModPtr M);

  const HomComplex& hom() const { return hom_; }
  const Subquotient& classes(int k, int r) const;
  int dim(int k, int r) const { return classes(k, r).dim(); }
  SemifreeMorphism representative(int k, int r, const SVec& coords) const;
  SemifreeMorphism basis_class(int k, int r, int j) const;
  /// Coordinates of a cocycle; throws IntegrityError for non-cocycles.
  SVec coordinates(const SemifreeMorphism& cocycle) const;

 private:
  HomComplex hom_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Subquotient>> cache_;
};

/// Homology classes of M ⊗_T P, cached per bidegree.
class TorSpace {
 public:
  TorSpace(ModPtr M, SemifreePtr P);

  const TensorComplex& tensor() const { return tensor_; }
  const Subquotient& classes(int n, int q) const;
  int dim(int n, int q) const { return classes(n, q).dim(); }

 private:
  TensorComplex tensor_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Subquotient>> cache_;
};

struct HHCell {
  int degree = 0;    // cohomological k, or homological n for HH_n
  int internal = 0;  // internal degree r (cohomology) or q (homology)
  int dim = 0;
  bool certified = true;
};

struct HHReport {
  enum class Direction { Cohomology, Homology };
  Direction direction = Direction::Cohomology;
  int n_max = 0;
  std::vector<HHCell> cells;
  std::vector<std::string> caveats;

  int dim(int n, int r) const;
  int total(int n) const;
  bool certified(int n) const;
  std::vector<int> totals() const;
};

/// HH^k(M) for k in [-2, n_max], internal degrees up to r_cap when M is
/// infinite.
HHReport hh_cohomology(const HochschildSetup& setup, const ModPtr& M, int n_max, int r_cap = 12);
/// HH_n(M) = H^{-n}(M ⊗_S P) for n in [-2, n_max].
HHReport hh_homology(const HochschildSetup& setup, const ModPtr& M, int n_max, int q_cap = 12);

/// B_alg ⊗_S B with the check H^0 ≅ B per internal degree.
struct HochschildComplexRealization {
  std::shared_ptr<const TensorComplex> complex;
  std::vector<int> h0_dims;
  std::vector<int> b_dims;
  bool h0_matches = true;
};
HochschildComplexRealization hochschild_complex(const HochschildSetup& setup, int q_cap = 8);

/// Lift of a cocycle g: P → M_B (B-valued) to an endomorphism of P.
/// Generators below `min_generator_hom` are sent to zero.
SemifreeMorphism lift_endomorphism(const HochschildSetup& setup, const SemifreeMorphism& g, int min_generator_hom);

/// f·g = f ∘ g̃ for B-valued cocycles.
SemifreeMorphism yoneda_product(const HochschildSetup& setup, const SemifreeMorphism& f, const SemifreeMorphism& g);
/// f ⋆ c = (−1)^{|f||c|} c ∘ f̃ for f B-valued and c M-valued.
SemifreeMorphism module_action(const HochschildSetup& setup, const SemifreeMorphism& f, const SemifreeMorphism& c);
/// Action of f on HH_•(M): id ⊗ f̃ on M ⊗_S P at (n, q).
SparseMatrix homology_action(const HochschildSetup& setup, const SemifreeMorphism& f, const TensorComplex& MP, int n,
                             int q);

/// φ ↦ φ ∘ λ on class spaces at (k, r): from Ext(Q, M') to Ext(P, M) where
/// λ: P → Q restricted and M' and M share a basis.
SparseMatrix pullback_classes(const ExtSpace& from, const ExtSpace& to, const SemifreeMorphism& lambda, int k, int r);

struct ComparisonCell {
  int degree = 0;
  int internal = 0;
  int source_dim = 0;
  int target_dim = 0;
  int rank = 0;
  bool certified = true;
  bool iso() const { return rank == source_dim && rank == target_dim; }
};

struct ComparisonReport {
  bool available = true;
  std::string reason;
  std::vector<ComparisonCell> cells;
  bool all_iso_certified() const;
  bool some_certified_failure() const;
};

/// Ext_{B⊗_A B}(B, M) → HH^•(M) through a resolution of B over B⊗_A B.
ComparisonReport comparison_beta(const HochschildSetup& setup, const ModPtr& M, int n_max, int r_cap = 12);
/// Same map with the bar resolution of B over B⊗_K B; needs A = K and B finite.
ComparisonReport comparison_alpha(const HochschildSetup& setup, const ModPtr& M, int n_max, int bar_length = 0);

/// Tor_i^A(B, B) per internal degree, via a semifree resolution of B over A.
struct TorTable {
  int i_max = 0;
  std::map<std::pair<int, int>, int> dims;  // (i, q) → dim
  int total(int i) const;
};
TorTable transversality_check(const RingMorphism& f, int i_max, int q_cap = 12);

/// HH^n(B) and HH_n(B) of a finite-dimensional B over the field, straight
/// from the bar resolution; n ≤ n_max, all cells certified.
HHReport bar_oracle_cohomology(const DGAPtr& B, int n_max);
HHReport bar_oracle_homology(const DGAPtr& B, int n_max);

/// Map HH^•_{B/A'}(B) → HH^•_{B/A}(B) induced by A → A' → B.
struct RestrictionMap {
  std::shared_ptr<ExtSpace> relative;
  std::shared_ptr<ExtSpace> absolute;
  std::shared_ptr<const SemifreeMorphism> lambda;
  SparseMatrix at(int k, int r) const;
};
RestrictionMap restriction_map(const HochschildSetup& relative, const HochschildSetup& absolute);

/// Classes of HH^•(B) for the dimension table; the Yoneda product of two
/// basis classes expressed in the basis of the target bidegree.
SVec yoneda_coordinates(const HochschildSetup& setup, const ExtSpace& ext, int k1, int r1, const SVec& a, int k2,
                        int r2, const SVec& b);

}  // namespace dgcohom
