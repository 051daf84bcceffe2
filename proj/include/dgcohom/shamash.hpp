#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dgcohom/hochschild.hpp"

namespace dgcohom {

/// A complex of free modules over a degree-0 algebra as a semifree module.
/// Generators are ordered by homological degree, highest first.
SemifreePtr free_complex_module(const DGAPtr& ring, const FreeComplex& complex);

/// Removes unit entries of the differential by Gaussian elimination.
FreeComplex minimize(const FreeComplex& complex);

/// M = coker(φ: F1 → F0) over a graded ring Λ with f·F0 ⊆ im φ.
struct HypersurfaceModule {
  QRingPtr ambient;  // Λ
  Poly f;
  std::vector<int> f0_degrees;
  std::vector<int> f1_degrees;
  /// phi[j][i]: coefficient of F0 generator i in φ(F1 generator j).
  std::vector<std::vector<Poly>> phi;
};

struct PeriodicResolution {
  QRingPtr ring;  // Λ/(f)
  DGAPtr algebra;
  /// psi[j][i]: coefficient of F1 generator i in ψ(F0 generator j), φψ = ψφ = f.
  std::vector<std::vector<Poly>> psi;
  FreeComplex full;     // degrees −length..0
  FreeComplex minimal;  // after cancelling unit entries
  int length = 0;
  int f_degree = 0;
  /// Presentation of M over Λ/(f) with the augmentation from degree 0.
  ModPtr module;
  bool exact = false;
  std::vector<std::string> failures;

  /// Betti numbers of the minimal complex, degree 0 first.
  std::vector<int> betti() const;
};

/// Eisenbud–Shamash resolution of M over Λ/(f), 2-periodic with
/// differentials alternating between φ and ψ. Exactness is checked by rank in
/// every internal degree the window reaches.
PeriodicResolution eisenbud_shamash(const HypersurfaceModule& M, int length);

/// The periodicity operator of the full resolution: identity from degree −m to
/// −m+2, internal shift −deg f.
SemifreeMorphism periodicity_operator(const PeriodicResolution& E, const SemifreePtr& module);

/// Augmentation from a resolution (as semifree module) onto M.
SemifreeMorphism resolution_augmentation(const PeriodicResolution& E, const SemifreePtr& module);

/// M ⊗_{R⊗1} B_bar for a module over B, with B_bar the one-sided reduction
/// B_alg ⊗_{1⊗R} B. Needs A = K and B finite.
class TransportModule : public DGModule {
 public:
  TransportModule(const HochschildSetup& setup, ModPtr M);

  const ModPtr& base() const { return M_; }
  int dim(int n, int q) const override;
  int hom_max() const override { return M_->hom_max(); }
  int hom_min() const override;
  int internal_min() const override { return M_->internal_min(); }
  std::optional<int> internal_max() const override;
  std::string label(int n, int q, int j) const override;

  /// Lowest degree whose piece contains every word it should.
  int complete_from() const;
  /// m ↦ m ⊗ 1 ⊗ 1.
  SparseMatrix unit(int n, int q) const;
  /// m ⊗ w ⊗ b ↦ [w = 1] b·m.
  SparseMatrix counit(int n, int q) const;
  /// id_M ⊗ (g̃ ⊗ B) for an S-linear endomorphism g̃ of P.
  SparseMatrix apply_endomorphism(const SemifreeMorphism& g, int n, int q) const;

 protected:
  SparseMatrix compute_differential(int n, int q) const override;
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  struct Block {
    int a, qm, word, qb, offset, dm, db;
  };
  struct Layout {
    std::vector<Block> blocks;
    int dim = 0;
  };
  const Layout& layout(int n, int q) const;
  int block_offset(int n, int q, int a, int qm, int word, int qb) const;
  /// ε on a monomial of S split into its two tensor factors.
  std::pair<Poly, Poly> split_counit(const Monomial& m) const;
  /// Σ c·(m ⊗ w' ⊗ b) for coefficient list of P generators.
  void push_terms(const std::vector<std::pair<int, Poly>>& terms, const Scalar& sign, const Block& src, int im, int ib,
                  int tn, int tq, std::vector<std::pair<int, Scalar>>& out) const;

  const HochschildSetup* setup_;
  ModPtr M_;
  DGAPtr B_;
  int top_;
  std::vector<int> copy_;        // per S variable: 1, 2, or 0 when shared
  std::vector<Poly> counit_;     // per S variable: ε in B
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, Layout> layouts_;
};

struct Transport {
  std::shared_ptr<const TransportModule> module;
  std::shared_ptr<const FunctionMap> counit;
  /// B-linear section of the counit (present when M is semifree).
  std::shared_ptr<const SemifreeMorphism> section;
  bool counit_unit_identity = false;
  bool cone_acyclic = false;
  std::vector<int> checked_degrees;
};

Transport transport(const HochschildSetup& setup, const ModPtr& M);

/// χ(g)_M = counit ∘ (id ⊗ ḡ) ∘ section for a cocycle g: P → B over S.
SemifreeMorphism chi_evaluate(const HochschildSetup& setup, const Transport& T, const SemifreeMorphism& g);

}  // namespace dgcohom
