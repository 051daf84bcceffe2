#pragma once

#include <climits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dgcohom/complex.hpp"
#include "dgcohom/dg_algebra.hpp"

namespace dgcohom {

/// Left DG module over a DG algebra, graded by (homological n, internal q),
/// with finite-dimensional pieces given in a fixed basis.
///
/// Differentials and variable actions are computed lazily and cached.
class DGModule {
 public:
  explicit DGModule(DGAPtr algebra) : algebra_(std::move(algebra)) {}
  virtual ~DGModule() = default;
  DGModule(const DGModule&) = delete;
  DGModule& operator=(const DGModule&) = delete;

  const DGAPtr& algebra() const { return algebra_; }
  virtual int dim(int n, int q) const = 0;
  /// (n, q) → (n+1, q).
  const SparseMatrix& differential(int n, int q) const;
  /// Action of algebra variable v: (n, q) → (n + hom v, q + weight v).
  const SparseMatrix& act_var(std::size_t v, int n, int q) const;
  /// m·x for a monomial of the algebra and x in piece (n, q).
  SVec act_monomial(const Monomial& m, int n, int q, const SVec& x) const;
  SVec act(const Poly& a, int n, int q, const SVec& x) const;
  SparseMatrix act_matrix(const Poly& a, int n, int q) const;

  virtual int hom_max() const = 0;
  virtual int hom_min() const { return INT_MIN / 4; }
  virtual int internal_min() const = 0;
  /// Largest internal degree carrying anything; nullopt when unbounded.
  virtual std::optional<int> internal_max() const { return std::nullopt; }
  virtual std::string label(int n, int q, int j) const;

  BoundedComplex slice(int q, int n_lo, int n_hi) const;
  /// d∘d = 0 and d(x·m) = dx·m + (−1)^{|x|} x·dm on a window; throws IntegrityError.
  void check(int n_lo, int n_hi, int q_lo, int q_hi) const;

 protected:
  virtual SparseMatrix compute_differential(int n, int q) const = 0;
  virtual SparseMatrix compute_act_var(std::size_t v, int n, int q) const = 0;

 private:
  DGAPtr algebra_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, SparseMatrix> d_cache_;
  mutable std::map<std::tuple<std::size_t, int, int>, SparseMatrix> act_cache_;
};

using ModPtr = std::shared_ptr<const DGModule>;

/// Generator of a semifree module: d(e_i) = Σ coefficient · e_j over earlier j.
struct SemifreeGenerator {
  std::string name;
  int hom = 0;
  int weight = 0;
  std::vector<std::pair<int, Poly>> d;
};

/// ⊕ T·e_i with d(m e_i) = dm e_i + (−1)^{|m|} m d(e_i).
class SemifreeModule : public DGModule {
 public:
  SemifreeModule(DGAPtr algebra, std::vector<SemifreeGenerator> generators);

  const std::vector<SemifreeGenerator>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  int dim(int n, int q) const override;
  /// Offset of generator i's block inside piece (n, q), -1 when empty.
  int offset(int i, int n, int q) const;
  SVec embed(int i, const Poly& coefficient, int n, int q) const;
  /// Splits a vector of piece (n, q) into coefficients per generator.
  std::vector<std::pair<int, Poly>> decompose(const SVec& v, int n, int q) const;

  int hom_max() const override;
  int hom_min() const override;
  int internal_min() const override;
  std::optional<int> internal_max() const override;
  std::string label(int n, int q, int j) const override;
  /// Checks that d(e_i) only involves earlier generators and that d∘d = 0.
  void check_generators() const;

 protected:
  SparseMatrix compute_differential(int n, int q) const override;
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  struct Layout {
    std::vector<int> offsets;
    int dim = 0;
  };
  const Layout& layout(int n, int q) const;

  std::vector<SemifreeGenerator> gens_;
  mutable std::mutex layout_mu_;
  mutable std::map<std::pair<int, int>, Layout> layouts_;
};

using SemifreePtr = std::shared_ptr<const SemifreeModule>;

/// The algebra as a module over itself.
class AlgebraModule : public DGModule {
 public:
  explicit AlgebraModule(DGAPtr algebra) : DGModule(std::move(algebra)) {}
  int dim(int n, int q) const override { return algebra()->dim(n, q); }
  int hom_max() const override { return 0; }
  int hom_min() const override;
  int internal_min() const override { return 0; }
  std::optional<int> internal_max() const override;
  std::string label(int n, int q, int j) const override;

 protected:
  SparseMatrix compute_differential(int n, int q) const override { return algebra()->d_matrix(n, q); }
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;
};

/// Graded module over a commutative ring in homological degree `shift`,
/// presented as ⊕ B(−g_j) modulo relations. The basis of each internal degree
/// is the set of non-pivot coordinates of the relation span.
class QuotientModule : public DGModule {
 public:
  QuotientModule(DGAPtr ring, std::vector<int> generator_degrees, std::vector<std::vector<Poly>> relations,
                 int shift = 0);

  int dim(int n, int q) const override;
  int hom_max() const override { return shift_; }
  int hom_min() const override { return shift_; }
  int internal_min() const override;
  std::optional<int> internal_max() const override;
  std::string label(int n, int q, int j) const override;
  const std::vector<int>& generator_degrees() const { return gdeg_; }
  /// Coordinates of Σ coefficient_j e_j in internal degree q.
  SVec element(const std::vector<Poly>& coefficients, int q) const;

 protected:
  SparseMatrix compute_differential(int n, int q) const override;
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  struct Piece {
    int free_dim = 0;
    std::vector<int> offsets;
    Echelon relations;
    std::vector<int> basis;  // free coordinates kept
    std::map<int, int> index;
  };
  const Piece& piece(int q) const;
  SVec reduce_free(const SVec& v, int q) const;

  std::vector<int> gdeg_;
  std::vector<std::vector<Poly>> rels_;
  std::vector<int> rdeg_;
  int shift_;
  mutable std::mutex piece_mu_;
  mutable std::map<int, std::unique_ptr<Piece>> pieces_;
};

/// Complex of free modules over a commutative ring, as a DG module.
class FreeComplexModule : public DGModule {
 public:
  FreeComplexModule(DGAPtr ring, FreeComplex complex);

  const FreeComplex& complex() const { return fc_; }
  int dim(int n, int q) const override;
  int offset(int n, int g, int q) const;
  int hom_max() const override { return fc_.n_max(); }
  int hom_min() const override { return fc_.n_min(); }
  int internal_min() const override;
  std::optional<int> internal_max() const override;

 protected:
  SparseMatrix compute_differential(int n, int q) const override;
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  FreeComplex fc_;
};

/// M viewed over T through a DG algebra map T → U (M a U-module).
class RestrictedModule : public DGModule {
 public:
  RestrictedModule(ModPtr module, DGAlgebraMap along);

  const ModPtr& base() const { return base_; }
  int dim(int n, int q) const override { return base_->dim(n, q); }
  int hom_max() const override { return base_->hom_max(); }
  int hom_min() const override { return base_->hom_min(); }
  int internal_min() const override { return base_->internal_min(); }
  std::optional<int> internal_max() const override { return base_->internal_max(); }
  std::string label(int n, int q, int j) const override { return base_->label(n, q, j); }

 protected:
  SparseMatrix compute_differential(int n, int q) const override { return base_->differential(n, q); }
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  ModPtr base_;
  DGAlgebraMap along_;
};

/// Module given by explicit matrices on a finite window of bidegrees.
class ExplicitModule : public DGModule {
 public:
  ExplicitModule(DGAPtr algebra, int n_lo, int n_hi, int q_lo, int q_hi);

  void set_dim(int n, int q, int d);
  void set_differential(int n, int q, SparseMatrix m);
  void set_action(std::size_t v, int n, int q, SparseMatrix m);
  int dim(int n, int q) const override;
  int hom_max() const override { return n_hi_; }
  int hom_min() const override { return n_lo_; }
  int internal_min() const override { return q_lo_; }
  std::optional<int> internal_max() const override { return q_hi_; }

 protected:
  SparseMatrix compute_differential(int n, int q) const override;
  SparseMatrix compute_act_var(std::size_t v, int n, int q) const override;

 private:
  int n_lo_, n_hi_, q_lo_, q_hi_;
  std::map<std::pair<int, int>, int> dims_;
  std::map<std::pair<int, int>, SparseMatrix> d_;
  std::map<std::tuple<std::size_t, int, int>, SparseMatrix> act_;
};

/// Graded module map of bidegree (k, r).
class ModuleMap {
 public:
  virtual ~ModuleMap() = default;
  virtual const DGModule& source() const = 0;
  virtual const DGModule& target() const = 0;
  virtual int hom_shift() const = 0;
  virtual int internal_shift() const = 0;
  /// source(n, q) → target(n + k, q + r).
  virtual SparseMatrix matrix(int n, int q) const = 0;
};

/// T-linear map out of a semifree module, f(m e_i) = (−1)^{k|m|} m f(e_i).
class SemifreeMorphism : public ModuleMap {
 public:
  SemifreeMorphism(SemifreePtr source, ModPtr target, int k, int r, std::vector<SVec> values);
  SemifreeMorphism(const SemifreeMorphism& o)
      : source_(o.source_), target_(o.target_), k_(o.k_), r_(o.r_), values_(o.values_) {}
  SemifreeMorphism(SemifreeMorphism&& o) noexcept
      : source_(std::move(o.source_)), target_(std::move(o.target_)), k_(o.k_), r_(o.r_),
        values_(std::move(o.values_)) {}
  SemifreeMorphism& operator=(const SemifreeMorphism&) = delete;

  const DGModule& source() const override { return *source_; }
  const DGModule& target() const override { return *target_; }
  const SemifreePtr& semifree_source() const { return source_; }
  const ModPtr& target_ptr() const { return target_; }
  int hom_shift() const override { return k_; }
  int internal_shift() const override { return r_; }
  const std::vector<SVec>& values() const { return values_; }
  SparseMatrix matrix(int n, int q) const override;
  SVec apply(const SVec& x, int n, int q) const;

  /// this ∘ g for g: P' → source().
  SemifreeMorphism after(const SemifreeMorphism& g) const;
  /// d f − (−1)^k f d on generators.
  std::vector<SVec> coboundary() const;
  bool is_cocycle() const;

 private:
  SemifreePtr source_;
  ModPtr target_;
  int k_, r_;
  std::vector<SVec> values_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, SparseMatrix> cache_;
};

/// Module map given by a function of the bidegree.
class FunctionMap : public ModuleMap {
 public:
  using Fn = std::function<SparseMatrix(int, int)>;
  FunctionMap(ModPtr source, ModPtr target, int k, int r, Fn fn)
      : source_(std::move(source)), target_(std::move(target)), k_(k), r_(r), fn_(std::move(fn)) {}
  const DGModule& source() const override { return *source_; }
  const DGModule& target() const override { return *target_; }
  int hom_shift() const override { return k_; }
  int internal_shift() const override { return r_; }
  SparseMatrix matrix(int n, int q) const override { return fn_(n, q); }

 private:
  ModPtr source_, target_;
  int k_, r_;
  Fn fn_;
};

/// Differential of the cone of a degree-0 map f: P → M,
/// cone^n = P^{n+1} ⊕ M^n, d(p, m) = (−dp, f p + dm).
SparseMatrix cone_differential(const ModuleMap& f, int n, int q);
int cone_dim(const ModuleMap& f, int n, int q);

struct ModuleResolution {
  SemifreePtr module;
  std::shared_ptr<const SemifreeMorphism> augmentation;
  Bounds bounds;
};

/// Semifree resolution P → M: generators are adjoined from the top degree of
/// M down to −hom_bound and internal degrees up to internal_bound, killing the
/// cohomology of the cone and keeping P → M surjective.
ModuleResolution semifree_resolve(const ModPtr& module, const Bounds& bounds, const std::string& prefix = "g");

/// Chain map φ̃: P → Q of the bidegree of φ with π_Q ∘ φ̃ = φ, for a
/// surjective quasiisomorphism π_Q: Q → N and a cocycle φ: P → N.
/// Generators below `min_generator_hom` are sent to zero.
/// Throws BoundInsufficient when the window of Q is too small.
SemifreeMorphism lift_through(const SemifreeMorphism& phi, const ModPtr& Q, const ModuleMap& pi_Q,
                              int min_generator_hom = INT_MIN / 4);

/// Hom_T(P, M): degree (k, r) maps are blocks M^{n_i+k}_{q_i+r} per generator,
/// δf = d f − (−1)^k f d.
class HomComplex {
 public:
  HomComplex(SemifreePtr P, ModPtr M);

  const SemifreePtr& source() const { return P_; }
  const ModPtr& target() const { return M_; }
  int dim(int k, int r) const;
  int offset(int i, int k, int r) const;
  SparseMatrix differential(int k, int r) const;
  BoundedComplex slice(int r, int k_lo, int k_hi) const;
  SemifreeMorphism morphism(const SVec& v, int k, int r) const;
  SVec element(const SemifreeMorphism& f) const;
  /// Range of r where some block can be nonzero for k in [k_lo, k_hi];
  /// the upper end is capped by r_cap when M is unbounded.
  std::pair<int, int> internal_range(int k_lo, int k_hi, int r_cap) const;

 private:
  SemifreePtr P_;
  ModPtr M_;
};

/// M ⊗_T P: pieces ⊕_i M^{n−n_i}_{q−q_i},
/// d(m⊗e_i) = dm⊗e_i + (−1)^{|m|} Σ_j (−1)^{|m||t_ij|} (t_ij m)⊗e_j.
class TensorComplex {
 public:
  TensorComplex(ModPtr M, SemifreePtr P);

  const ModPtr& left() const { return M_; }
  const SemifreePtr& right() const { return P_; }
  int dim(int n, int q) const;
  int offset(int i, int n, int q) const;
  SparseMatrix differential(int n, int q) const;
  BoundedComplex slice(int q, int n_lo, int n_hi) const;
  /// id ⊗ f for a T-linear f: P → P' of bidegree (k, r), landing in M ⊗ P'.
  SparseMatrix map_right(const SemifreeMorphism& f, const TensorComplex& target, int n, int q) const;
  std::pair<int, int> internal_range(int n_lo, int n_hi, int q_cap) const;

 private:
  ModPtr M_;
  SemifreePtr P_;
};

/// Unnormalized bar resolution of a finite-dimensional commutative algebra B
/// over the field, as a semifree module over E = B ⊗ B, with max_length
/// bounding the word length. `env` is E with its two inclusions and product.
struct BarResolution {
  DGAPtr B;
  EnvelopingAlgebra env;
  SemifreePtr module;
  std::shared_ptr<const SemifreeMorphism> augmentation;
  /// Basis of B used for the letters, in internal-degree order.
  std::vector<std::pair<int, Monomial>> letters;
  std::vector<std::vector<int>> words;
};

BarResolution bar_complex(const DGAPtr& B, int max_length);

}  // namespace dgcohom
