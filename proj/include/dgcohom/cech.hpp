#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgcohom/complex.hpp"
#include "dgcohom/hochschild.hpp"

namespace dgcohom {

/// Simplicial complex on vertices 0..n-1, closed under nonempty subsets.
/// Simplices are sorted vertex lists, ordered by size then lexicographically.
class Nerve {
 public:
  Nerve() = default;
  Nerve(int vertices, const std::vector<std::vector<int>>& faces);
  static Nerve full(int vertices);
  static Nerve discrete(int vertices);

  int vertices() const { return n_; }
  int size() const { return static_cast<int>(simplices_.size()); }
  const std::vector<int>& simplex(int i) const { return simplices_[static_cast<std::size_t>(i)]; }
  /// Simplices with p + 1 vertices.
  const std::vector<int>& of_dim(int p) const;
  int max_dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  /// -1 when absent.
  int index(const std::vector<int>& s) const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> simplices_;
  std::vector<std::vector<int>> by_dim_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> none_;
};

/// A bounded complex per simplex with transition maps along codimension-one
/// inclusions; longer inclusions compose vertex by vertex.
class SimplicialModule {
 public:
  SimplicialModule(Nerve nerve, int n_lo, int n_hi);

  const Nerve& nerve() const { return nerve_; }
  int n_lo() const { return n_lo_; }
  int n_hi() const { return n_hi_; }
  void set_complex(int simplex, BoundedComplex C);
  const BoundedComplex& at(int simplex) const { return complexes_[static_cast<std::size_t>(simplex)]; }
  int dim(int simplex, int n) const { return at(simplex).dim(n); }
  /// Map M_from → M_to in degree n, |to| = |from| + 1.
  void set_face_map(int from, int to, int n, SparseMatrix m);
  /// Composite M_from → M_to for from ⊆ to, adding vertices in increasing order.
  SparseMatrix transition(int from, int to, int n) const;

  /// Each face map is a chain map and all routes between two simplices agree.
  bool functorial() const;

 private:
  Nerve nerve_;
  int n_lo_, n_hi_;
  std::vector<BoundedComplex> complexes_;
  std::map<std::tuple<int, int, int>, SparseMatrix> face_;
};

/// Total complex of ordered Čech chains, C^t = ⊕_{p} ⊕_{|α| = p+1} M_α^{t−p},
/// D = δ + (−1)^p d with (δs)_β = Σ_i (−1)^i s_{β∖β_i}.
BoundedComplex cech_complex(const SimplicialModule& M);
/// Offset of the block of simplex α inside total degree t.
int cech_offset(const SimplicialModule& M, int t, int simplex);

/// Maps M_α → N_α per simplex and degree.
struct SimplicialMap {
  std::map<std::pair<int, int>, SparseMatrix> blocks;  // (simplex, n)
};
SparseMatrix cech_map(const SimplicialModule& M, const SimplicialModule& N, const SimplicialMap& f, int t);
/// True when 0 → C(M') → C(M) → C(M'') → 0 is exact in every total degree.
bool cech_short_exact(const SimplicialModule& A, const SimplicialModule& B, const SimplicialModule& C,
                      const SimplicialMap& f, const SimplicialMap& g);

struct AdjunctionReport {
  bool unit_quasiiso = true;         // global M → C(j*M)
  bool transitions_quasiiso = true;  // every face map
  bool restricted_quasiiso = true;   // C(M_*) restricted to each simplex → M_α
  std::vector<int> failing_simplices;
};

/// `global` with restrictions to each vertex (per degree) checks the unit map;
/// the restricted check compares, for each simplex γ, the Čech complex of
/// β ↦ M_β over the star of γ with that of β ↦ M_{β∪γ}.
AdjunctionReport adjunction_check(const SimplicialModule& M, const BoundedComplex* global = nullptr,
                                  const std::vector<std::vector<SparseMatrix>>* restrictions = nullptr);

/// Element of the Čech complex of a tensor product of simplicial modules,
/// in factor coordinates: (simplex, [(degree, index) per factor]) → scalar.
/// The Čech degree of a term is its simplex dimension.
using CochainKey = std::pair<int, std::vector<std::pair<int, int>>>;
struct TensorCochain {
  std::map<CochainKey, Scalar> terms;
  void add(const CochainKey& key, const Scalar& c);
};

/// Front face / back face product, (s ∪ t)_γ = (−1)^{a q} s_{front} ⊗ t_{back},
/// with a the complex degree of the s term and q the Čech degree of the t term.
TensorCochain alexander_whitney(const std::vector<const SimplicialModule*>& left, const TensorCochain& s,
                                const std::vector<const SimplicialModule*>& right, const TensorCochain& t);
/// D = δ + (−1)^p d on a tensor cochain, with Koszul signs across factors.
TensorCochain cech_differential(const std::vector<const SimplicialModule*>& factors, const TensorCochain& s);
TensorCochain cochain_from_vector(const SimplicialModule& M, int t, const SVec& v);
SVec cochain_to_vector(const SimplicialModule& M, int t, const TensorCochain& s);
/// The unit: 1 on every vertex of the empty tensor product.
TensorCochain unit_cochain(const Nerve& nerve, const FieldSpec& field = FieldSpec());
bool operator==(const TensorCochain& a, const TensorCochain& b);

/// Charts of a toric space cut out by sign patterns on a Laurent lattice:
/// +1 keeps exponents ≥ 0, −1 keeps exponents ≤ 0, 0 inverts the coordinate.
struct ToricChart {
  std::string name;
  std::vector<int> signs;
};

class ChartedSpace {
 public:
  ChartedSpace(int rank, std::vector<ToricChart> charts, std::optional<Nerve> nerve = std::nullopt);
  static ChartedSpace projective_line();
  static ChartedSpace projective_line_squared();

  int rank() const { return rank_; }
  const std::vector<ToricChart>& charts() const { return charts_; }
  const Nerve& nerve() const { return nerve_; }
  /// Sign pattern of the overlap (Minkowski sum of chart cones).
  std::vector<int> cone(int simplex) const;
  /// Polynomial coordinate ring of a chart; needs a sign pattern without zeros.
  QRingPtr chart_ring(int chart, const FieldSpec& field) const;

  /// Line bundle with frame exponent s_i on chart i: sections over α are
  /// Laurent monomials m with m − s_{α_0} in the cone of α, |m_j| ≤ window.
  SimplicialModule line_bundle(const std::vector<std::vector<int>>& frames, int window) const;
  /// Frames of O(n) on the projective line.
  static std::vector<std::vector<int>> twist(int n);
  /// Frames agree up to units on every overlap.
  bool frames_compatible(const std::vector<std::vector<int>>& frames) const;
  /// Transition maps compose on triple overlaps.
  bool cocycle_condition(const SimplicialModule& L) const;

 private:
  int rank_;
  std::vector<ToricChart> charts_;
  Nerve nerve_;
};

struct SheafCohomology {
  std::vector<int> h;
  bool stable = true;
  int window = 0;
};
/// Čech cohomology at window D and D + 2, flagged stable when they agree.
SheafCohomology line_bundle_cohomology(const ChartedSpace& X, const std::vector<std::vector<int>>& frames, int window);

/// Disjoint charts: the Čech complex of chartwise Hochschild complexes over a
/// discrete nerve, i.e. the sum of the affine reports.
HHReport glued_hochschild(const std::vector<RingMorphism>& charts, int n_max, int r_cap = 12);

struct GluedReport {
  HHReport report;
  /// table[q][p] = h^p of the degree-q polyvector sheaf.
  std::vector<std::vector<int>> table;
  bool charts_verified = true;
  bool transitions_quasiiso = true;
  bool stable = true;
};
/// Smooth toric space over K: chartwise HH^q is free on the polyvector frame,
/// glued along the Jacobian of the chart coordinates.
GluedReport glued_hochschild(const ChartedSpace& X, int n_max, int window, const FieldSpec& field = FieldSpec());

}  // namespace dgcohom
