#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgcohom/scalar.hpp"

namespace dgcohom {

/// Sparse vector: entries sorted by index, no stored zeros.
using SVec = std::vector<std::pair<int, Scalar>>;

SVec add_scaled(const SVec& a, const SVec& b, const Scalar& c);  // a + c*b
SVec scaled(const SVec& a, const Scalar& c);
Scalar coefficient(const SVec& v, int index);
/// Builds a sparse vector from unsorted (index, value) pairs, summing duplicates.
SVec make_svec(std::vector<std::pair<int, Scalar>> entries);
SVec unit_vector(int index, const Scalar& one = 1);
/// Shifts all indices by `offset` (used to embed into direct sums).
SVec shifted(const SVec& v, int offset);

/// Column-major sparse matrix; column j is the image of the j-th basis vector.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), columns_(static_cast<std::size_t>(cols)) {}

  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(const std::vector<std::vector<Scalar>>& rows);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(columns_.size()); }
  const SVec& column(int j) const { return columns_[static_cast<std::size_t>(j)]; }
  SVec& column(int j) { return columns_[static_cast<std::size_t>(j)]; }
  void set_column(int j, SVec v) { columns_[static_cast<std::size_t>(j)] = std::move(v); }
  Scalar at(int i, int j) const { return coefficient(column(j), i); }

  SVec apply(const SVec& v) const;
  bool is_zero() const;
  SparseMatrix transpose() const;
  std::vector<std::vector<Scalar>> to_dense() const;

  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Scalar& c) const;
  bool operator==(const SparseMatrix& o) const;

 private:
  int rows_ = 0;
  std::vector<SVec> columns_;
};

/// Stacks blocks into one matrix: result = [[A, B], [C, D]] style assembly.
SparseMatrix block_matrix(const std::vector<std::vector<const SparseMatrix*>>& blocks,
                          std::span<const int> row_sizes, std::span<const int> col_sizes);

/// Incremental echelon basis of a subspace.
///
/// Each stored vector has its pivot at its smallest index with coefficient 1.
/// Reduction scans indices in ascending order, so the remainder of a vector
/// is canonical: it has no entry at any pivot index.
class Echelon {
 public:
  explicit Echelon(bool track = false) : track_(track) {}

  /// Inserts v, returning true if it enlarged the span. With tracking the
  /// input is numbered by insertion order.
  bool insert(const SVec& v);
  SVec reduce(const SVec& v) const;
  /// Canonical remainder plus the combination of inserted inputs subtracted.
  std::pair<SVec, SVec> reduce_tracked(const SVec& v) const;
  bool contains(const SVec& v) const { return reduce(v).empty(); }

  int rank() const { return static_cast<int>(vecs_.size()); }
  int inputs() const { return inputs_; }
  const std::vector<SVec>& basis() const { return vecs_; }
  std::vector<int> pivots() const;
  bool is_pivot(int i) const { return pivot_.count(i) > 0; }

 private:
  bool track_;
  int inputs_ = 0;
  std::vector<SVec> vecs_;
  std::vector<SVec> combos_;  // vecs_[k] = sum combos_[k][j] * input_j
  std::map<int, int> pivot_;  // pivot index -> position in vecs_
};

int rank(const SparseMatrix& m);
/// Kernel basis, deterministic (column elimination, leftmost first).
std::vector<SVec> kernel(const SparseMatrix& m);
/// Basis of the column space in echelon form.
std::vector<SVec> image_basis(const SparseMatrix& m);
/// Some x with m x = b, or nullopt.
std::optional<SVec> solve(const SparseMatrix& m, const SVec& b);

/// Fraction-free (Bareiss) rank of a dense matrix; used as an independent
/// cross-check of the sparse route.
int rank_bareiss(std::vector<std::vector<Scalar>> rows);

/// Subquotient Z/B of a vector space for B ⊆ Z, with canonical coordinates.
class Subquotient {
 public:
  Subquotient() = default;
  /// `cycles` spans Z, `boundaries` spans B. Throws IntegrityError if B ⊄ Z.
  Subquotient(int ambient_dim, const std::vector<SVec>& cycles, const std::vector<SVec>& boundaries);

  int dim() const { return static_cast<int>(reps_.size()); }
  int ambient_dim() const { return ambient_; }
  const std::vector<SVec>& representatives() const { return reps_; }
  bool in_cycles(const SVec& z) const { return cycles_.contains(z); }
  bool in_boundaries(const SVec& z) const { return bounds_.contains(z); }
  /// Coordinates of the class of a cycle in the representative basis.
  /// Throws IntegrityError if z is not a cycle.
  SVec coordinates(const SVec& z) const;
  SVec lift(const SVec& coords) const;

 private:
  int ambient_ = 0;
  Echelon cycles_;
  Echelon bounds_;
  Echelon full_;           // boundaries then representatives
  std::map<int, int> rep_of_pivot_;
  std::vector<SVec> reps_;
};

std::string to_string(const SVec& v);

}  // namespace dgcohom
