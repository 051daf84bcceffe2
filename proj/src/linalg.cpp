#include "dgcohom/linalg.hpp"

#include <algorithm>
#include <sstream>

#include "dgcohom/errors.hpp"

namespace dgcohom {

SVec add_scaled(const SVec& a, const SVec& b, const Scalar& c) {
  if (c.is_zero() || b.empty()) return a;
  SVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, b[j].second * c);
      ++j;
    } else {
      Scalar s = a[i].second + b[j].second * c;
      if (!s.is_zero()) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

SVec scaled(const SVec& a, const Scalar& c) {
  if (c.is_zero()) return {};
  SVec out = a;
  for (auto& e : out) e.second *= c;
  return out;
}

Scalar coefficient(const SVec& v, int index) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const auto& e, int i) { return e.first < i; });
  if (it != v.end() && it->first == index) return it->second;
  return 0;
}

SVec make_svec(std::vector<std::pair<int, Scalar>> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SVec out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
      if (out.back().second.is_zero()) out.pop_back();
    } else if (!e.second.is_zero()) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

SVec unit_vector(int index, const Scalar& one) { return SVec{{index, one}}; }

SVec shifted(const SVec& v, int offset) {
  SVec out = v;
  for (auto& e : out) e.first += offset;
  return out;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  for (int j = 0; j < n; ++j) m.set_column(j, unit_vector(j));
  return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Scalar>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  SparseMatrix m(r, c);
  for (int j = 0; j < c; ++j) {
    SVec col;
    for (int i = 0; i < r; ++i)
      if (!rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_zero())
        col.emplace_back(i, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    m.set_column(j, std::move(col));
  }
  return m;
}

SVec SparseMatrix::apply(const SVec& v) const {
  std::vector<std::pair<int, Scalar>> acc;
  for (const auto& [j, c] : v) {
    if (j < 0 || j >= cols()) throw StructuralError("vector index out of range in SparseMatrix::apply");
    for (const auto& [i, a] : column(j)) acc.emplace_back(i, a * c);
  }
  return make_svec(std::move(acc));
}

bool SparseMatrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const SVec& c) { return c.empty(); });
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols(), rows());
  std::vector<std::vector<std::pair<int, Scalar>>> acc(static_cast<std::size_t>(rows()));
  for (int j = 0; j < cols(); ++j)
    for (const auto& [i, a] : column(j)) acc[static_cast<std::size_t>(i)].emplace_back(j, a);
  for (int i = 0; i < rows(); ++i) t.set_column(i, make_svec(std::move(acc[static_cast<std::size_t>(i)])));
  return t;
}

std::vector<std::vector<Scalar>> SparseMatrix::to_dense() const {
  std::vector<std::vector<Scalar>> d(static_cast<std::size_t>(rows()),
                                     std::vector<Scalar>(static_cast<std::size_t>(cols())));
  for (int j = 0; j < cols(); ++j)
    for (const auto& [i, a] : column(j)) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a;
  return d;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols() != o.rows()) throw StructuralError("matrix shape mismatch in product");
  SparseMatrix m(rows(), o.cols());
  for (int j = 0; j < o.cols(); ++j) m.set_column(j, apply(o.column(j)));
  return m;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) throw StructuralError("matrix shape mismatch in sum");
  SparseMatrix m(rows(), cols());
  for (int j = 0; j < cols(); ++j) m.set_column(j, add_scaled(column(j), o.column(j), 1));
  return m;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) throw StructuralError("matrix shape mismatch in difference");
  SparseMatrix m(rows(), cols());
  for (int j = 0; j < cols(); ++j) m.set_column(j, add_scaled(column(j), o.column(j), -1));
  return m;
}

SparseMatrix SparseMatrix::scaled(const Scalar& c) const {
  SparseMatrix m(rows(), cols());
  for (int j = 0; j < cols(); ++j) m.set_column(j, dgcohom::scaled(column(j), c));
  return m;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return rows_ == o.rows_ && columns_ == o.columns_;
}

SparseMatrix block_matrix(const std::vector<std::vector<const SparseMatrix*>>& blocks,
                          std::span<const int> row_sizes, std::span<const int> col_sizes) {
  int total_rows = 0, total_cols = 0;
  for (int r : row_sizes) total_rows += r;
  for (int c : col_sizes) total_cols += c;
  SparseMatrix m(total_rows, total_cols);
  int col_off = 0;
  for (std::size_t bj = 0; bj < col_sizes.size(); ++bj) {
    for (int j = 0; j < col_sizes[bj]; ++j) {
      std::vector<std::pair<int, Scalar>> acc;
      int row_off = 0;
      for (std::size_t bi = 0; bi < row_sizes.size(); ++bi) {
        const SparseMatrix* b = blocks[bi][bj];
        if (b != nullptr) {
          if (b->rows() != row_sizes[bi] || b->cols() != col_sizes[bj])
            throw StructuralError("block shape mismatch");
          for (const auto& [i, a] : b->column(j)) acc.emplace_back(i + row_off, a);
        }
        row_off += row_sizes[bi];
      }
      m.set_column(col_off + j, make_svec(std::move(acc)));
    }
    col_off += col_sizes[bj];
  }
  return m;
}

std::pair<SVec, SVec> Echelon::reduce_tracked(const SVec& v) const {
  SVec r = v;
  SVec c;
  std::size_t pos = 0;
  while (pos < r.size()) {
    auto it = pivot_.find(r[pos].first);
    if (it == pivot_.end()) {
      ++pos;
      continue;
    }
    Scalar a = r[pos].second;
    const auto k = static_cast<std::size_t>(it->second);
    r = add_scaled(r, vecs_[k], -a);
    if (track_) c = add_scaled(c, combos_[k], a);
  }
  return {std::move(r), std::move(c)};
}

SVec Echelon::reduce(const SVec& v) const {
  SVec r = v;
  std::size_t pos = 0;
  while (pos < r.size()) {
    auto it = pivot_.find(r[pos].first);
    if (it == pivot_.end()) {
      ++pos;
      continue;
    }
    Scalar a = r[pos].second;
    r = add_scaled(r, vecs_[static_cast<std::size_t>(it->second)], -a);
  }
  return r;
}

bool Echelon::insert(const SVec& v) {
  const int id = inputs_++;
  auto [r, c] = track_ ? reduce_tracked(v) : std::pair<SVec, SVec>{reduce(v), SVec{}};
  if (r.empty()) return false;
  Scalar inv = r.front().second.inverse();
  int pivot = r.front().first;
  pivot_[pivot] = static_cast<int>(vecs_.size());
  vecs_.push_back(dgcohom::scaled(r, inv));
  if (track_) {
    SVec combo = add_scaled(unit_vector(id), c, -1);
    combos_.push_back(dgcohom::scaled(combo, inv));
  }
  return true;
}

std::vector<int> Echelon::pivots() const {
  std::vector<int> out;
  for (const auto& v : vecs_) out.push_back(v.front().first);
  return out;
}

int rank(const SparseMatrix& m) {
  Echelon e;
  for (int j = 0; j < m.cols(); ++j) e.insert(m.column(j));
  return e.rank();
}

std::vector<SVec> kernel(const SparseMatrix& m) {
  Echelon e(true);
  std::vector<SVec> out;
  for (int j = 0; j < m.cols(); ++j) {
    auto [r, c] = e.reduce_tracked(m.column(j));
    if (r.empty()) {
      // column j = sum c_k column_k, so e_j - c lies in the kernel
      out.push_back(add_scaled(unit_vector(j), c, -1));
      e.insert(m.column(j));  // keeps input numbering aligned with columns
    } else {
      e.insert(m.column(j));
    }
  }
  return out;
}

std::vector<SVec> image_basis(const SparseMatrix& m) {
  Echelon e;
  for (int j = 0; j < m.cols(); ++j) e.insert(m.column(j));
  return e.basis();
}

std::optional<SVec> solve(const SparseMatrix& m, const SVec& b) {
  Echelon e(true);
  for (int j = 0; j < m.cols(); ++j) e.insert(m.column(j));
  auto [r, c] = e.reduce_tracked(b);
  if (!r.empty()) return std::nullopt;
  return c;
}

int rank_bareiss(std::vector<std::vector<Scalar>> rows) {
  const std::size_t n = rows.size();
  if (n == 0) return 0;
  const std::size_t m = rows[0].size();
  bool rational = true;
  for (const auto& row : rows)
    for (const auto& a : row)
      if (a.modulus() != 0) rational = false;
  if (!rational) {
    // plain Gaussian elimination over F_p
    int rk = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
      std::size_t piv = r;
      while (piv < n && rows[piv][c].is_zero()) ++piv;
      if (piv == n) continue;
      std::swap(rows[piv], rows[r]);
      Scalar inv = rows[r][c].inverse();
      for (std::size_t i = r + 1; i < n; ++i) {
        if (rows[i][c].is_zero()) continue;
        Scalar f = rows[i][c] * inv;
        for (std::size_t k = c; k < m; ++k) rows[i][k] -= f * rows[r][k];
      }
      ++r;
      ++rk;
    }
    return rk;
  }
  // clear denominators row by row, then run Bareiss on integers
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(m));
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (const auto& x : rows[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.value().get_den_mpz_t());
    for (std::size_t j = 0; j < m; ++j) {
      mpq_class s = rows[i][j].value() * l;
      a[i][j] = s.get_num();
    }
  }
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t k = c + 1; k < m; ++k) {
        mpz_class t = a[r][c] * a[i][k] - a[i][c] * a[r][k];
        mpz_divexact(a[i][k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

Subquotient::Subquotient(int ambient_dim, const std::vector<SVec>& cycles,
                         const std::vector<SVec>& boundaries)
    : ambient_(ambient_dim), full_(true) {
  for (const auto& z : cycles) cycles_.insert(z);
  for (const auto& b : boundaries) {
    if (!cycles_.contains(b)) throw IntegrityError("boundary is not a cycle");
    bounds_.insert(b);
  }
  for (const auto& b : bounds_.basis()) full_.insert(b);
  const int nb = full_.inputs();
  for (const auto& z : cycles_.basis()) {
    SVec r = full_.reduce(z);
    if (r.empty()) continue;
    SVec rep = dgcohom::scaled(r, r.front().second.inverse());
    full_.insert(rep);
    reps_.push_back(std::move(rep));
  }
  (void)nb;
}

SVec Subquotient::coordinates(const SVec& z) const {
  auto [r, c] = full_.reduce_tracked(z);
  if (!r.empty()) throw IntegrityError("vector is not a cycle");
  const int nb = bounds_.rank();
  SVec out;
  for (const auto& [j, a] : c)
    if (j >= nb) out.emplace_back(j - nb, a);
  return out;
}

SVec Subquotient::lift(const SVec& coords) const {
  SVec out;
  for (const auto& [j, a] : coords) out = add_scaled(out, reps_[static_cast<std::size_t>(j)], a);
  return out;
}

std::string to_string(const SVec& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) os << ", ";
    os << v[k].first << ":" << v[k].second.to_string();
  }
  os << "}";
  return os.str();
}

}  // namespace dgcohom
