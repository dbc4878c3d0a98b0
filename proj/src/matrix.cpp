#include "severi/matrix.hpp"

#include <string>
#include <utility>

#include "severi/errors.hpp"

namespace severi::la {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, field.zero()) {}

Matrix Matrix::from_rows(Field field, const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, 0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

Matrix Matrix::from_ints(Field field, const std::vector<std::vector<std::int64_t>>& rows) {
  return reduce(rows, field);
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, field.one());
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, Scalar v) {
  if (v.field() != field_) throw FieldMismatch("matrix entry field mismatch");
  entries_[r * cols_ + c] = std::move(v);
}

void Matrix::append_row(std::span<const Scalar> row) {
  if (row.size() != cols_) {
    throw InputError("row length " + std::to_string(row.size()) + " != " + std::to_string(cols_));
  }
  for (const auto& x : row) {
    if (x.field() != field_) throw FieldMismatch("mixed-field matrix");
  }
  entries_.insert(entries_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  return t;
}

Vector Matrix::operator*(std::span<const Scalar> v) const {
  if (v.size() != cols_) throw InputError("matrix-vector dimension mismatch");
  Vector out(rows_, field_.zero());
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc = field_.zero();
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = std::move(acc);
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw InputError("matrix-matrix dimension mismatch");
  if (field_ != other.field_) throw FieldMismatch("matrix product across fields");
  Matrix out(field_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < other.cols_; ++j) {
      Scalar acc = field_.zero();
      for (std::size_t k = 0; k < cols_; ++k) acc += (*this)(i, k) * other(k, j);
      out.entries_[i * out.cols_ + j] = std::move(acc);
    }
  return out;
}

namespace {

// Gauss-Jordan over F_p on raw residues; returns pivot columns.
std::vector<std::size_t> reduce_mod_p(std::vector<std::uint64_t>& a, std::size_t rows, std::size_t cols,
                                      std::uint64_t p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    const std::uint64_t inv = inv_mod(a[r * cols + c], p);
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const std::uint64_t f = a[i * cols + c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        const std::uint64_t s = mul_mod(f, a[r * cols + j], p);
        std::uint64_t& x = a[i * cols + j];
        x = x >= s ? x - s : x + p - s;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::size_t> reduce_rational(std::vector<mpq_class>& a, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && sgn(a[sel * cols + c]) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    const mpq_class inv = 1 / a[r * cols + c];
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const mpq_class f = a[i * cols + c];
      if (sgn(f) == 0) continue;
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] -= f * a[r * cols + j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Echelon row_reduce(const Matrix& m) {
  const Field f = m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix out(f, rows, cols);
  std::vector<std::size_t> pivots;
  if (f.is_prime()) {
    std::vector<std::uint64_t> a(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = m(i, j).residue();
    pivots = reduce_mod_p(a, rows, cols, f.modulus());
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (a[i * cols + j] != 0) out.set(i, j, f.from_residue(a[i * cols + j]));
  } else {
    std::vector<mpq_class> a(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = m(i, j).rational();
    pivots = reduce_rational(a, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(a[i * cols + j]) != 0) out.set(i, j, f.from_rational(a[i * cols + j]));
  }
  return {std::move(out), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

std::vector<Vector> kernel_basis(const Matrix& m) {
  const auto [red, pivots] = row_reduce(m);
  const Field f = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& m, std::span<const Scalar> b) {
  if (b.size() != m.rows()) throw InputError("solve: right-hand side length mismatch");
  const Field f = m.field();
  Matrix aug(f, m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m(i, j));
    aug.set(i, m.cols(), b[i]);
  }
  const auto [red, pivots] = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), f.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = red(i, m.cols());
  return x;
}

Scalar determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
  const Field f = m.field();
  const std::size_t n = m.rows();
  std::vector<Vector> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i].assign(m.row(i).begin(), m.row(i).end());
  Scalar det = f.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && a[sel][c].is_zero()) ++sel;
    if (sel == n) return f.zero();
    if (sel != c) {
      std::swap(a[sel], a[c]);
      det = -det;
    }
    det *= a[c][c];
    const Scalar inv = a[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].is_zero()) continue;
      const Scalar factor = a[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= factor * a[c][j];
    }
  }
  return det;
}

Matrix reduce(const std::vector<std::vector<std::int64_t>>& rows, Field field) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("ragged integer matrix");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, field.from_int(rows[i][j]));
  }
  return m;
}

std::size_t rank_over_q(const std::vector<std::vector<std::int64_t>>& rows) {
  return rank(reduce(rows, Field::rationals()));
}

std::size_t guarded_rank(const std::vector<std::vector<std::int64_t>>& rows, Field first, Field second) {
  if (first == second) throw InputError("guard primes must be distinct");
  const std::size_t r1 = rank(reduce(rows, first));
  const std::size_t r2 = rank(reduce(rows, second));
  if (r1 != r2) {
    throw BadPrime("rank " + std::to_string(r1) + " over " + first.to_string() + " but " + std::to_string(r2) +
                       " over " + second.to_string(),
                   r1, r2);
  }
  return r1;
}

}  // namespace severi::la
