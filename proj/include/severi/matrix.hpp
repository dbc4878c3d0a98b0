#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "severi/scalar.hpp"

namespace severi::la {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix over a single field.
class Matrix {
 public:
  /// Zero matrix.
  Matrix(Field field, std::size_t rows, std::size_t cols);

  /// Throws FieldMismatch if entries disagree with `field`, InputError on ragged rows.
  static Matrix from_rows(Field field, const std::vector<Vector>& rows);
  static Matrix from_ints(Field field, const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix identity(Field field, std::size_t n);

  Field field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  /// Throws FieldMismatch if `v` is over another field.
  void set(std::size_t r, std::size_t c, Scalar v);
  std::span<const Scalar> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  /// Appends a row; its length must equal cols().
  void append_row(std::span<const Scalar> row);

  Matrix transpose() const;
  Vector operator*(std::span<const Scalar> v) const;
  Matrix operator*(const Matrix& other) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> entries_;
};

/// Reduced row echelon form with its pivot columns (increasing).
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination; pivot = first nonzero entry scanning columns left to right.
Echelon row_reduce(const Matrix& m);

std::size_t rank(const Matrix& m);

/// cols - rank vectors spanning the right kernel. Vector j has a 1 at the j-th
/// free column, 0 at the other free columns, so the list is in reduced echelon
/// form with free columns in increasing order.
std::vector<Vector> kernel_basis(const Matrix& m);

/// A particular solution (free variables set to 0) or nullopt if inconsistent.
std::optional<Vector> solve(const Matrix& m, std::span<const Scalar> b);

/// Determinant of a square matrix.
Scalar determinant(const Matrix& m);

/// Integer matrix reduced into `field`.
Matrix reduce(const std::vector<std::vector<std::int64_t>>& rows, Field field);

/// Rank over Q of an integer matrix.
std::size_t rank_over_q(const std::vector<std::vector<std::int64_t>>& rows);

/// Rank of an integer matrix confirmed at two primes. Throws BadPrime when the
/// two modular ranks disagree; otherwise returns the common rank.
std::size_t guarded_rank(const std::vector<std::vector<std::int64_t>>& rows, Field first, Field second);

}  // namespace severi::la
