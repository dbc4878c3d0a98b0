#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "severi/matrix.hpp"
#include "severi/scalar.hpp"

namespace severi::forms {

using la::Field;
using la::Scalar;
using la::Vector;

/// Point of P^2 or P^3, scaled so that its first nonzero coordinate is 1.
class ProjPoint {
 public:
  /// Throws InputError for the zero vector or a length other than 3 or 4.
  explicit ProjPoint(Vector coords);
  static ProjPoint from_ints(Field field, std::initializer_list<std::int64_t> coords);

  Field field() const noexcept { return c_.front().field(); }
  std::size_t size() const noexcept { return c_.size(); }
  const Scalar& operator[](std::size_t i) const { return c_[i]; }
  const Vector& coords() const noexcept { return c_; }
  /// Index of the first nonzero coordinate (which equals 1).
  std::size_t chart() const noexcept;

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;

 private:
  Vector c_;
};

/// Line in P^2 (carried by its dual vector, first nonzero entry 1) or in P^3
/// (carried by the reduced row echelon basis of its 2-dimensional span). Both
/// representations are canonical.
class ProjLine {
 public:
  /// Line through two distinct points of the same ambient space.
  static ProjLine through(const ProjPoint& a, const ProjPoint& b);
  /// Line in P^2 with the given (nonzero) dual vector.
  static ProjLine from_dual(Vector dual);

  /// 2 or 3.
  int ambient() const noexcept { return ambient_; }
  Field field() const noexcept { return a_.field(); }
  /// Two canonical spanning points.
  const ProjPoint& first() const noexcept { return a_; }
  const ProjPoint& second() const noexcept { return b_; }
  /// Dual vector (P^2 only).
  const Vector& dual() const;

  bool contains(const ProjPoint& p) const;
  /// s * first + t * second (not both zero).
  ProjPoint point_at(const Scalar& s, const Scalar& t) const;

  friend bool operator==(const ProjLine& a, const ProjLine& b) {
    return a.ambient_ == b.ambient_ && a.a_ == b.a_ && a.b_ == b.b_;
  }

 private:
  ProjLine(int ambient, ProjPoint a, ProjPoint b, Vector dual)
      : ambient_(ambient), a_(std::move(a)), b_(std::move(b)), dual_(std::move(dual)) {}
  int ambient_;
  ProjPoint a_;
  ProjPoint b_;
  Vector dual_;
};

/// Rank of the matrix whose rows are the given coordinate vectors.
std::size_t span_rank(std::span<const Vector> rows);
std::size_t span_rank(std::initializer_list<const ProjPoint*> points);

/// Cross product in k^3.
Vector cross(std::span<const Scalar> a, std::span<const Scalar> b);

/// Intersection of two distinct lines in P^2.
ProjPoint intersect(const ProjLine& a, const ProjLine& b);

/// True if two lines of P^3 meet (their spans are dependent).
bool lines_meet(const ProjLine& a, const ProjLine& b);

/// The intersection point of two distinct meeting lines of P^3.
ProjPoint meeting_point(const ProjLine& a, const ProjLine& b);

/// Standard basis vectors e_k, in index order, that complete `rows` to a basis.
std::vector<Vector> completion(std::span<const Vector> rows, std::size_t dim);

/// Uniformly random point of P^(n-1)(F_p), using `draw` for uniform residues.
template <class Rng>
ProjPoint random_point(Field field, std::size_t n, Rng& rng) {
  for (;;) {
    Vector v;
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(field.from_residue(rng.below(field.modulus())));
      nonzero = nonzero || !v.back().is_zero();
    }
    if (nonzero) return ProjPoint(std::move(v));
  }
}

}  // namespace severi::forms
