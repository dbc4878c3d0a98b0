#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace severi::la {

class Scalar;

/// Q or F_p with p an odd prime below 2^62.
class Field {
 public:
  /// The rationals.
  constexpr Field() noexcept = default;

  static constexpr Field rationals() noexcept { return Field(); }
  /// Throws InputError unless p is an odd prime < 2^62.
  static Field prime(std::uint64_t p);

  constexpr bool is_rational() const noexcept { return p_ == 0; }
  constexpr bool is_prime() const noexcept { return p_ != 0; }
  /// 0 for Q.
  constexpr std::uint64_t modulus() const noexcept { return p_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t v) const;
  /// Decimal integer, or "a/b" over Q. Over F_p, "a/b" is read as a * b^-1.
  Scalar from_string(std::string_view text) const;
  Scalar from_rational(const mpq_class& q) const;
  /// Canonical representative; F_p only.
  Scalar from_residue(std::uint64_t r) const;

  std::string to_string() const;

  friend constexpr bool operator==(Field a, Field b) noexcept { return a.p_ == b.p_; }

 private:
  friend class Scalar;
  explicit constexpr Field(std::uint64_t p) noexcept : p_(p) {}
  std::uint64_t p_ = 0;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n) noexcept;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept;
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) noexcept;
/// a^-1 mod p for a != 0.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// An exact field element. F_p values are canonical in [0, p); rationals are
/// kept in lowest terms with positive denominator. Arithmetic across fields
/// throws FieldMismatch.
class Scalar {
 public:
  /// Rational zero.
  Scalar() : value_(mpq_class(0)) {}

  Field field() const noexcept;
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// F_p residue; throws FieldMismatch over Q.
  std::uint64_t residue() const;
  /// Q value; throws FieldMismatch over F_p.
  const mpq_class& rational() const;

  Scalar inverse() const;
  Scalar pow(std::uint64_t e) const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// Decimal for F_p residues and integers, "a/b" otherwise.
  std::string to_string() const;

 private:
  friend class Field;
  Scalar(std::uint64_t p, std::uint64_t r) : p_(p), value_(r) {}
  explicit Scalar(mpq_class q) : value_(std::move(q)) {}
  void require_same(const Scalar& o) const;

  std::uint64_t p_ = 0;
  std::variant<std::uint64_t, mpq_class> value_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace severi::la
