#pragma once

#include <cstdint>
#include <vector>

#include "severi/scalar.hpp"

namespace severi::la {

/// Dense univariate polynomial over F_p; coeffs_[i] multiplies t^i. The
/// coefficient vector is kept trimmed, so the zero polynomial has no coefficients.
class UPoly {
 public:
  explicit UPoly(std::uint64_t p) : p_(p) {}
  UPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);

  static UPoly monomial(std::uint64_t p, std::uint64_t coeff, int degree);

  std::uint64_t modulus() const noexcept { return p_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  std::uint64_t coeff(int i) const noexcept;
  std::uint64_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }

  std::uint64_t operator()(std::uint64_t t) const noexcept;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(std::uint64_t s) const;
  UPoly derivative() const;
  UPoly monic() const;

  /// Euclidean division; divisor nonzero.
  void divmod(const UPoly& d, UPoly& quotient, UPoly& remainder) const;
  UPoly operator%(const UPoly& d) const;

  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  void trim();
  std::uint64_t p_;
  std::vector<std::uint64_t> c_;
};

/// Monic gcd (zero if both are zero).
UPoly gcd(UPoly a, UPoly b);

/// base^e mod m.
UPoly pow_mod(const UPoly& base, std::uint64_t e, const UPoly& m);

/// Distinct roots in F_p, ascending. Splits gcd(f, t^p - t) by Cantor-Zassenhaus
/// with a fixed-seed generator, so the result is deterministic.
std::vector<std::uint64_t> roots(const UPoly& f);

/// Order of vanishing of f at t (f nonzero).
int root_multiplicity(const UPoly& f, std::uint64_t t);

/// True if gcd(f, f') = 1.
bool is_squarefree(const UPoly& f);

}  // namespace severi::la
