#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "severi/matrix.hpp"
#include "severi/scalar.hpp"

namespace severi::forms {

using la::Field;
using la::Scalar;
using la::Vector;

/// Exponent vector; entries past nvars are zero.
using Exponent = std::array<std::uint16_t, 4>;

int total_degree(const Exponent& e) noexcept;

/// Higher total degree first, then lexicographically larger first
/// (x0^d precedes x0^(d-1) x1 precedes ...).
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const noexcept;
};

/// Binomial coefficient; 0 outside 0 <= k <= n.
std::int64_t binomial(int n, int k);

/// Homogeneous exponents of degree d in nvars variables, in GradedLex order.
/// Length is binomial(d + nvars - 1, nvars - 1).
std::vector<Exponent> monomial_basis(int nvars, int d);

/// Index of `e` in monomial_basis(nvars, total_degree(e)).
std::size_t monomial_index(int nvars, const Exponent& e);

/// Sparse polynomial in up to four variables; zero coefficients are never stored.
class Poly {
 public:
  using Terms = std::map<Exponent, Scalar, GradedLex>;

  Poly(Field field, int nvars);
  static Poly constant(Field field, int nvars, const Scalar& c);
  static Poly variable(Field field, int nvars, int index);

  Field field() const noexcept { return field_; }
  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Largest / smallest total degree among terms; -1 for zero.
  int max_degree() const noexcept;
  int min_degree() const noexcept;
  bool is_homogeneous() const noexcept;

  Scalar coefficient(const Exponent& e) const;
  void add_term(const Exponent& e, const Scalar& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Scalar& s) const;
  Poly pow(int e) const;
  Poly derivative(int var) const;
  Poly homogeneous_part(int degree) const;

  Scalar evaluate(std::span<const Scalar> x) const;

  friend bool operator==(const Poly& a, const Poly& b);

 private:
  void check_compatible(const Poly& o) const;
  Field field_;
  int nvars_;
  Terms terms_;
};

/// Homogeneous polynomial of fixed degree in 3 or 4 variables.
class Form {
 public:
  Form(Field field, int nvars, int degree);
  /// Throws InputError if `poly` has a term of the wrong degree.
  Form(Poly poly, int degree);

  /// Coefficients listed along monomial_basis(nvars, degree).
  static Form from_coefficients(Field field, int nvars, int degree, std::span<const Scalar> coeffs);
  static Form monomial(Field field, int nvars, const Exponent& e, const Scalar& c);
  /// a_0 x_0 + ... ; nvars = coeffs.size().
  static Form linear(std::span<const Scalar> coeffs);

  Field field() const noexcept { return poly_.field(); }
  int nvars() const noexcept { return poly_.nvars(); }
  int degree() const noexcept { return degree_; }
  const Poly& poly() const noexcept { return poly_; }
  const Poly::Terms& terms() const noexcept { return poly_.terms(); }
  bool is_zero() const noexcept { return poly_.is_zero(); }

  Scalar coefficient(const Exponent& e) const { return poly_.coefficient(e); }
  Vector coefficients() const;

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form operator*(const Form& o) const;
  Form scaled(const Scalar& s) const;
  Form pow(int e) const;
  /// Partial derivative; degree drops by one (stays 0 for constants).
  Form derivative(int var) const;

  friend bool operator==(const Form& a, const Form& b) = default;

 private:
  Poly poly_;
  int degree_;
};

/// F(subs[0], ..., subs[nvars-1]); all substitutes share one degree and nvars.
Form compose(const Form& f, std::span<const Form> subs);

/// G(y) = F(A y) for an nvars x nvars matrix A.
Form substitute_linear(const Form& f, const la::Matrix& a);

}  // namespace severi::forms
