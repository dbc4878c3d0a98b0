#include "severi/scalar.hpp"

#include <charconv>
#include <ostream>

#include "severi/errors.hpp"

namespace severi::la {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) noexcept {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e != 0) {
    if (e & 1U) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1U;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw ArithmeticError("inverse of zero in F_" + std::to_string(p));
  // Extended Euclid on signed 128-bit to stay exact for p < 2^62.
  __int128 t = 0, new_t = 1;
  __int128 r = p, new_r = a;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    const __int128 tt = t - q * new_t;
    t = new_t;
    new_t = tt;
    const __int128 rr = r - q * new_r;
    r = new_r;
    new_r = rr;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p < 3 || p >= (1ULL << 62) || !is_prime_u64(p)) {
    throw InputError("field modulus must be an odd prime below 2^62, got " + std::to_string(p));
  }
  return Field(p);
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(std::int64_t v) const {
  if (is_rational()) return Scalar(mpq_class(static_cast<long>(v)));
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return Scalar(p_, static_cast<std::uint64_t>(r));
}

Scalar Field::from_residue(std::uint64_t r) const {
  if (is_rational()) throw FieldMismatch("from_residue over Q");
  return Scalar(p_, r % p_);
}

Scalar Field::from_rational(const mpq_class& q) const {
  if (is_rational()) {
    mpq_class c(q);
    c.canonicalize();
    return Scalar(std::move(c));
  }
  const std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), p_);
  const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p_);
  if (den == 0) throw ArithmeticError("denominator divisible by the field characteristic");
  return Scalar(p_, mul_mod(num, inv_mod(den, p_), p_));
}

Scalar Field::from_string(std::string_view text) const {
  const std::string s(text);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw FormatError("not a rational literal: '" + s + "'");
  if (q.get_den() == 0) throw FormatError("zero denominator: '" + s + "'");
  return from_rational(q);
}

std::string Field::to_string() const {
  return is_rational() ? std::string("QQ") : "GF(" + std::to_string(p_) + ")";
}

Field Scalar::field() const noexcept {
  if (p_ == 0) return Field::rationals();
  return Field(p_);
}

bool Scalar::is_zero() const noexcept {
  if (p_ != 0) return std::get<std::uint64_t>(value_) == 0;
  return sgn(std::get<mpq_class>(value_)) == 0;
}

bool Scalar::is_one() const noexcept {
  if (p_ != 0) return std::get<std::uint64_t>(value_) == 1;
  return std::get<mpq_class>(value_) == 1;
}

std::uint64_t Scalar::residue() const {
  if (p_ == 0) throw FieldMismatch("residue() of a rational scalar");
  return std::get<std::uint64_t>(value_);
}

const mpq_class& Scalar::rational() const {
  if (p_ != 0) throw FieldMismatch("rational() of a prime-field scalar");
  return std::get<mpq_class>(value_);
}

void Scalar::require_same(const Scalar& o) const {
  if (p_ != o.p_) {
    throw FieldMismatch("scalar field mismatch: " + field().to_string() + " vs " + o.field().to_string());
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same(o);
  if (p_ != 0) {
    auto& a = std::get<std::uint64_t>(value_);
    a += std::get<std::uint64_t>(o.value_);
    if (a >= p_) a -= p_;
  } else {
    std::get<mpq_class>(value_) += std::get<mpq_class>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same(o);
  if (p_ != 0) {
    auto& a = std::get<std::uint64_t>(value_);
    const auto b = std::get<std::uint64_t>(o.value_);
    a = a >= b ? a - b : a + p_ - b;
  } else {
    std::get<mpq_class>(value_) -= std::get<mpq_class>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  require_same(o);
  if (p_ != 0) {
    auto& a = std::get<std::uint64_t>(value_);
    a = mul_mod(a, std::get<std::uint64_t>(o.value_), p_);
  } else {
    std::get<mpq_class>(value_) *= std::get<mpq_class>(o.value_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  require_same(o);
  return *this *= o.inverse();
}

Scalar Scalar::operator-() const {
  if (p_ != 0) {
    const auto a = std::get<std::uint64_t>(value_);
    return Scalar(p_, a == 0 ? 0 : p_ - a);
  }
  return Scalar(mpq_class(-std::get<mpq_class>(value_)));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ArithmeticError("inverse of zero");
  if (p_ != 0) return Scalar(p_, inv_mod(std::get<std::uint64_t>(value_), p_));
  mpq_class r = 1 / std::get<mpq_class>(value_);
  r.canonicalize();
  return Scalar(std::move(r));
}

Scalar Scalar::pow(std::uint64_t e) const {
  if (p_ != 0) return Scalar(p_, pow_mod(std::get<std::uint64_t>(value_), e, p_));
  Scalar result = field().one();
  Scalar base = *this;
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ != b.p_) return false;
  return a.value_ == b.value_;
}

std::string Scalar::to_string() const {
  if (p_ != 0) return std::to_string(std::get<std::uint64_t>(value_));
  return std::get<mpq_class>(value_).get_str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace severi::la
