#include "severi/upoly.hpp"

#include <algorithm>
#include <functional>

#include "severi/errors.hpp"
#include "severi/rng.hpp"

namespace severi::la {

namespace {
std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= b ? a - b : a + p - b; }
}  // namespace

UPoly::UPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& x : c_) x %= p_;
  trim();
}

UPoly UPoly::monomial(std::uint64_t p, std::uint64_t coeff, int degree) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return UPoly(p, std::move(c));
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint64_t UPoly::coeff(int i) const noexcept {
  return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0;
}

std::uint64_t UPoly::operator()(std::uint64_t t) const noexcept {
  std::uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = add(mul_mod(acc, t, p_), *it, p_);
  return acc;
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<std::uint64_t> c(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = add(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0, p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::operator-(const UPoly& o) const {
  std::vector<std::uint64_t> c(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = sub(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0, p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly(p_);
  std::vector<std::uint64_t> c(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] = add(c[i + j], mul_mod(c_[i], o.c_[j], p_), p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::scaled(std::uint64_t s) const {
  std::vector<std::uint64_t> c(c_);
  for (auto& x : c) x = mul_mod(x, s % p_, p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly(p_);
  std::vector<std::uint64_t> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = mul_mod(c_[i], i % p_, p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(inv_mod(leading(), p_));
}

void UPoly::divmod(const UPoly& d, UPoly& quotient, UPoly& remainder) const {
  if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
  std::vector<std::uint64_t> r(c_);
  const int dd = d.degree();
  const std::uint64_t inv = inv_mod(d.leading(), p_);
  std::vector<std::uint64_t> q(std::max(0, degree() - dd + 1), 0);
  for (int i = degree(); i >= dd; --i) {
    const std::uint64_t f = mul_mod(r[static_cast<std::size_t>(i)], inv, p_);
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) {
      auto& x = r[static_cast<std::size_t>(i - dd + j)];
      x = sub(x, mul_mod(f, d.c_[static_cast<std::size_t>(j)], p_), p_);
    }
  }
  quotient = UPoly(p_, std::move(q));
  remainder = UPoly(p_, std::move(r));
}

UPoly UPoly::operator%(const UPoly& d) const {
  UPoly q(p_), r(p_);
  divmod(d, q, r);
  return r;
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly pow_mod(const UPoly& base, std::uint64_t e, const UPoly& m) {
  const std::uint64_t p = m.modulus();
  UPoly result(p, {1});
  result = result % m;
  UPoly b = base % m;
  while (e != 0) {
    if (e & 1U) result = (result * b) % m;
    b = (b * b) % m;
    e >>= 1U;
  }
  return result;
}

std::vector<std::uint64_t> roots(const UPoly& f) {
  if (f.is_zero()) throw UndefinedError("roots of the zero polynomial");
  const std::uint64_t p = f.modulus();
  if (f.degree() <= 0) return {};
  const UPoly t(p, {0, 1});
  // Product of the distinct linear factors of f.
  UPoly g = gcd(f, pow_mod(t, p, f) - t);
  std::vector<std::uint64_t> out;
  CounterRng rng(0x5eed5eedULL, static_cast<std::uint64_t>(g.degree()));
  std::function<void(const UPoly&)> split = [&](const UPoly& h) {
    if (h.degree() <= 0) return;
    if (h.degree() == 1) {
      // h = t + c (monic)
      out.push_back(h.coeff(0) == 0 ? 0 : p - h.coeff(0));
      return;
    }
    for (;;) {
      const std::uint64_t a = rng.below(p);
      const UPoly shifted(p, {a, 1});
      const UPoly w = pow_mod(shifted, (p - 1) / 2, h) - UPoly(p, {1});
      const UPoly d = gcd(h, w);
      if (d.degree() > 0 && d.degree() < h.degree()) {
        UPoly q(p), r(p);
        h.divmod(d, q, r);
        split(d);
        split(q.monic());
        return;
      }
    }
  };
  split(g);
  std::sort(out.begin(), out.end());
  return out;
}

int root_multiplicity(const UPoly& f, std::uint64_t t) {
  if (f.is_zero()) throw UndefinedError("root multiplicity in the zero polynomial");
  const std::uint64_t p = f.modulus();
  const UPoly lin(p, {t == 0 ? 0 : p - t % p, 1});
  UPoly cur = f;
  int k = 0;
  for (;;) {
    UPoly q(p), r(p);
    cur.divmod(lin, q, r);
    if (!r.is_zero()) return k;
    ++k;
    cur = std::move(q);
  }
}

bool is_squarefree(const UPoly& f) {
  if (f.degree() <= 0) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

}  // namespace severi::la
