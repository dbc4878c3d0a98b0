// Small independent reference implementations used to cross-check the library.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "severi/rng.hpp"

namespace oracle {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline std::int64_t inv(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = static_cast<std::int64_t>(static_cast<__int128>(r) * b % p);
    b = static_cast<std::int64_t>(static_cast<__int128>(b) * b % p);
    e >>= 1;
  }
  return r;
}

// Plain Gaussian elimination mod p on an integer matrix.
inline std::size_t rank_mod(IntMatrix a, std::int64_t p) {
  for (auto& row : a)
    for (auto& x : row) x = mod(x, p);
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    const std::int64_t iv = inv(a[r][c], p);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const std::int64_t f = static_cast<std::int64_t>(static_cast<__int128>(a[i][c]) * iv % p);
      for (std::size_t j = c; j < cols; ++j)
        a[i][j] = mod(a[i][j] - static_cast<std::int64_t>(static_cast<__int128>(f) * a[r][j] % p), p);
    }
    ++r;
  }
  return r;
}

// Fraction-free (Bareiss) rank over Z.
inline std::size_t rank_bareiss(const IntMatrix& in) {
  std::vector<std::vector<mpz_class>> a;
  for (const auto& row : in) {
    a.emplace_back();
    for (auto x : row) a.back().emplace_back(static_cast<long>(x));
  }
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

inline IntMatrix random_int_matrix(severi::CounterRng& rng, std::size_t rows, std::size_t cols, std::int64_t lo,
                                   std::int64_t hi) {
  IntMatrix m(rows, std::vector<std::int64_t>(cols));
  for (auto& row : m)
    for (auto& x : row) x = rng.between(lo, hi);
  return m;
}

// Product of a rows x k and a k x cols random matrix (rank <= k).
inline IntMatrix random_low_rank(severi::CounterRng& rng, std::size_t rows, std::size_t cols, std::size_t k) {
  const auto a = random_int_matrix(rng, rows, k, -3, 3);
  const auto b = random_int_matrix(rng, k, cols, -3, 3);
  IntMatrix m(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t t = 0; t < k; ++t) m[i][j] += a[i][t] * b[t][j];
  return m;
}

// Value of the monomial x^e at integer coordinates.
inline mpz_class monomial_value(const std::vector<int>& e, const std::vector<long>& x) {
  mpz_class v = 1;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= x[i];
  return v;
}

// All exponent vectors of degree d in n variables (any order).
inline std::vector<std::vector<int>> exponents(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = left;
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Polynomial mod p as a plain list of (exponent, coefficient) terms.
using Terms = std::vector<std::pair<std::vector<int>, std::int64_t>>;

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

inline std::int64_t eval_terms(const Terms& f, const std::vector<std::int64_t>& x, std::int64_t p) {
  std::int64_t acc = 0;
  for (const auto& [e, c] : f) {
    std::int64_t v = mod(c, p);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) v = mulmod(v, mod(x[i], p), p);
    acc = mod(acc + v, p);
  }
  return acc;
}

inline Terms derivative_terms(const Terms& f, std::size_t var, std::int64_t p) {
  Terms out;
  for (const auto& [e, c] : f) {
    if (e[var] == 0) continue;
    auto g = e;
    --g[var];
    out.emplace_back(g, mulmod(mod(c, p), e[var], p));
  }
  return out;
}

// Rank of the matrix of second partials at x.
inline std::size_t hessian_rank(const Terms& f, const std::vector<std::int64_t>& x, std::int64_t p) {
  IntMatrix h(x.size(), std::vector<std::int64_t>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      h[i][j] = eval_terms(derivative_terms(derivative_terms(f, i, p), j, p), x, p);
  return rank_mod(h, p);
}

}  // namespace oracle
