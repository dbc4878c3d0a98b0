#include "severi/mod_eval.hpp"

#include "severi/errors.hpp"

namespace severi::forms {

ModEvaluator::ModEvaluator(const Form& f) : p_(f.field().modulus()), nvars_(f.nvars()), degree_(f.degree()) {
  if (!f.field().is_prime()) throw InputError("ModEvaluator needs a prime field");
  for (const auto& [e, c] : f.terms()) {
    exps_.push_back(e);
    coeffs_.push_back(c.residue());
  }
}

std::uint64_t ModEvaluator::operator()(std::span<const std::uint64_t> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw InputError("ModEvaluator: wrong number of coordinates");
  // p < 2^62 in general, but the fast path below needs p < 2^32.
  const bool small = p_ < (1ULL << 32);
  const auto deg = static_cast<std::size_t>(degree_) + 1;
  std::uint64_t pw[4][64];
  std::vector<std::uint64_t> big;
  std::uint64_t* table = &pw[0][0];
  std::size_t stride = 64;
  if (deg > 64) {
    big.resize(4 * deg);
    table = big.data();
    stride = deg;
  }
  for (int i = 0; i < nvars_; ++i) {
    std::uint64_t* row = table + static_cast<std::size_t>(i) * stride;
    row[0] = 1 % p_;
    for (std::size_t k = 1; k < deg; ++k)
      row[k] = small ? row[k - 1] * x[static_cast<std::size_t>(i)] % p_ : la::mul_mod(row[k - 1], x[static_cast<std::size_t>(i)], p_);
  }
  std::uint64_t acc = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    std::uint64_t v = coeffs_[t];
    for (int i = 0; i < nvars_; ++i) {
      const std::uint64_t f = table[static_cast<std::size_t>(i) * stride + exps_[t][static_cast<std::size_t>(i)]];
      v = small ? v * f % p_ : la::mul_mod(v, f, p_);
    }
    acc += v;
    if (acc >= p_) acc -= p_;
  }
  return acc;
}

std::vector<std::uint64_t> residues(std::span<const Scalar> v) {
  std::vector<std::uint64_t> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.residue());
  return out;
}

}  // namespace severi::forms
