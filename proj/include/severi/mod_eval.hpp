#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "severi/poly.hpp"

namespace severi::forms {

/// A form over F_p compiled for repeated evaluation on residues.
class ModEvaluator {
 public:
  /// Throws InputError over Q.
  explicit ModEvaluator(const Form& f);

  std::uint64_t modulus() const noexcept { return p_; }
  int nvars() const noexcept { return nvars_; }

  /// x holds nvars residues in [0, p).
  std::uint64_t operator()(std::span<const std::uint64_t> x) const;

 private:
  std::uint64_t p_;
  int nvars_;
  int degree_;
  std::vector<Exponent> exps_;
  std::vector<std::uint64_t> coeffs_;
};

/// Residues of a vector over F_p.
std::vector<std::uint64_t> residues(std::span<const Scalar> v);

}  // namespace severi::forms
