#pragma once

#include <stdexcept>
#include <string>

namespace severi {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different fields (e.g. F_p with F_q, or F_p with Q).
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Division by zero or inverse of zero.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// Bad user-facing input: out-of-range parameters, parity violations, bad primes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The quantity asked for does not exist (e.g. multiplicity of the zero form).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// Ill-formed base-condition scheme.
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// Non-integral or mismatched lattice arithmetic.
class LatticeError : public Error {
 public:
  using Error::Error;
};

/// Ranks at the two guard primes disagree.
class BadPrime : public Error {
 public:
  BadPrime(const std::string& what, std::size_t rank1, std::size_t rank2)
      : Error(what), rank1_(rank1), rank2_(rank2) {}
  std::size_t rank1() const noexcept { return rank1_; }
  std::size_t rank2() const noexcept { return rank2_; }

 private:
  std::size_t rank1_;
  std::size_t rank2_;
};

/// A randomized instance failed a certified genericity check; retry with a new sub-seed.
class GenericityError : public Error {
 public:
  using Error::Error;
};

/// Interpolation had too few usable samples.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// The image of a map has lower degree than expected.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// The retry budget was exhausted.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A request the implementation declines to run (e.g. exhaustive scan at a large prime).
class RefusedError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace severi
