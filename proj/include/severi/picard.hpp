#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace severi::picard {

class DivClass;

/// Free abelian group with a named basis, a symmetric integer pairing and a
/// canonical class.
class PicardLattice : public std::enable_shared_from_this<PicardLattice> {
 public:
  /// Throws LatticeError unless gram is square, symmetric and matches names.
  static std::shared_ptr<const PicardLattice> create(std::string title, std::vector<std::string> names,
                                                     std::vector<std::vector<long>> gram,
                                                     std::vector<long> canonical);

  const std::string& title() const noexcept { return title_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::vector<long>>& gram() const noexcept { return gram_; }
  std::size_t rank() const noexcept { return names_.size(); }

  /// Basis element by name; throws LatticeError if unknown.
  DivClass generator(const std::string& name) const;
  DivClass zero() const;
  DivClass canonical() const;
  DivClass make(std::vector<long> coeffs) const;

 private:
  PicardLattice() = default;
  std::string title_;
  std::vector<std::string> names_;
  std::vector<std::vector<long>> gram_;
  std::vector<long> canonical_;
};

class DivClass {
 public:
  DivClass(std::shared_ptr<const PicardLattice> lattice, std::vector<long> coeffs);

  const PicardLattice& lattice() const noexcept { return *lattice_; }
  const std::vector<long>& coeffs() const noexcept { return c_; }

  DivClass operator+(const DivClass& o) const;
  DivClass operator-(const DivClass& o) const;
  DivClass operator-() const;
  friend DivClass operator*(long k, const DivClass& d);
  /// Same lattice and same coefficients (linear equivalence in the lattice).
  friend bool operator==(const DivClass& a, const DivClass& b);

  /// e.g. "2r_E + (-1)f_E" style: "2r_E - f_E".
  std::string to_string() const;

 private:
  void require_same(const DivClass& o) const;
  std::shared_ptr<const PicardLattice> lattice_;
  std::vector<long> c_;
};

/// a^T gram b; throws LatticeError across lattices.
long intersect(const DivClass& a, const DivClass& b);

/// 1 + (C^2 + C.K)/2; throws LatticeError when C^2 + C.K is odd.
long adjunction_genus(const DivClass& c);

/// Riemann-Roch on a rational surface: chi(D) - 1 = (D^2 - D.K)/2.
long rr_projdim(const DivClass& d);

/// Plane blown up at q (E_q), at l points q_i and the points q'_i infinitely
/// near them (total transforms e_i, f_i), and at qbar if eps = 1.
/// Basis order: R, E_q, e_1..e_l, f_1..f_l, ebar. K = -3R + sum of exceptionals.
std::shared_ptr<const PicardLattice> blown_up_plane(int ell, int eps);

/// P^1 x P^1 with section r_E and fibre f_E.
std::shared_ptr<const PicardLattice> quadric_surface();

/// F_1 with (-1)-curve E and fibre F.
std::shared_ptr<const PicardLattice> hirzebruch_one();

struct LedgerEntry {
  std::string id;
  std::string statement;
  std::string expected;
  std::string actual;
  bool pass;
};

struct LedgerReport {
  int n;
  int ell;
  int eps;
  std::vector<LedgerEntry> entries;

  bool all_pass() const noexcept;
  nlohmann::json to_json() const;
  std::string table() const;
};

/// Requires n >= 3, eps in {0, 1} and 3n - 4 = 2 ell + eps (InputError otherwise).
LedgerReport verify_ledger(int n, int ell, int eps);
/// ell = floor((3n - 4) / 2).
LedgerReport verify_ledger(int n);

}  // namespace severi::picard
