#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "severi/matrix.hpp"
#include "severi/poly.hpp"
#include "severi/projective.hpp"

namespace severi::verify {

using forms::Field;
using forms::Form;
using forms::ProjLine;
using forms::ProjPoint;
using forms::Scalar;
using forms::Vector;

enum class Verdict { A1Node, WorseSingularity, Smooth };
/// "A1-node", "worse-singularity", "smooth".
std::string to_string(Verdict v);

struct NodeReport {
  ProjPoint point;
  Scalar value;
  Vector gradient;
  std::size_t hessian_rank;
  Verdict verdict;

  nlohmann::json to_json() const;
};

/// A point off the surface (value != 0) is reported as smooth with its residual.
NodeReport classify_double_point(const Form& f, const ProjPoint& p);

/// Largest prime singular_scan accepts.
inline constexpr std::uint64_t kMaxScanPrime = 211;

/// Every point of P^3(F_p) where F and its partials vanish, in canonical order
/// (by chart, then lexicographic). Throws RefusedError for p > kMaxScanPrime.
std::vector<ProjPoint> singular_scan(const Form& f, unsigned threads = 0);

struct Regularity {
  std::size_t rank;
  bool independent;
};

/// Rank of the evaluation matrix of degree-d monomials at the nodes.
Regularity severi_regular(const Form& f, std::span<const ProjPoint> nodes, int d);

struct Determinacy {
  std::size_t rank;
  std::size_t kernel_dim;
  /// The 15 x 18 matrix of (A, B, C) -> A f_x + B f_y + C f_z.
  la::Matrix map;
  std::vector<Vector> kernel;
};

/// Multiplication map from triples of quadrics into quartics. f: nonzero ternary cubic.
Determinacy determinacy_rank(const Form& f);

/// (f_y, -f_x, 0), (f_z, 0, -f_x), (0, f_z, -f_y) in the 18 domain coordinates.
std::array<Vector, 3> koszul_vectors(const Form& f);

struct CayleyReport {
  std::uint64_t seed;
  std::uint64_t sub_seed;
  int attempts;
  std::vector<Vector> lines;          ///< dual vectors of the 4 plane lines
  std::vector<ProjPoint> vertices;    ///< P_ij in order 01, 02, 03, 12, 13, 23
  int system_projdim;
  Form cubic = Form(Field::rationals(), 4, 3);
  std::vector<ProjPoint> nodes;       ///< image of line i
  std::vector<std::string> node_verdicts;
  std::vector<ProjLine> triangle;     ///< images of the diagonals 01|23, 02|13, 03|12
  std::vector<ProjPoint> triangle_vertices;
  bool triangle_coplanar;
  bool triangle_not_concurrent;
  bool triangle_avoids_nodes;
  bool triangle_on_surface;
  std::size_t seven_point_rank;
  int restriction_projdim;
  Regularity regular_d3;
  Regularity regular_d2;
  std::vector<std::string> retries;  ///< reasons for discarded draws

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Four seeded lines in general position, the cubics through their six vertices,
/// the image cubic surface and its triangle section. Needs p >= 5.
CayleyReport cayley_pipeline(std::uint64_t seed, Field field, int retries = 64);

struct FormulaTable {
  int n;
  std::optional<int> m;
  long delta0;
  std::optional<long> t_nm;
  long f_n;
  long s_n;
  int ell;
  int eps;
  long delta;
  long codim;

  nlohmann::json to_json() const;
};

/// Closed forms for degree n (>= 3) and, if given, 3 <= m <= n - 1. InputError otherwise.
FormulaTable formula_table(int n, std::optional<int> m = std::nullopt);

/// Header row plus one row per table; empty t_nm cells when m is absent.
std::string formula_csv(std::span<const FormulaTable> rows);

}  // namespace severi::verify
