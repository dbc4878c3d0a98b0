#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <json.hpp>

#include "severi/matrix.hpp"
#include "severi/poly.hpp"
#include "severi/projective.hpp"

namespace severi::conditions {

using forms::Field;
using forms::Form;
using forms::ProjLine;
using forms::ProjPoint;
using forms::Scalar;
using forms::Vector;

/// All partials of order < m vanish at the point.
struct FatPoint {
  ProjPoint point;
  int m;
  friend bool operator==(const FatPoint&, const FatPoint&) = default;
};

/// Passes through the point with the line towards `direction` tangent there.
struct TangencyAtPoint {
  ProjPoint point;
  Vector direction;
  friend bool operator==(const TangencyAtPoint&, const TangencyAtPoint&) = default;
};

/// Double at the point infinitely near `point` along `direction` (plane only).
/// Needs a FatPoint of order >= 2 at the same point earlier in the scheme.
struct InfNearDouble {
  ProjPoint point;
  Vector direction;
  friend bool operator==(const InfNearDouble&, const InfNearDouble&) = default;
};

/// Multiplicity >= m along a line of P^3.
struct FatLine {
  ProjLine line;
  int m;
  friend bool operator==(const FatLine&, const FatLine&) = default;
};

struct SimplePoint {
  ProjPoint point;
  friend bool operator==(const SimplePoint&, const SimplePoint&) = default;
};

using BaseCondition = std::variant<FatPoint, TangencyAtPoint, InfNearDouble, FatLine, SimplePoint>;
using Scheme = std::vector<BaseCondition>;

/// Number of rows the condition contributes on degree-d forms in nvars variables.
std::size_t row_count(const BaseCondition& c, int nvars, int d);

/// Rows in scheme order, columns along monomial_basis(nvars, d).
/// Throws SchemeError for an InfNearDouble lacking an earlier FatPoint{P, >= 2},
/// InputError for dimension mismatches.
la::Matrix condition_matrix(int nvars, int d, const Scheme& scheme, Field field);

struct LinearSystem {
  int nvars;
  int degree;
  Scheme scheme;
  std::vector<Form> basis;
  std::size_t rank;  ///< rank of the condition matrix

  /// |basis| - 1; -1 for the empty system.
  int projdim() const noexcept { return static_cast<int>(basis.size()) - 1; }
};

LinearSystem linear_system(int nvars, int d, const Scheme& scheme, Field field);

/// |extra| - (projdim(system) - projdim(system + extra)).
std::size_t independence_defect(const LinearSystem& system, const std::vector<ProjPoint>& extra);

/// Checks the condition directly on the form (zero form satisfies everything).
bool satisfies(const Form& f, const BaseCondition& c);
/// Every basis member against every condition.
bool verify_system(const LinearSystem& s);

nlohmann::json condition_to_json(const BaseCondition& c);
BaseCondition condition_from_json(const nlohmann::json& j, Field field);
nlohmann::json scheme_to_json(const Scheme& s);
Scheme scheme_from_json(const nlohmann::json& j, Field field);

}  // namespace severi::conditions
