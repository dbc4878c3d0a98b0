#pragma once

#include <json.hpp>

#include "severi/poly.hpp"
#include "severi/projective.hpp"

namespace severi::forms {

// Wire format shared by every bundle:
//   field : {"prime": p} | "rational"
//   form  : {"nvars", "degree", "field", "terms": [{"exp": [...], "coeff": "decimal or a/b"}]}
//   point : ["c0", "c1", ...] (normalized decimal strings)

nlohmann::json field_to_json(Field f);
Field field_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, Field f);

nlohmann::json point_to_json(const ProjPoint& p);
ProjPoint point_from_json(const nlohmann::json& j, Field f);

/// P^3 lines as [point, point]; P^2 lines as {"dual": [...]}.
nlohmann::json line_to_json(const ProjLine& r);
ProjLine line_from_json(const nlohmann::json& j, Field f);

nlohmann::json form_to_json(const Form& f);
/// Throws FormatError on schema violations.
Form form_from_json(const nlohmann::json& j);

}  // namespace severi::forms
