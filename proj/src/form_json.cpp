#include "severi/form_json.hpp"

#include "severi/errors.hpp"

namespace severi::forms {

using nlohmann::json;

json field_to_json(Field f) {
  if (f.is_rational()) return "rational";
  return json{{"prime", f.modulus()}};
}

Field field_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "rational") return Field::rationals();
  if (j.is_object() && j.contains("prime") && j.at("prime").is_number_unsigned()) {
    return Field::prime(j.at("prime").get<std::uint64_t>());
  }
  throw FormatError("field must be \"rational\" or {\"prime\": p}");
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.to_string());
  return out;
}

Vector vector_from_json(const json& j, Field f) {
  if (!j.is_array()) throw FormatError("coordinate vector must be an array of strings");
  Vector v;
  for (const auto& x : j) {
    if (!x.is_string()) throw FormatError("coordinates must be decimal strings");
    v.push_back(f.from_string(x.get<std::string>()));
  }
  return v;
}

json point_to_json(const ProjPoint& p) { return vector_to_json(p.coords()); }

ProjPoint point_from_json(const json& j, Field f) {
  try {
    return ProjPoint(vector_from_json(j, f));
  } catch (const InputError& e) {
    throw FormatError(std::string("bad point: ") + e.what());
  }
}

json line_to_json(const ProjLine& r) {
  if (r.ambient() == 2) return json{{"dual", vector_to_json(r.dual())}};
  return json::array({point_to_json(r.first()), point_to_json(r.second())});
}

ProjLine line_from_json(const json& j, Field f) {
  try {
    if (j.is_object() && j.contains("dual")) return ProjLine::from_dual(vector_from_json(j.at("dual"), f));
    if (j.is_array() && j.size() == 2) return ProjLine::through(point_from_json(j[0], f), point_from_json(j[1], f));
  } catch (const InputError& e) {
    throw FormatError(std::string("bad line: ") + e.what());
  }
  throw FormatError("line must be [point, point] or {\"dual\": [...]}");
}

json form_to_json(const Form& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) {
    json exp = json::array();
    for (int i = 0; i < f.nvars(); ++i) exp.push_back(e[static_cast<std::size_t>(i)]);
    terms.push_back(json{{"exp", exp}, {"coeff", c.to_string()}});
  }
  return json{{"nvars", f.nvars()}, {"degree", f.degree()}, {"field", field_to_json(f.field())}, {"terms", terms}};
}

Form form_from_json(const json& j) {
  try {
    const int nvars = j.at("nvars").get<int>();
    const int degree = j.at("degree").get<int>();
    if (nvars != 3 && nvars != 4) throw FormatError("form nvars must be 3 or 4");
    const Field field = field_from_json(j.at("field"));
    Poly p(field, nvars);
    for (const auto& t : j.at("terms")) {
      const auto& exp = t.at("exp");
      if (!exp.is_array() || static_cast<int>(exp.size()) != nvars) throw FormatError("exponent length != nvars");
      Exponent e{};
      for (int i = 0; i < nvars; ++i) e[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i)].get<std::uint16_t>();
      const Scalar c = field.from_string(t.at("coeff").get<std::string>());
      if (c.is_zero()) throw FormatError("zero coefficient stored in a form");
      if (!p.coefficient(e).is_zero()) throw FormatError("duplicate exponent in a form");
      p.add_term(e, c);
    }
    return Form(std::move(p), degree);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed form JSON: ") + e.what());
  } catch (const InputError& e) {
    throw FormatError(std::string("malformed form JSON: ") + e.what());
  }
}

}  // namespace severi::forms
