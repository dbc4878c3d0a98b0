#include "severi/conditions.hpp"

#include "severi/errors.hpp"
#include "severi/form_json.hpp"
#include "severi/form_ops.hpp"

namespace severi::conditions {

using forms::Exponent;
using forms::monomial_basis;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const ProjPoint* point_of(const BaseCondition& c) {
  return std::visit(overloaded{[](const FatLine&) -> const ProjPoint* { return nullptr; },
                               [](const auto& x) -> const ProjPoint* { return &x.point; }},
                    c);
}

// Powers x^0..x^d of each coordinate of p.
std::vector<Vector> coordinate_powers(const ProjPoint& p, int d) {
  std::vector<Vector> pw(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    pw[k].push_back(p.field().one());
    for (int i = 1; i <= d; ++i) pw[k].push_back(pw[k].back() * p[k]);
  }
  return pw;
}

// Coefficient of u^a in the local expansion of the monomial x^e at p
// (x_chart = 1, x_k = p_k + u_k for the other coordinates, in index order).
Scalar local_coefficient(const Exponent& e, const Exponent& a, const ProjPoint& p, const std::vector<Vector>& pw) {
  const Field f = p.field();
  const std::size_t chart = p.chart();
  Scalar c = f.one();
  std::size_t local = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k == chart) continue;
    const int ek = e[k];
    const int ak = a[local++];
    if (ak > ek) return f.zero();
    c *= f.from_int(forms::binomial(ek, ak)) * pw[k][static_cast<std::size_t>(ek - ak)];
  }
  return c;
}

void check_point(const ProjPoint& p, int nvars, Field field) {
  if (static_cast<int>(p.size()) != nvars) throw InputError("condition point lives in the wrong ambient space");
  if (p.field() != field) throw FieldMismatch("condition point over another field");
}

void check_direction(const ProjPoint& p, const Vector& v) {
  if (v.size() != p.size()) throw InputError("condition direction has the wrong length");
  (void)forms::affine_direction(p, v);  // throws when v is proportional to p
}

void fat_point_rows(la::Matrix& out, const std::vector<Exponent>& cols, const ProjPoint& p, int m) {
  const int d = forms::total_degree(cols.front());
  const auto pw = coordinate_powers(p, d);
  const int local_vars = static_cast<int>(p.size()) - 1;
  for (int k = 0; k < m; ++k) {
    for (const auto& a : monomial_basis(local_vars, k)) {
      Vector row;
      row.reserve(cols.size());
      for (const auto& e : cols) row.push_back(local_coefficient(e, a, p, pw));
      out.append_row(row);
    }
  }
}

void tangency_rows(la::Matrix& out, const std::vector<Exponent>& cols, const ProjPoint& p, const Vector& v) {
  const Field f = p.field();
  const int d = forms::total_degree(cols.front());
  const auto pw = coordinate_powers(p, d);
  Vector value;
  Vector deriv;
  for (const auto& e : cols) {
    Scalar val = f.one();
    for (std::size_t k = 0; k < p.size(); ++k) val *= pw[k][e[k]];
    value.push_back(val);
    Scalar dv = f.zero();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (e[i] == 0 || v[i].is_zero()) continue;
      Scalar term = f.from_int(e[i]) * v[i];
      for (std::size_t k = 0; k < p.size(); ++k) term *= pw[k][k == i ? e[k] - 1U : e[k]];
      dv += term;
    }
    deriv.push_back(dv);
  }
  out.append_row(value);
  out.append_row(deriv);
}

// Rows g(0,0), g_x(0,0), g_t(0,0) of g(x,t) = F_local(x (d + t w)) / x^2.
void inf_near_rows(la::Matrix& out, const std::vector<Exponent>& cols, const ProjPoint& p, const Vector& v) {
  const Field f = p.field();
  const int deg = forms::total_degree(cols.front());
  const auto pw = coordinate_powers(p, deg);
  const Vector dir = forms::affine_direction(p, v);
  const Vector w = forms::completion(std::vector<Vector>{dir}, 2).front();
  auto dpow = [&](std::size_t i, int k) { return k == 0 ? f.one() : dir[i].pow(static_cast<std::uint64_t>(k)); };
  const auto quad = monomial_basis(2, 2);
  const auto cub = monomial_basis(2, 3);
  Vector r0, r1, r2;
  for (const auto& e : cols) {
    Scalar g = f.zero(), gx = f.zero(), gt = f.zero();
    for (const auto& a : quad) {
      const Scalar c = local_coefficient(e, a, p, pw);
      if (c.is_zero()) continue;
      g += c * dpow(0, a[0]) * dpow(1, a[1]);
      if (a[0] > 0) gt += c * f.from_int(a[0]) * dpow(0, a[0] - 1) * w[0] * dpow(1, a[1]);
      if (a[1] > 0) gt += c * f.from_int(a[1]) * dpow(0, a[0]) * dpow(1, a[1] - 1) * w[1];
    }
    for (const auto& a : cub) {
      const Scalar c = local_coefficient(e, a, p, pw);
      if (!c.is_zero()) gx += c * dpow(0, a[0]) * dpow(1, a[1]);
    }
    r0.push_back(g);
    r1.push_back(gx);
    r2.push_back(gt);
  }
  out.append_row(r0);
  out.append_row(r1);
  out.append_row(r2);
}

// Coefficients of (y2, y3)-degree < m of x^e(A y), A = line_frame(r).
void fat_line_rows(la::Matrix& out, const std::vector<Exponent>& cols, const ProjLine& r, int m) {
  const Field f = r.field();
  const int d = forms::total_degree(cols.front());
  const la::Matrix a = forms::line_frame(r);
  std::vector<std::vector<forms::Poly>> pw(4);
  for (std::size_t k = 0; k < 4; ++k) {
    const forms::Poly lin = Form::linear(a.row(k)).poly();
    pw[k].push_back(forms::Poly::constant(f, 4, f.one()));
    for (int i = 1; i <= d; ++i) pw[k].push_back(pw[k].back() * lin);
  }
  std::vector<Exponent> low;
  for (const auto& y : monomial_basis(4, d))
    if (y[2] + y[3] < m) low.push_back(y);
  std::vector<Vector> rows(low.size());
  for (const auto& e : cols) {
    const forms::Poly g = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
    for (std::size_t i = 0; i < low.size(); ++i) rows[i].push_back(g.coefficient(low[i]));
  }
  for (const auto& row : rows) out.append_row(row);
}

}  // namespace

std::size_t row_count(const BaseCondition& c, int nvars, int d) {
  return std::visit(overloaded{
                        [&](const FatPoint& x) {
                          return static_cast<std::size_t>(forms::binomial(x.m + nvars - 2, nvars - 1));
                        },
                        [](const TangencyAtPoint&) { return std::size_t{2}; },
                        [](const InfNearDouble&) { return std::size_t{3}; },
                        [&](const FatLine& x) {
                          std::size_t n = 0;
                          for (int k = 0; k < x.m && k <= d; ++k) n += static_cast<std::size_t>((k + 1) * (d - k + 1));
                          return n;
                        },
                        [](const SimplePoint&) { return std::size_t{1}; },
                    },
                    c);
}

la::Matrix condition_matrix(int nvars, int d, const Scheme& scheme, Field field) {
  if (nvars != 3 && nvars != 4) throw InputError("condition_matrix: nvars must be 3 or 4");
  const auto cols = monomial_basis(nvars, d);
  la::Matrix out(field, 0, cols.size());
  for (std::size_t idx = 0; idx < scheme.size(); ++idx) {
    const auto& c = scheme[idx];
    if (const auto* p = point_of(c)) check_point(*p, nvars, field);
    std::visit(overloaded{
                   [&](const FatPoint& x) {
                     if (x.m < 0) throw InputError("FatPoint order must be nonnegative");
                     fat_point_rows(out, cols, x.point, x.m);
                   },
                   [&](const TangencyAtPoint& x) {
                     check_direction(x.point, x.direction);
                     tangency_rows(out, cols, x.point, x.direction);
                   },
                   [&](const InfNearDouble& x) {
                     if (nvars != 3) throw InputError("InfNearDouble is a plane condition");
                     bool supported = false;
                     for (std::size_t j = 0; j < idx; ++j) {
                       const auto* fp = std::get_if<FatPoint>(&scheme[j]);
                       if (fp != nullptr && fp->m >= 2 && fp->point == x.point) supported = true;
                     }
                     if (!supported) throw SchemeError("InfNearDouble without an earlier FatPoint of order >= 2 at its point");
                     check_direction(x.point, x.direction);
                     inf_near_rows(out, cols, x.point, x.direction);
                   },
                   [&](const FatLine& x) {
                     if (nvars != 4 || x.line.ambient() != 3) throw InputError("FatLine needs a line of P^3");
                     if (x.line.field() != field) throw FieldMismatch("condition line over another field");
                     fat_line_rows(out, cols, x.line, x.m);
                   },
                   [&](const SimplePoint& x) { fat_point_rows(out, cols, x.point, 1); },
               },
               c);
  }
  return out;
}

LinearSystem linear_system(int nvars, int d, const Scheme& scheme, Field field) {
  const la::Matrix m = condition_matrix(nvars, d, scheme, field);
  LinearSystem s{nvars, d, scheme, {}, 0};
  const auto red = la::row_reduce(m);
  s.rank = red.pivots.size();
  for (const auto& v : la::kernel_basis(m)) s.basis.push_back(Form::from_coefficients(field, nvars, d, v));
  return s;
}

std::size_t independence_defect(const LinearSystem& system, const std::vector<ProjPoint>& extra) {
  if (extra.empty()) return 0;
  if (system.basis.empty()) return extra.size();
  const Field f = system.basis.front().field();
  la::Matrix ev(f, extra.size(), system.basis.size());
  for (std::size_t i = 0; i < extra.size(); ++i) {
    check_point(extra[i], system.nvars, f);
    for (std::size_t j = 0; j < system.basis.size(); ++j) ev.set(i, j, forms::evaluate(system.basis[j], extra[i]));
  }
  return extra.size() - la::rank(ev);
}

bool satisfies(const Form& f, const BaseCondition& c) {
  if (f.is_zero()) return true;
  return std::visit(
      overloaded{
          [&](const FatPoint& x) { return x.m <= 0 || forms::multiplicity_at(f, x.point) >= x.m; },
          [&](const TangencyAtPoint& x) {
            return forms::evaluate(f, x.point).is_zero() &&
                   forms::directional_derivative(f, x.point, x.direction).is_zero();
          },
          [&](const InfNearDouble& x) {
            if (forms::multiplicity_at(f, x.point) < 2) return false;
            const forms::Poly g = forms::blowup_chart(f, x.point, x.direction, 2);
            return g.coefficient(Exponent{0, 0, 0, 0}).is_zero() && g.coefficient(Exponent{1, 0, 0, 0}).is_zero() &&
                   g.coefficient(Exponent{0, 1, 0, 0}).is_zero();
          },
          [&](const FatLine& x) { return x.m <= 0 || forms::multiplicity_along_line(f, x.line) >= x.m; },
          [&](const SimplePoint& x) { return forms::evaluate(f, x.point).is_zero(); },
      },
      c);
}

bool verify_system(const LinearSystem& s) {
  for (const auto& f : s.basis)
    for (const auto& c : s.scheme)
      if (!satisfies(f, c)) return false;
  return true;
}

using nlohmann::json;

json condition_to_json(const BaseCondition& c) {
  return std::visit(
      overloaded{
          [](const FatPoint& x) {
            return json{{"type", "fat_point"}, {"point", forms::point_to_json(x.point)}, {"m", x.m}};
          },
          [](const TangencyAtPoint& x) {
            return json{{"type", "tangency"},
                        {"point", forms::point_to_json(x.point)},
                        {"direction", forms::vector_to_json(x.direction)}};
          },
          [](const InfNearDouble& x) {
            return json{{"type", "inf_near_double"},
                        {"point", forms::point_to_json(x.point)},
                        {"direction", forms::vector_to_json(x.direction)}};
          },
          [](const FatLine& x) {
            return json{{"type", "fat_line"}, {"line", forms::line_to_json(x.line)}, {"m", x.m}};
          },
          [](const SimplePoint& x) { return json{{"type", "simple_point"}, {"point", forms::point_to_json(x.point)}}; },
      },
      c);
}

BaseCondition condition_from_json(const json& j, Field field) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "fat_point") return FatPoint{forms::point_from_json(j.at("point"), field), j.at("m").get<int>()};
    if (type == "tangency")
      return TangencyAtPoint{forms::point_from_json(j.at("point"), field),
                             forms::vector_from_json(j.at("direction"), field)};
    if (type == "inf_near_double")
      return InfNearDouble{forms::point_from_json(j.at("point"), field),
                           forms::vector_from_json(j.at("direction"), field)};
    if (type == "fat_line") return FatLine{forms::line_from_json(j.at("line"), field), j.at("m").get<int>()};
    if (type == "simple_point") return SimplePoint{forms::point_from_json(j.at("point"), field)};
    throw FormatError("unknown condition type '" + type + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed condition JSON: ") + e.what());
  }
}

json scheme_to_json(const Scheme& s) {
  json out = json::array();
  for (const auto& c : s) out.push_back(condition_to_json(c));
  return out;
}

Scheme scheme_from_json(const json& j, Field field) {
  if (!j.is_array()) throw FormatError("scheme must be a JSON array");
  Scheme s;
  for (const auto& c : j) s.push_back(condition_from_json(c, field));
  return s;
}

}  // namespace severi::conditions
