#include "severi/form_ops.hpp"

#include <algorithm>
#include <limits>

#include "severi/errors.hpp"

namespace severi::forms {

namespace {

// F(subs_0, ..., subs_{n-1}) for arbitrary (not necessarily homogeneous) substitutes.
Poly substitute(const Form& f, const std::vector<Poly>& subs) {
  const Field field = f.field();
  const int nv = subs.front().nvars();
  std::vector<std::vector<Poly>> powers(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    powers[i].push_back(Poly::constant(field, nv, field.one()));
    for (int k = 1; k <= f.degree(); ++k) powers[i].push_back(powers[i].back() * subs[i]);
  }
  Poly acc(field, nv);
  for (const auto& [e, c] : f.terms()) {
    Poly t = Poly::constant(field, nv, c);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (e[i] != 0) t = t * powers[i][e[i]];
    acc = acc + t;
  }
  return acc;
}

void require_vars(const Form& f, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(f.nvars()) != n) throw InputError(std::string(what) + ": ambient dimension mismatch");
}

}  // namespace

Scalar evaluate(const Form& f, std::span<const Scalar> x) { return f.poly().evaluate(x); }

Scalar evaluate(const Form& f, const ProjPoint& p) {
  require_vars(f, p.size(), "evaluate");
  return evaluate(f, p.coords());
}

Vector gradient(const Form& f, std::span<const Scalar> x) {
  Vector g;
  for (int i = 0; i < f.nvars(); ++i) g.push_back(evaluate(f.derivative(i), x));
  return g;
}

Scalar directional_derivative(const Form& f, const ProjPoint& p, std::span<const Scalar> v) {
  require_vars(f, p.size(), "directional_derivative");
  if (v.size() != p.size()) throw InputError("directional_derivative: direction has wrong length");
  if (span_rank(std::vector<Vector>{p.coords(), Vector(v.begin(), v.end())}) < 2) {
    throw InputError("directional_derivative: direction proportional to the point");
  }
  const Vector g = gradient(f, p.coords());
  Scalar acc = f.field().zero();
  for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * v[i];
  return acc;
}

Poly local_expansion(const Form& f, const ProjPoint& p) {
  require_vars(f, p.size(), "local_expansion");
  const Field field = f.field();
  const int n = f.nvars();
  const std::size_t chart = p.chart();
  std::vector<Poly> subs;
  int local = 0;
  for (int k = 0; k < n; ++k) {
    if (static_cast<std::size_t>(k) == chart) {
      subs.push_back(Poly::constant(field, n - 1, field.one()));
      continue;
    }
    subs.push_back(Poly::constant(field, n - 1, p[static_cast<std::size_t>(k)]) +
                   Poly::variable(field, n - 1, local++));
  }
  return substitute(f, subs);
}

int multiplicity_at(const Form& f, const ProjPoint& p) {
  if (f.is_zero()) throw UndefinedError("multiplicity of the zero form");
  return local_expansion(f, p).min_degree();
}

la::Matrix line_frame(const ProjLine& r) {
  if (r.ambient() != 3) throw InputError("line_frame: line of P^3 expected");
  const Field field = r.field();
  std::vector<Vector> cols{r.first().coords(), r.second().coords()};
  for (auto& e : completion(cols, 4)) cols.push_back(std::move(e));
  la::Matrix a(field, 4, 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) a.set(i, j, cols[j][i]);
  return a;
}

int multiplicity_along_line(const Form& f, const ProjLine& r) {
  if (f.is_zero()) throw UndefinedError("multiplicity of the zero form");
  require_vars(f, 4, "multiplicity_along_line");
  const Form g = substitute_linear(f, line_frame(r));
  int best = std::numeric_limits<int>::max();
  for (const auto& [e, c] : g.terms()) best = std::min(best, e[2] + e[3]);
  return best;
}

std::pair<Vector, Vector> pencil_directions(const ProjPoint& q) {
  if (q.size() != 3) throw InputError("pencil_directions: point of P^2 expected");
  const std::vector<Vector> rows{q.coords()};
  auto comp = completion(rows, 3);
  return {comp[0], comp[1]};
}

Vector combine(std::span<const Scalar> p, const Scalar& s, std::span<const Scalar> v) {
  Vector out;
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[i] + s * v[i]);
  return out;
}

Vector restrict_to_line(const Form& f, const ProjPoint& q, std::span<const Scalar> v) {
  require_vars(f, q.size(), "restrict_to_line");
  if (v.size() != q.size()) throw InputError("restrict_to_line: direction has wrong length");
  if (span_rank(std::vector<Vector>{q.coords(), Vector(v.begin(), v.end())}) < 2) {
    throw InputError("restrict_to_line: degenerate direction (line undefined)");
  }
  const Field field = f.field();
  std::vector<Poly> subs;
  for (std::size_t k = 0; k < q.size(); ++k) {
    subs.push_back(Poly::constant(field, 1, q[k]) + Poly::variable(field, 1, 0).scaled(v[k]));
  }
  const Poly r = substitute(f, subs);
  Vector out(static_cast<std::size_t>(f.degree()) + 1, field.zero());
  for (const auto& [e, c] : r.terms()) out[e[0]] = c;
  return out;
}

Vector restrict_to_pencil_line(const Form& f, const ProjPoint& q, const Scalar& slope) {
  const auto [a, b] = pencil_directions(q);
  Vector v;
  for (std::size_t i = 0; i < 3; ++i) v.push_back(a[i] + slope * b[i]);
  return restrict_to_line(f, q, v);
}

std::vector<la::UPoly> pencil_restriction(const Form& f, const ProjPoint& q) {
  require_vars(f, 3, "pencil_restriction");
  const Field field = f.field();
  if (!field.is_prime()) throw InputError("pencil_restriction needs a prime field");
  const auto [a, b] = pencil_directions(q);
  // variables: 0 = s, 1 = t
  const Poly s = Poly::variable(field, 2, 0);
  const Poly t = Poly::variable(field, 2, 1);
  std::vector<Poly> subs;
  for (std::size_t k = 0; k < 3; ++k) {
    subs.push_back(Poly::constant(field, 2, q[k]) + s.scaled(a[k]) + (s * t).scaled(b[k]));
  }
  const Poly r = substitute(f, subs);
  const std::uint64_t p = field.modulus();
  std::vector<std::vector<std::uint64_t>> coeffs(static_cast<std::size_t>(f.degree()) + 1);
  for (const auto& [e, c] : r.terms()) {
    auto& row = coeffs[e[0]];
    if (row.size() <= e[1]) row.resize(e[1] + 1U, 0);
    row[e[1]] = c.residue();
  }
  std::vector<la::UPoly> out;
  for (auto& row : coeffs) out.emplace_back(p, std::move(row));
  return out;
}

Vector affine_direction(const ProjPoint& q, std::span<const Scalar> v) {
  if (v.size() != q.size()) throw InputError("affine_direction: direction has wrong length");
  const std::size_t j = q.chart();
  Vector d;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (k != j) d.push_back(v[k] - q[k] * v[j]);
  if (std::all_of(d.begin(), d.end(), [](const Scalar& x) { return x.is_zero(); })) {
    throw InputError("direction proportional to the point");
  }
  return d;
}

Poly blowup_chart(const Form& f, const ProjPoint& q, std::span<const Scalar> v, int clear) {
  require_vars(f, 3, "blowup_chart");
  const Field field = f.field();
  const Vector d = affine_direction(q, v);
  const Vector w = completion(std::vector<Vector>{d}, 2).front();
  const Poly local = local_expansion(f, q);
  const Poly t = Poly::variable(field, 2, 1);
  const Poly dir0 = Poly::constant(field, 2, d[0]) + t.scaled(w[0]);
  const Poly dir1 = Poly::constant(field, 2, d[1]) + t.scaled(w[1]);
  Poly g(field, 2);
  for (const auto& [e, c] : local.terms()) {
    const int deg = e[0] + e[1];
    if (deg < clear) {
      throw InputError("blowup_chart: multiplicity " + std::to_string(deg) + " below the cleared power " +
                       std::to_string(clear));
    }
    Exponent xe{};
    xe[0] = static_cast<std::uint16_t>(deg - clear);
    Poly term(field, 2);
    term.add_term(xe, c);
    g = g + term * dir0.pow(e[0]) * dir1.pow(e[1]);
  }
  return g;
}

}  // namespace severi::forms
