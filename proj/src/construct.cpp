#include "severi/construct.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "severi/errors.hpp"
#include "severi/form_json.hpp"
#include "severi/form_ops.hpp"
#include "severi/mod_eval.hpp"
#include "severi/rng.hpp"
#include "severi/verify.hpp"

namespace severi::construct {

using conditions::FatLine;
using conditions::FatPoint;
using conditions::InfNearDouble;
using conditions::Scheme;
using conditions::SimplePoint;
using conditions::TangencyAtPoint;
using nlohmann::json;

namespace {

// Streams of the counter generator, one per kind of random choice.
enum Stream : std::uint64_t {
  kGammaStream = 0,
  kQbarStream = 1u << 20,
  kSampleStream,
  kNodeStream,
  kCheckStream,
};

Scalar random_scalar(Field f, CounterRng& rng) { return f.from_residue(rng.below(f.modulus())); }

Scalar random_nonzero(Field f, CounterRng& rng) { return f.from_residue(1 + rng.below(f.modulus() - 1)); }

Vector pencil_vector(const ProjPoint& q, const Scalar& t) {
  const auto [a, b] = forms::pencil_directions(q);
  Vector v;
  for (std::size_t i = 0; i < 3; ++i) v.push_back(a[i] + t * b[i]);
  return v;
}

struct Residual {
  la::UPoly c, b, a;  // coefficients of s^(n-3), s^(n-2), s^(n-1)
};

Residual residual(const Form& gamma, const ProjPoint& q) {
  const int m = gamma.degree() - 2;
  const auto coeffs = forms::pencil_restriction(gamma, q);
  for (int k = 0; k < m; ++k)
    if (!coeffs[static_cast<std::size_t>(k)].is_zero())
      throw InputError("tangent_lines: multiplicity at q below n - 3");
  return {coeffs[static_cast<std::size_t>(m)], coeffs[static_cast<std::size_t>(m + 1)],
          coeffs[static_cast<std::size_t>(m + 2)]};
}

la::UPoly discriminant(const Residual& r) {
  const std::uint64_t p = r.c.modulus();
  return r.b * r.b - (r.a * r.c).scaled(4 % p);
}

// The double root -B q + 2C d of the residual quadratic at slope t.
Vector double_root(const ProjPoint& q, const Vector& d, std::uint64_t bt, std::uint64_t ct, Field f) {
  const Scalar b = f.from_residue(bt), c = f.from_residue(ct);
  Vector out;
  for (std::size_t i = 0; i < 3; ++i) out.push_back(-b * q[i] + f.from_int(2) * c * d[i]);
  return out;
}

bool all_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::string census_text(const Census& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c) {
    os << (first ? "" : ", ") << k << ": " << v;
    first = false;
  }
  return os.str();
}

// A rational point of Γ on a pencil line whose slope avoids `skip`.
std::optional<ProjPoint> point_on_gamma(const Form& gamma, const ProjPoint& q, const Residual& r,
                                        const std::set<std::uint64_t>& skip, CounterRng& rng) {
  const Field f = gamma.field();
  const std::uint64_t p = f.modulus();
  for (int tries = 0; tries < 4096; ++tries) {
    const std::uint64_t t = rng.below(p);
    if (skip.count(t)) continue;
    const std::uint64_t ct = r.c(t), bt = r.b(t), at = r.a(t);
    if (ct == 0) continue;
    const auto roots = la::roots(la::UPoly(p, {ct, bt, at}));
    if (roots.empty()) continue;
    const Scalar s = f.from_residue(roots[rng.below(roots.size())]);
    const Vector d = pencil_vector(q, f.from_residue(t));
    return ProjPoint(forms::combine(q.coords(), s, d));
  }
  return std::nullopt;
}

std::set<std::uint64_t> used_slopes(const PlaneModel& m) {
  std::set<std::uint64_t> s;
  for (auto t : la::roots(m.discriminant)) s.insert(t);
  for (const auto& t : m.tangents) s.insert(t.slope);
  const auto [a, b] = forms::pencil_directions(m.q);
  for (const auto& x : m.qbar) {
    // slope of the line q x: x - x_chart q = u a + v b
    Vector rel = forms::combine(x.coords(), -x[m.q.chart()], m.q.coords());
    std::uint64_t u = 0, v = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!a[i].is_zero()) u = rel[i].residue();
      if (!b[i].is_zero()) v = rel[i].residue();
    }
    if (u != 0) s.insert(la::mul_mod(v, la::inv_mod(u, m.field.modulus()), m.field.modulus()));
  }
  return s;
}

bool proportional(const Vector& a, const Vector& b) {
  return forms::span_rank(std::vector<Vector>{a, b}) <= 1;
}

void check_ell(int n, int ell) {
  if (ell < 1 || 2 * ell > 3 * n - 4 || ell > 2 * n - 4)
    throw InputError("ell must satisfy 1 <= ell <= 2n - 4 and 2 ell <= 3n - 4");
}

}  // namespace

ProjPoint base_point(Field field) { return ProjPoint(Vector{field.zero(), field.zero(), field.one()}); }

int max_ell(int n) { return (3 * n - 4) / 2; }

TangentReport tangent_lines(const Form& gamma, const ProjPoint& q) {
  if (gamma.nvars() != 3 || gamma.degree() < 2) throw InputError("tangent_lines: plane curve of degree >= 2 expected");
  const Field f = gamma.field();
  const Residual r = residual(gamma, q);
  TangentReport out{discriminant(r), {}, {}, {}};
  if (out.discriminant.is_zero()) {
    out.excluded.push_back("discriminant vanishes identically");
    return out;
  }
  out.rational_slopes = la::roots(out.discriminant);
  for (const std::uint64_t t : out.rational_slopes) {
    const std::uint64_t ct = r.c(t), bt = r.b(t);
    if (ct == 0) {
      out.excluded.push_back("slope " + std::to_string(t) + ": tangent at q");
      continue;
    }
    const Vector d = pencil_vector(q, f.from_residue(t));
    const ProjPoint pt(double_root(q, d, bt, ct, f));
    out.tangents.push_back(Tangent{t, ProjLine::through(q, ProjPoint(d)), pt, d});
  }
  return out;
}

std::optional<std::string> gamma_defect(const Form& gamma, const ProjPoint& q) {
  const int n = gamma.degree() + 1;
  if (gamma.is_zero() || forms::multiplicity_at(gamma, q) != n - 3) return "multiplicity";
  const Residual r = residual(gamma, q);
  if (r.c.degree() != n - 3 || !la::is_squarefree(r.c)) return "tangent-cone";
  if (la::gcd(r.c, r.b).degree() > 0) return "tangent-at-q";
  const la::UPoly d = discriminant(r);
  if (d.degree() != 2 * n - 4) return "discriminant-degree";
  // A singular point x != q makes the residual on the line qx a square, so x is
  // the double root over a rational root of the discriminant; the line at
  // infinity is excluded by the degree check.
  const Field f = gamma.field();
  for (const std::uint64_t t : la::roots(d)) {
    const Vector dir = pencil_vector(q, f.from_residue(t));
    const Vector x = double_root(q, dir, r.b(t), r.c(t), f);
    if (all_zero(forms::gradient(gamma, x))) return "singular-off-q";
  }
  return std::nullopt;
}

GammaDraw random_gamma(int n, Field field, std::uint64_t seed, int planted, int retries) {
  if (n < 3) throw InputError("random_gamma: n >= 3 required");
  if (!field.is_prime()) throw InputError("random_gamma: prime field required");
  if (planted < 0 || static_cast<std::uint64_t>(planted) >= field.modulus())
    throw InputError("random_gamma: bad number of planted tangents");
  const ProjPoint q = base_point(field);
  Census census;
  for (int attempt = 0; attempt < retries; ++attempt) {
    CounterRng rng(seed, kGammaStream + static_cast<std::uint64_t>(attempt));
    Scheme scheme;
    if (n > 3) scheme.push_back(FatPoint{q, n - 3});
    std::vector<std::uint64_t> slopes;
    while (static_cast<int>(slopes.size()) < planted) {
      const std::uint64_t t = rng.below(field.modulus());
      if (std::find(slopes.begin(), slopes.end(), t) == slopes.end()) slopes.push_back(t);
    }
    for (const std::uint64_t t : slopes) {
      const Vector d = pencil_vector(q, field.from_residue(t));
      scheme.push_back(TangencyAtPoint{ProjPoint(forms::combine(q.coords(), random_nonzero(field, rng), d)), d});
    }
    const auto sys = conditions::linear_system(3, n - 1, scheme, field);
    if (sys.basis.empty()) {
      ++census["empty-system"];
      continue;
    }
    Form g(field, 3, n - 1);
    for (const auto& b : sys.basis) g = g + b.scaled(random_scalar(field, rng));
    if (g.is_zero()) {
      ++census["zero"];
      continue;
    }
    if (auto why = gamma_defect(g, q)) {
      ++census[*why];
      continue;
    }
    return GammaDraw{g, q, attempt + 1, census};
  }
  throw GenerationError("random_gamma: no usable curve in " + std::to_string(retries) + " draws (" +
                        census_text(census) + ")");
}

conditions::Scheme plane_scheme(int n, const ProjPoint& q, std::span<const Tangent> tangents,
                                std::span<const ProjPoint> qbar) {
  Scheme s{FatPoint{q, n - 2}};
  for (const auto& t : tangents) s.push_back(TangencyAtPoint{t.point, t.direction});
  for (const auto& x : qbar) s.push_back(SimplePoint{x});
  return s;
}

PlaneModel build_plane_model(int n, Field field, std::uint64_t seed, std::optional<int> ell_opt, int retries) {
  if (n < 3) throw InputError("build_plane_model: n >= 3 required");
  const int ell = ell_opt.value_or(max_ell(n));
  check_ell(n, ell);
  const int k = 3 * n - 4 - 2 * ell;

  GammaDraw draw = random_gamma(n, field, seed, ell, retries);
  const TangentReport tr = tangent_lines(draw.gamma, draw.q);
  if (static_cast<int>(tr.tangents.size()) < ell)
    throw GenericityError("only " + std::to_string(tr.tangents.size()) + " rational tangents");

  PlaneModel m{n,
               field,
               seed,
               draw.gamma,
               draw.q,
               std::vector<Tangent>(tr.tangents.begin(), tr.tangents.begin() + ell),
               {},
               ell,
               k,
               tr.discriminant,
               tr.tangents.size(),
               {}};
  CounterRng rng(seed, kQbarStream);
  const Residual r = residual(m.gamma, m.q);
  std::set<std::uint64_t> skip(tr.rational_slopes.begin(), tr.rational_slopes.end());
  while (static_cast<int>(m.qbar.size()) < k) {
    auto x = point_on_gamma(m.gamma, m.q, r, skip, rng);
    if (!x) throw GenericityError("no rational point of Γ for the simple base points");
    m.qbar.push_back(*x);
    skip = used_slopes(m);
  }
  m.system = conditions::linear_system(3, n, plane_scheme(n, m.q, m.tangents, m.qbar), field);
  if (m.system.projdim() != 3) throw GenericityError("projdim(L) = " + std::to_string(m.system.projdim()));
  return m;
}

std::optional<ProjPoint> map_point(std::span<const Form> basis, std::span<const Scalar> x) {
  Vector y;
  for (const auto& b : basis) y.push_back(forms::evaluate(b, x));
  if (all_zero(y)) return std::nullopt;
  return ProjPoint(std::move(y));
}

Form implicitize(std::span<const Form> basis, int n, std::uint64_t seed, std::span<const ProjPoint> avoid) {
  if (basis.size() != 4) throw InputError("implicitize: four forms expected");
  const Field field = basis.front().field();
  if (!field.is_prime()) throw InputError("implicitize: prime field required");
  for (const auto& b : basis)
    if (b.nvars() != 3 || b.field() != field) throw InputError("implicitize: ternary forms over one field expected");
  if (n < 1) throw InputError("implicitize: positive degree expected");
  const auto monos = forms::monomial_basis(4, n);
  const std::size_t want = monos.size() + 32;

  la::Matrix rows(field, 0, monos.size());
  CounterRng rng(seed, kSampleStream);
  std::size_t tries = 0;
  while (rows.rows() < want && tries++ < 64 * want) {
    const ProjPoint x = forms::random_point(field, 3, rng);
    if (std::find(avoid.begin(), avoid.end(), x) != avoid.end()) continue;
    const auto y = map_point(basis, x.coords());
    if (!y) continue;
    std::vector<Vector> pw(4);
    for (std::size_t i = 0; i < 4; ++i) {
      pw[i].push_back(field.one());
      for (int e = 1; e <= n; ++e) pw[i].push_back(pw[i].back() * (*y)[i]);
    }
    Vector row;
    row.reserve(monos.size());
    for (const auto& e : monos) row.push_back(pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]]);
    rows.append_row(row);
  }
  if (rows.rows() < want) throw SamplingError("implicitize: too few usable samples");
  const auto ker = la::kernel_basis(rows);
  if (ker.empty()) throw SamplingError("implicitize: no form of degree " + std::to_string(n) + " vanishes on the samples");
  if (ker.size() > 1)
    throw DegreeError("implicitize: " + std::to_string(ker.size()) + "-dimensional space of degree-" +
                      std::to_string(n) + " equations; the image has lower degree");
  return Form::from_coefficients(field, 4, n, ker.front());
}

NodePrediction predicted_nodes(const PlaneModel& model, std::span<const Form> basis, std::uint64_t seed) {
  const Field f = model.field;
  CounterRng rng(seed, kNodeStream);
  const Residual res = residual(model.gamma, model.q);
  const auto skip = used_slopes(model);

  // r from two points of Γ with distinct images
  std::optional<ProjLine> r;
  for (int tries = 0; tries < 64 && !r; ++tries) {
    const auto a = point_on_gamma(model.gamma, model.q, res, skip, rng);
    const auto b = point_on_gamma(model.gamma, model.q, res, skip, rng);
    if (!a || !b) break;
    const auto fa = map_point(basis, a->coords()), fb = map_point(basis, b->coords());
    if (fa && fb && !(*fa == *fb)) r = ProjLine::through(*fa, *fb);
  }
  if (!r) throw GenericityError("image of Γ is not a line through two distinct sampled points");

  NodePrediction out{*r, {}, {}};
  for (const auto& t : model.tangents) {
    // exceptional curve over q_i: derivatives in two transversal directions
    const auto comp = forms::completion(std::vector<Vector>{t.point.coords(), t.direction}, 3);
    const Vector w1 = comp.front();
    const Vector w2 = forms::combine(forms::combine(w1, random_nonzero(f, rng), t.direction), random_scalar(f, rng),
                                     t.point.coords());
    Vector c1, c2;
    for (const auto& b : basis) {
      c1.push_back(forms::directional_derivative(b, t.point, w1));
      c2.push_back(forms::directional_derivative(b, t.point, w2));
    }
    if (all_zero(c1) || all_zero(c2)) throw GenericityError("basis derivatives vanish at a tangency point");
    if (!proportional(c1, c2)) throw GenericityError("node over q_i depends on the transversal direction");

    // the contracted line r_i: two points off q and q_i
    std::vector<ProjPoint> images;
    while (images.size() < 2) {
      const ProjPoint x(forms::combine(model.q.coords(), random_nonzero(f, rng), t.direction));
      if (x == t.point) continue;
      const auto y = map_point(basis, x.coords());
      if (!y) throw GenericityError("base point on a tangent line");
      images.push_back(*y);
    }
    if (!(images[0] == images[1])) throw GenericityError("tangent line is not contracted");

    out.nodes.emplace_back(c1);
    out.nodes.push_back(images[0]);
    const auto& a = out.nodes[out.nodes.size() - 2];
    if (a == images[0]) throw GenericityError("the two nodes of a pair coincide");
    out.node_lines.push_back(ProjLine::through(a, images[0]));
  }
  return out;
}

bool SurfaceModel::all_pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::uint64_t sub_seed(std::uint64_t seed, int attempt) {
  return attempt == 0 ? seed : CounterRng::mix(seed ^ CounterRng::mix(static_cast<std::uint64_t>(attempt)));
}

std::vector<Check> check_surface(const SurfaceModel& m) {
  std::vector<Check> out;
  auto add = [&](std::string id, bool pass, json witness) { out.push_back({std::move(id), pass, std::move(witness)}); };
  const int n = m.n;
  const Field f = m.field;
  const PlaneModel& P = m.plane;
  const auto& basis = P.system.basis;
  const auto& F = m.surface;
  CounterRng rng(m.sub_seed, kCheckStream);

  const bool shape_ok = F.nvars() == 4 && F.degree() == n && !F.is_zero() && basis.size() == 4 &&
                        P.tangents.size() == static_cast<std::size_t>(P.ell) && P.n == n;
  add("numerology",
      shape_ok && 2 * P.ell + static_cast<int>(P.qbar.size()) == 3 * n - 4 &&
          m.nodes.size() == 2 * static_cast<std::size_t>(P.ell) &&
          m.node_lines.size() == static_cast<std::size_t>(P.ell),
      {{"ell", P.ell}, {"simple_points", P.qbar.size()}, {"nodes", m.nodes.size()}, {"expected_nodes", 3 * n - 4 - static_cast<int>(P.qbar.size())}});
  if (!shape_ok) return out;

  {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      const auto& x = m.nodes[i];
      if (!forms::evaluate(F, x).is_zero() || !all_zero(forms::gradient(F, x.coords()))) bad.push_back(i);
    }
    add("node-gradient", bad.empty(), {{"failing_nodes", bad}});
  }
  {
    std::vector<std::size_t> ranks;
    bool ok = true;
    for (const auto& x : m.nodes) {
      const auto rep = verify::classify_double_point(F, x);
      ranks.push_back(rep.hessian_rank);
      ok = ok && rep.verdict == verify::Verdict::A1Node;
    }
    add("node-hessian", ok, {{"hessian_ranks", ranks}});
  }
  {
    bool off = true, distinct = true;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      off = off && !m.r.contains(m.nodes[i]);
      for (std::size_t j = 0; j < i; ++j) distinct = distinct && !(m.nodes[i] == m.nodes[j]);
    }
    add("node-off-r", off, json::object());
    add("node-distinct", distinct, json::object());
  }

  {
    const auto why = gamma_defect(P.gamma, P.q);
    add("gamma", P.gamma.nvars() == 3 && P.gamma.degree() == n - 1 && !why,
        {{"multiplicity_at_q", P.gamma.is_zero() ? -1 : forms::multiplicity_at(P.gamma, P.q)},
         {"defect", why ? *why : "none"}});
  }
  const TangentReport tr = tangent_lines(P.gamma, P.q);
  add("discriminant-degree", tr.discriminant.degree() == 2 * n - 4 && tr.discriminant == P.discriminant,
      {{"degree", tr.discriminant.degree()}, {"expected", 2 * n - 4}, {"rational_roots", tr.rational_slopes.size()}});
  {
    bool ok = true;
    for (const auto& t : P.tangents) {
      const bool listed = std::any_of(tr.tangents.begin(), tr.tangents.end(), [&](const Tangent& u) {
        return u.slope == t.slope && u.point == t.point && u.line == t.line;
      });
      ok = ok && listed && t.line.contains(P.q) && t.line.contains(t.point) && !(t.point == P.q) &&
           forms::evaluate(P.gamma, t.point).is_zero() &&
           forms::directional_derivative(P.gamma, t.point, t.direction).is_zero() &&
           !all_zero(forms::gradient(P.gamma, t.point.coords()));
    }
    add("tangency", ok, {{"tangents", P.tangents.size()}, {"rational_tangents", tr.tangents.size()}});
  }
  {
    const auto sys = conditions::linear_system(3, n, plane_scheme(n, P.q, P.tangents, P.qbar), f);
    add("plane-system", sys.projdim() == 3 && sys.basis == basis && conditions::verify_system(sys),
        {{"projdim", sys.projdim()}, {"rank", sys.rank}});
  }
  {
    int zero = 0;
    for (int i = 0; i < 5; ++i) {
      const auto a = forms::random_point(f, 4, rng), b = forms::random_point(f, 4, rng);
      if (a == b) continue;
      if (forms::multiplicity_along_line(F, ProjLine::through(a, b)) == 0) ++zero;
    }
    add("degree-exact", zero == 5, {{"random_lines", 5}, {"not_contained", zero}});
  }
  {
    std::vector<ProjPoint> avoid{P.q};
    for (const auto& t : P.tangents) avoid.push_back(t.point);
    for (const auto& x : P.qbar) avoid.push_back(x);
    bool ok = false;
    std::string note;
    try {
      const Form g = implicitize(basis, n, m.sub_seed, avoid);
      ok = proportional(g.coefficients(), F.coefficients());
    } catch (const Error& e) {
      note = e.what();
    }
    add("implicit-equation", ok, {{"kernel_dim", ok ? 1 : 0}, {"note", note}});
  }
  {
    json w;
    bool ok = true;
    if (n <= 5) {
      ok = forms::compose(F, basis).is_zero();
      w["method"] = "exact";
    } else {
      const forms::ModEvaluator fe(F);
      std::vector<forms::ModEvaluator> be;
      for (const auto& b : basis) be.emplace_back(b);
      auto value_at = [&](const std::vector<std::uint64_t>& x) {
        std::vector<std::uint64_t> y;
        for (const auto& e : be) y.push_back(e(x));
        return fe(y);
      };
      for (int i = 0; i < 500; ++i) {
        const auto x = forms::residues(forms::random_point(f, 3, rng).coords());
        ok = ok && value_at(x) == 0;
      }
      w["method"] = "sampled";
      w["samples"] = 500;
      // F(basis) has degree n^2; vanishing on a (n^2 + 1)^2 affine grid makes it zero.
      const std::uint64_t side = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) + 1;
      if (side <= f.modulus()) {
        bool grid = true;
        for (std::uint64_t a = 0; a < side && grid; ++a)
          for (std::uint64_t b = 0; b < side && grid; ++b) grid = value_at({a, b, 1}) == 0;
        w["grid_certificate"] = grid;
        ok = ok && grid;
      }
    }
    add("substitution", ok, w);
  }
  const int mult_r = forms::multiplicity_along_line(F, m.r);
  add("mult-r", mult_r == n - 2, {{"multiplicity", mult_r}, {"expected", n - 2}});
  {
    int equal = 0;
    for (int i = 0; i < 10; ++i) {
      const ProjPoint x = m.r.point_at(f.one(), random_scalar(f, rng));
      if (forms::multiplicity_at(F, x) == n - 2) ++equal;
    }
    add("mult-r-points", equal >= 8, {{"points", 10}, {"multiplicity_n_minus_2", equal}});
  }
  {
    bool ok = true;
    std::string note;
    try {
      const NodePrediction pred = predicted_nodes(P, basis, m.sub_seed);
      ok = pred.r == m.r && pred.nodes == m.nodes && pred.node_lines == m.node_lines;
    } catch (const Error& e) {
      ok = false;
      note = e.what();
    }
    add("node-prediction", ok, {{"note", note}});
  }
  {
    bool ok = true;
    for (std::size_t i = 0; i < m.node_lines.size(); ++i)
      ok = ok && m.node_lines[i].contains(m.nodes[2 * i]) && m.node_lines[i].contains(m.nodes[2 * i + 1]);
    add("pairs-collinear", ok, json::object());
  }
  {
    bool ok = true;
    for (const auto& s : m.node_lines)
      for (int t = 0; t <= n; ++t) ok = ok && forms::evaluate(F, s.point_at(f.one(), f.from_int(t))).is_zero();
    add("s-in-surface", ok, {{"points_per_line", n + 1}});
  }
  {
    bool ok = true;
    for (std::size_t i = 0; i < m.node_lines.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) ok = ok && !forms::lines_meet(m.node_lines[i], m.node_lines[j]);
    add("s-disjoint", ok, json::object());
  }
  {
    bool ok = true;
    std::vector<ProjPoint> hits;
    for (const auto& s : m.node_lines) {
      if (!forms::lines_meet(s, m.r)) {
        ok = false;
        continue;
      }
      const ProjPoint x = forms::meeting_point(s, m.r);
      ok = ok && std::find(hits.begin(), hits.end(), x) == hits.end();
      hits.push_back(x);
    }
    add("s-meet-r", ok, {{"distinct_points", hits.size()}});
  }
  {
    const auto S = conditions::linear_system(4, n, {FatLine{m.r, n - 2}}, f);
    const std::size_t defect = conditions::independence_defect(S, m.nodes);
    add("independence", defect == 0 && S.projdim() == 6 * n - 3,
        {{"projdim_S", S.projdim()}, {"expected_projdim_S", 6 * n - 3}, {"nodes", m.nodes.size()}, {"defect", defect}});
  }
  return out;
}

SurfaceModel build_sigma(int n, Field field, std::uint64_t seed, const BuildOptions& options) {
  if (n < 3) throw InputError("build_sigma: n >= 3 required");
  if (!field.is_prime()) throw InputError("build_sigma: prime field required");
  check_ell(n, options.ell.value_or(max_ell(n)));
  Census census;
  for (int attempt = 0; attempt < options.retries; ++attempt) {
    const std::uint64_t s = sub_seed(seed, attempt);
    try {
      PlaneModel plane = build_plane_model(n, field, s, options.ell, options.retries);
      std::vector<ProjPoint> avoid{plane.q};
      for (const auto& t : plane.tangents) avoid.push_back(t.point);
      for (const auto& x : plane.qbar) avoid.push_back(x);
      const Form F = implicitize(plane.system.basis, n, s, avoid);
      const NodePrediction pred = predicted_nodes(plane, plane.system.basis, s);
      SurfaceModel m{n, field, seed, s, attempt, F, pred.r, pred.nodes, pred.node_lines, std::move(plane), {}, census};
      m.checks = check_surface(m);
      if (m.all_pass()) return m;
      for (const auto& c : m.checks)
        if (!c.pass) ++census["check:" + c.id];
    } catch (const GenericityError&) {
      ++census["genericity"];
    } catch (const SamplingError&) {
      ++census["sampling"];
    } catch (const DegreeError&) {
      ++census["degree"];
    } catch (const GenerationError&) {
      ++census["gamma"];
    }
  }
  throw GenerationError("build_sigma: retry budget of " + std::to_string(options.retries) + " exhausted (" +
                        census_text(census) + ")");
}

namespace {

json tangent_to_json(const Tangent& t) {
  return {{"slope", t.slope},
          {"line", forms::line_to_json(t.line)},
          {"point", forms::point_to_json(t.point)},
          {"direction", forms::vector_to_json(t.direction)}};
}

Tangent tangent_from_json(const json& j, Field f) {
  return Tangent{j.at("slope").get<std::uint64_t>(), forms::line_from_json(j.at("line"), f),
                 forms::point_from_json(j.at("point"), f), forms::vector_from_json(j.at("direction"), f)};
}

template <class Fn>
auto guarded(const char* what, Fn fn) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json plane_to_json(const PlaneModel& m) {
  json tangents = json::array(), qbar = json::array(), basis = json::array();
  for (const auto& t : m.tangents) tangents.push_back(tangent_to_json(t));
  for (const auto& x : m.qbar) qbar.push_back(forms::point_to_json(x));
  for (const auto& b : m.system.basis) basis.push_back(forms::form_to_json(b));
  return {{"n", m.n},
          {"field", forms::field_to_json(m.field)},
          {"seed", m.seed},
          {"gamma", forms::form_to_json(m.gamma)},
          {"q", forms::point_to_json(m.q)},
          {"ell", m.ell},
          {"eps", m.eps},
          {"tangents", tangents},
          {"qbar", qbar},
          {"discriminant", m.discriminant.coeffs()},
          {"rational_tangents", m.rational_tangents},
          {"scheme", conditions::scheme_to_json(m.system.scheme)},
          {"rank", m.system.rank},
          {"basis", basis}};
}

PlaneModel plane_from_json(const json& j) {
  return guarded("plane model", [&] {
    const Field f = forms::field_from_json(j.at("field"));
    if (!f.is_prime()) throw FormatError("plane model must live over a prime field");
    PlaneModel m{j.at("n").get<int>(),
                 f,
                 j.at("seed").get<std::uint64_t>(),
                 forms::form_from_json(j.at("gamma")),
                 forms::point_from_json(j.at("q"), f),
                 {},
                 {},
                 j.at("ell").get<int>(),
                 j.at("eps").get<int>(),
                 la::UPoly(f.modulus(), j.at("discriminant").get<std::vector<std::uint64_t>>()),
                 j.at("rational_tangents").get<std::size_t>(),
                 {}};
    for (const auto& t : j.at("tangents")) m.tangents.push_back(tangent_from_json(t, f));
    for (const auto& x : j.at("qbar")) m.qbar.push_back(forms::point_from_json(x, f));
    m.system.nvars = 3;
    m.system.degree = m.n;
    m.system.scheme = conditions::scheme_from_json(j.at("scheme"), f);
    m.system.rank = j.at("rank").get<std::size_t>();
    for (const auto& b : j.at("basis")) m.system.basis.push_back(forms::form_from_json(b));
    if (m.gamma.field() != f) throw FormatError("Γ over the wrong field");
    for (const auto& b : m.system.basis)
      if (b.field() != f || b.nvars() != 3 || b.degree() != m.n) throw FormatError("basis form has the wrong shape");
    return m;
  });
}

json checks_to_json(std::span<const Check> checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"id", c.id}, {"pass", c.pass}, {"witness", c.witness}});
  return out;
}

json bundle_to_json(const SurfaceModel& m) {
  json nodes = json::array(), lines = json::array();
  for (const auto& x : m.nodes) nodes.push_back(forms::point_to_json(x));
  for (const auto& s : m.node_lines) lines.push_back(forms::line_to_json(s));
  return {{"format", "severilab-surface"},
          {"version", 1},
          {"n", m.n},
          {"field", forms::field_to_json(m.field)},
          {"seed", m.seed},
          {"sub_seed", m.sub_seed},
          {"attempt", m.attempt},
          {"surface", forms::form_to_json(m.surface)},
          {"line_r", forms::line_to_json(m.r)},
          {"nodes", nodes},
          {"node_lines", lines},
          {"plane_model", plane_to_json(m.plane)},
          {"checks", checks_to_json(m.checks)},
          {"census", m.census}};
}

SurfaceModel bundle_from_json(const json& j) {
  return guarded("bundle", [&] {
    if (j.at("format") != "severilab-surface") throw FormatError("not a severilab surface bundle");
    const Field f = forms::field_from_json(j.at("field"));
    if (!f.is_prime()) throw FormatError("bundle must live over a prime field");
    SurfaceModel m{j.at("n").get<int>(),
                   f,
                   j.at("seed").get<std::uint64_t>(),
                   j.at("sub_seed").get<std::uint64_t>(),
                   j.at("attempt").get<int>(),
                   forms::form_from_json(j.at("surface")),
                   forms::line_from_json(j.at("line_r"), f),
                   {},
                   {},
                   plane_from_json(j.at("plane_model")),
                   {},
                   j.at("census").get<Census>()};
    if (m.surface.field() != f || m.plane.field != f) throw FormatError("mixed fields in bundle");
    if (m.n < 3) throw FormatError("n must be >= 3");
    for (const auto& x : j.at("nodes")) m.nodes.push_back(forms::point_from_json(x, f));
    for (const auto& s : j.at("node_lines")) m.node_lines.push_back(forms::line_from_json(s, f));
    for (const auto& c : j.at("checks"))
      m.checks.push_back({c.at("id").get<std::string>(), c.at("pass").get<bool>(), c.at("witness")});
    if (m.r.ambient() != 3) throw FormatError("r must be a line of P^3");
    for (const auto& x : m.nodes)
      if (x.size() != 4) throw FormatError("nodes must be points of P^3");
    return m;
  });
}

AuxiliaryDims auxiliary_systems(const PlaneModel& model) {
  const int n = model.n, ell = model.ell;
  const Field f = model.field;
  Scheme m{FatPoint{model.q, 3 * n - 6}}, nn{FatPoint{model.q, 3 * n - 6 - ell}}, p{FatPoint{model.q, 3 * n - 6 - ell}};
  for (const auto& t : model.tangents) {
    m.push_back(FatPoint{t.point, 2});
    m.push_back(InfNearDouble{t.point, t.direction});
    nn.push_back(TangencyAtPoint{t.point, t.direction});
    p.push_back(FatPoint{t.point, 2});
  }
  for (const auto& x : model.qbar) {
    m.push_back(FatPoint{x, 2});
    nn.push_back(FatPoint{x, 2});
    p.push_back(FatPoint{x, 2});
  }
  return {conditions::linear_system(3, 3 * n - 2, m, f).projdim(),
          conditions::linear_system(3, 3 * n - 2 - ell, nn, f).projdim(),
          conditions::linear_system(3, 3 * n - 2 - ell, p, f).projdim(),
          6 * n - 4,
          6 * n - 4 - ell,
          6 * n - 4 - 2 * ell};
}

}  // namespace severi::construct
