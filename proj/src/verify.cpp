#include "severi/verify.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "severi/conditions.hpp"
#include "severi/construct.hpp"
#include "severi/errors.hpp"
#include "severi/form_json.hpp"
#include "severi/form_ops.hpp"
#include "severi/mod_eval.hpp"
#include "severi/rng.hpp"

namespace severi::verify {

using forms::Exponent;
using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::A1Node:
      return "A1-node";
    case Verdict::WorseSingularity:
      return "worse-singularity";
    case Verdict::Smooth:
      return "smooth";
  }
  return "?";
}

json NodeReport::to_json() const {
  return {{"point", forms::point_to_json(point)},
          {"value", value.to_string()},
          {"gradient", forms::vector_to_json(gradient)},
          {"hessian_rank", hessian_rank},
          {"verdict", verify::to_string(verdict)}};
}

NodeReport classify_double_point(const Form& f, const ProjPoint& p) {
  if (f.is_zero()) throw InputError("classify_double_point: zero form");
  if (static_cast<std::size_t>(f.nvars()) != p.size()) throw InputError("classify_double_point: dimension mismatch");
  const Field field = f.field();
  NodeReport rep{p, forms::evaluate(f, p), forms::gradient(f, p.coords()), 0, Verdict::Smooth};

  const forms::Poly local = forms::local_expansion(f, p);
  const std::size_t k = static_cast<std::size_t>(local.nvars());
  la::Matrix h(field, k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      Exponent e{};
      ++e[i];
      ++e[j];
      Scalar c = local.coefficient(e);
      if (i == j) c = c * field.from_int(2);
      h.set(i, j, c);
      h.set(j, i, c);
    }
  rep.hessian_rank = la::rank(h);

  const bool singular = rep.value.is_zero() &&
                        std::all_of(rep.gradient.begin(), rep.gradient.end(), [](const Scalar& s) { return s.is_zero(); });
  if (singular) rep.verdict = rep.hessian_rank == k ? Verdict::A1Node : Verdict::WorseSingularity;
  return rep;
}

std::vector<ProjPoint> singular_scan(const Form& f, unsigned threads) {
  const Field field = f.field();
  if (!field.is_prime()) throw InputError("singular_scan: prime field required");
  if (field.modulus() > kMaxScanPrime)
    throw RefusedError("singular_scan: p = " + std::to_string(field.modulus()) + " exceeds " +
                       std::to_string(kMaxScanPrime));
  if (f.nvars() != 4) throw InputError("singular_scan: surface in P^3 expected");
  const std::uint64_t p = field.modulus();

  std::vector<forms::ModEvaluator> evals;
  for (int i = 0; i < 4; ++i) evals.emplace_back(f.derivative(i));
  evals.emplace_back(f);

  // Slice s < p: chart 0 with x1 = s; then charts 1, 2, 3 whole.
  const std::size_t slices = static_cast<std::size_t>(p) + 3;
  std::vector<std::vector<std::array<std::uint64_t, 4>>> found(slices);
  auto run_slice = [&](std::size_t s) {
    std::array<std::uint64_t, 4> x{};
    auto test = [&]() {
      for (const auto& e : evals)
        if (e(x) != 0) return;
      found[s].push_back(x);
    };
    if (s < p) {
      x = {1, s, 0, 0};
      for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b) {
          x[2] = a;
          x[3] = b;
          test();
        }
    } else if (s == p) {
      for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b) {
          x = {0, 1, a, b};
          test();
        }
    } else if (s == p + 1) {
      for (std::uint64_t a = 0; a < p; ++a) {
        x = {0, 0, 1, a};
        test();
      }
    } else {
      x = {0, 0, 0, 1};
      test();
    }
  };

  unsigned nthreads = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(slices));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < slices; s = next++) run_slice(s);
    });
  for (auto& t : pool) t.join();

  std::vector<ProjPoint> out;
  for (const auto& slice : found)
    for (const auto& x : slice) {
      Vector v;
      for (auto c : x) v.push_back(field.from_residue(c));
      out.emplace_back(std::move(v));
    }
  return out;
}

Regularity severi_regular(const Form& f, std::span<const ProjPoint> nodes, int d) {
  if (d < 0) throw InputError("severi_regular: negative degree");
  if (nodes.empty()) return {0, true};
  const auto monos = forms::monomial_basis(f.nvars(), d);
  la::Matrix m(nodes.front().field(), 0, monos.size());
  for (const auto& x : nodes) {
    if (static_cast<int>(x.size()) != f.nvars()) throw InputError("severi_regular: dimension mismatch");
    Vector row;
    for (const auto& e : monos) row.push_back(forms::evaluate(Form::monomial(x.field(), f.nvars(), e, x.field().one()), x));
    m.append_row(row);
  }
  const std::size_t r = la::rank(m);
  return {r, r == nodes.size()};
}

namespace {

Form require_cubic(const Form& f) {
  if (f.nvars() != 3 || f.degree() != 3) throw InputError("determinacy_rank: ternary cubic expected");
  if (f.is_zero()) throw InputError("determinacy_rank: zero cubic");
  return f;
}

}  // namespace

Determinacy determinacy_rank(const Form& f) {
  require_cubic(f);
  const Field field = f.field();
  const auto quadrics = forms::monomial_basis(3, 2);
  const auto quartics = forms::monomial_basis(3, 4);
  la::Matrix m(field, quartics.size(), 3 * quadrics.size());
  for (int i = 0; i < 3; ++i) {
    const Form g = f.derivative(i);
    for (std::size_t k = 0; k < quadrics.size(); ++k) {
      const Form prod = Form::monomial(field, 3, quadrics[k], field.one()) * g;
      const std::size_t col = static_cast<std::size_t>(i) * quadrics.size() + k;
      for (const auto& [e, c] : prod.terms()) m.set(forms::monomial_index(3, e), col, c);
    }
  }
  Determinacy out{la::rank(m), 0, m, la::kernel_basis(m)};
  out.kernel_dim = out.kernel.size();
  return out;
}

std::array<Vector, 3> koszul_vectors(const Form& f) {
  require_cubic(f);
  const Field field = f.field();
  const Vector zero(6, field.zero());
  auto neg = [&](const Vector& v) {
    Vector o;
    for (const auto& s : v) o.push_back(-s);
    return o;
  };
  auto cat = [](const Vector& a, const Vector& b, const Vector& c) {
    Vector o = a;
    o.insert(o.end(), b.begin(), b.end());
    o.insert(o.end(), c.begin(), c.end());
    return o;
  };
  const Vector fx = f.derivative(0).coefficients(), fy = f.derivative(1).coefficients(),
               fz = f.derivative(2).coefficients();
  return {cat(fy, neg(fx), zero), cat(fz, zero, neg(fx)), cat(zero, fz, neg(fy))};
}

bool CayleyReport::pass() const {
  const bool nodes_ok = node_verdicts.size() == 4 &&
                        std::all_of(node_verdicts.begin(), node_verdicts.end(), [](const std::string& v) { return v == "A1-node"; });
  return system_projdim == 3 && nodes_ok && triangle_coplanar && triangle_not_concurrent && triangle_avoids_nodes &&
         triangle_on_surface && seven_point_rank == 7 && restriction_projdim == 9 && regular_d3.independent &&
         regular_d2.independent;
}

json CayleyReport::to_json() const {
  json lines_j = json::array(), verts = json::array(), nodes_j = json::array(), tri = json::array(), tv = json::array();
  for (const auto& l : lines) lines_j.push_back(forms::vector_to_json(l));
  for (const auto& v : vertices) verts.push_back(forms::point_to_json(v));
  for (const auto& v : nodes) nodes_j.push_back(forms::point_to_json(v));
  for (const auto& t : triangle) tri.push_back(forms::line_to_json(t));
  for (const auto& v : triangle_vertices) tv.push_back(forms::point_to_json(v));
  return {{"seed", seed},
          {"sub_seed", sub_seed},
          {"attempts", attempts},
          {"plane_lines", lines_j},
          {"vertices", verts},
          {"system_projdim", system_projdim},
          {"cubic", forms::form_to_json(cubic)},
          {"nodes", nodes_j},
          {"node_verdicts", node_verdicts},
          {"triangle", tri},
          {"triangle_vertices", tv},
          {"triangle_coplanar", triangle_coplanar},
          {"triangle_not_concurrent", triangle_not_concurrent},
          {"triangle_avoids_nodes", triangle_avoids_nodes},
          {"triangle_on_surface", triangle_on_surface},
          {"seven_point_rank", seven_point_rank},
          {"restriction_projdim", restriction_projdim},
          {"regular_d3", {{"rank", regular_d3.rank}, {"independent", regular_d3.independent}}},
          {"regular_d2", {{"rank", regular_d2.rank}, {"independent", regular_d2.independent}}},
          {"retries", retries},
          {"pass", pass()}};
}

namespace {

// Image of a plane line under the cubic system, from two points off the base locus.
std::optional<ProjLine> image_line(std::span<const Form> basis, const ProjLine& l, std::span<const ProjPoint> base,
                                   CounterRng& rng) {
  const Field f = l.field();
  std::vector<ProjPoint> imgs;
  for (int tries = 0; tries < 256 && imgs.size() < 3; ++tries) {
    const ProjPoint x = l.point_at(f.one(), f.from_residue(rng.below(f.modulus())));
    if (std::find(base.begin(), base.end(), x) != base.end()) continue;
    const auto y = construct::map_point(basis, x.coords());
    if (!y) continue;
    if (std::find(imgs.begin(), imgs.end(), *y) == imgs.end()) imgs.push_back(*y);
  }
  if (imgs.size() < 2) return std::nullopt;
  const ProjLine out = ProjLine::through(imgs[0], imgs[1]);
  for (const auto& y : imgs)
    if (!out.contains(y)) return std::nullopt;
  return out;
}

}  // namespace

CayleyReport cayley_pipeline(std::uint64_t seed, Field field, int retries) {
  if (!field.is_prime() || field.modulus() < 5) throw InputError("cayley_pipeline: prime p >= 5 required");
  std::vector<std::string> reasons;
  for (int attempt = 0; attempt < retries; ++attempt) {
    const std::uint64_t s = construct::sub_seed(seed, attempt);
    CounterRng rng(s, 0);
    CayleyReport rep{};
    rep.seed = seed;
    rep.sub_seed = s;
    rep.attempts = attempt + 1;

    std::vector<ProjLine> lines;
    for (int i = 0; i < 4; ++i) {
      const ProjPoint dual = forms::random_point(field, 3, rng);
      lines.push_back(ProjLine::from_dual(dual.coords()));
      rep.lines.push_back(dual.coords());
    }
    bool general = true;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int c = b + 1; c < 4; ++c)
          general = general && forms::span_rank(std::vector<Vector>{rep.lines[static_cast<std::size_t>(a)],
                                                                    rep.lines[static_cast<std::size_t>(b)],
                                                                    rep.lines[static_cast<std::size_t>(c)]}) == 3;
    if (!general) {
      reasons.push_back("three concurrent lines");
      continue;
    }
    const std::array<std::pair<int, int>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    conditions::Scheme scheme;
    for (const auto& [a, b] : pairs) {
      rep.vertices.push_back(forms::intersect(lines[static_cast<std::size_t>(a)], lines[static_cast<std::size_t>(b)]));
      scheme.push_back(conditions::SimplePoint{rep.vertices.back()});
    }
    const auto sys = conditions::linear_system(3, 3, scheme, field);
    rep.system_projdim = sys.projdim();
    if (sys.projdim() != 3) {
      reasons.push_back("cubic system has projdim " + std::to_string(sys.projdim()));
      continue;
    }
    try {
      rep.cubic = construct::implicitize(sys.basis, 3, s, rep.vertices);
    } catch (const Error& e) {
      reasons.push_back(e.what());
      continue;
    }

    bool ok = true;
    for (const auto& l : lines) {
      // a line through three base points is contracted
      const auto img = image_line(sys.basis, l, rep.vertices, rng);
      std::optional<ProjPoint> node;
      for (int tries = 0; tries < 64 && !node; ++tries) {
        const ProjPoint x = l.point_at(field.one(), field.from_residue(rng.below(field.modulus())));
        if (std::find(rep.vertices.begin(), rep.vertices.end(), x) == rep.vertices.end())
          node = construct::map_point(sys.basis, x.coords());
      }
      if (img || !node) {
        ok = false;
        break;
      }
      rep.nodes.push_back(*node);
      rep.node_verdicts.push_back(to_string(classify_double_point(rep.cubic, *node).verdict));
    }
    if (!ok) {
      reasons.push_back("a side of the quadrilateral is not contracted");
      continue;
    }

    // Diagonals join opposite vertices: 01|23, 02|13, 03|12.
    const std::array<std::pair<int, int>, 3> diagonals{{{0, 5}, {1, 4}, {2, 3}}};
    for (const auto& [a, b] : diagonals) {
      const ProjLine d = ProjLine::through(rep.vertices[static_cast<std::size_t>(a)], rep.vertices[static_cast<std::size_t>(b)]);
      const auto img = image_line(sys.basis, d, rep.vertices, rng);
      if (!img) {
        ok = false;
        break;
      }
      rep.triangle.push_back(*img);
    }
    if (!ok) {
      reasons.push_back("a diagonal does not map to a line");
      continue;
    }
    std::vector<Vector> span;
    for (const auto& t : rep.triangle) {
      span.push_back(t.first().coords());
      span.push_back(t.second().coords());
    }
    rep.triangle_coplanar = forms::span_rank(span) == 3;
    if (!rep.triangle_coplanar) {
      reasons.push_back("triangle lines not coplanar");
      continue;
    }
    for (const auto& [a, b] : std::array<std::pair<int, int>, 3>{{{0, 1}, {0, 2}, {1, 2}}})
      rep.triangle_vertices.push_back(forms::meeting_point(rep.triangle[static_cast<std::size_t>(a)],
                                                           rep.triangle[static_cast<std::size_t>(b)]));
    rep.triangle_not_concurrent = forms::span_rank(std::vector<Vector>{rep.triangle_vertices[0].coords(),
                                                                       rep.triangle_vertices[1].coords(),
                                                                       rep.triangle_vertices[2].coords()}) == 3;
    if (!rep.triangle_not_concurrent) {
      reasons.push_back("triangle lines concurrent");
      continue;
    }
    rep.triangle_avoids_nodes = true;
    for (const auto& x : rep.nodes) {
      std::vector<Vector> rows{rep.triangle_vertices[0].coords(), rep.triangle_vertices[1].coords(),
                               rep.triangle_vertices[2].coords(), x.coords()};
      rep.triangle_avoids_nodes = rep.triangle_avoids_nodes && forms::span_rank(rows) == 4;
    }
    if (!rep.triangle_avoids_nodes) {
      reasons.push_back("triangle plane contains a node");
      continue;
    }
    rep.triangle_on_surface = true;
    for (const auto& t : rep.triangle)
      for (int k = 0; k < 4; ++k)
        rep.triangle_on_surface =
            rep.triangle_on_surface && forms::evaluate(rep.cubic, t.point_at(field.one(), field.from_int(k))).is_zero();

    std::vector<ProjPoint> seven = rep.nodes;
    seven.insert(seven.end(), rep.triangle_vertices.begin(), rep.triangle_vertices.end());
    rep.seven_point_rank = severi_regular(rep.cubic, seven, 3).rank;

    // Cubics through the nodes restricted to the triangle's plane.
    conditions::Scheme through_nodes;
    for (const auto& x : rep.nodes) through_nodes.push_back(conditions::SimplePoint{x});
    const auto cubics = conditions::linear_system(4, 3, through_nodes, field);
    std::vector<Form> plane;
    for (std::size_t k = 0; k < 4; ++k)
      plane.push_back(Form::linear(Vector{rep.triangle_vertices[0][k], rep.triangle_vertices[1][k],
                                          rep.triangle_vertices[2][k]}));
    std::vector<Vector> restricted;
    for (const auto& g : cubics.basis) restricted.push_back(forms::compose(g, plane).coefficients());
    rep.restriction_projdim = static_cast<int>(forms::span_rank(restricted)) - 1;

    rep.regular_d3 = severi_regular(rep.cubic, rep.nodes, 3);
    rep.regular_d2 = severi_regular(rep.cubic, rep.nodes, 2);
    rep.retries = reasons;
    return rep;
  }
  std::ostringstream os;
  for (const auto& r : reasons) os << "; " << r;
  throw GenerationError("cayley_pipeline: retry budget exhausted" + os.str());
}

json FormulaTable::to_json() const {
  json j{{"n", n},   {"delta0", delta0}, {"f_n", f_n}, {"s_n", s_n},     {"ell", ell},
         {"eps", eps}, {"delta", delta},   {"codim", codim}};
  j["m"] = m ? json(*m) : json(nullptr);
  j["t_nm"] = t_nm ? json(*t_nm) : json(nullptr);
  return j;
}

FormulaTable formula_table(int n, std::optional<int> m) {
  if (n < 3) throw InputError("formula_table: n >= 3 required");
  if (m && (*m < 3 || *m > n - 1)) throw InputError("formula_table: 3 <= m <= n - 1 required");
  const long c3 = forms::binomial(n + 2, 3);
  FormulaTable t{};
  t.n = n;
  t.m = m;
  t.delta0 = c3 - 4;
  if (m) t.t_nm = forms::binomial(n + 3, 3) - forms::binomial(*m + 2, 3) + 2;
  t.f_n = c3 + n * (n - 3) / 2 + 3;
  t.s_n = t.f_n - 4;
  t.ell = (3 * n - 4) / 2;
  t.eps = (3 * n - 4) % 2;
  t.delta = 2L * t.ell;
  t.codim = forms::binomial(n + 3, 3) - 1 - t.f_n;
  return t;
}

std::string formula_csv(std::span<const FormulaTable> rows) {
  std::ostringstream os;
  os << "n,m,delta0,t_nm,f_n,s_n,ell,eps,delta,codim\n";
  for (const auto& t : rows) {
    os << t.n << ',' << (t.m ? std::to_string(*t.m) : "") << ',' << t.delta0 << ','
       << (t.t_nm ? std::to_string(*t.t_nm) : "") << ',' << t.f_n << ',' << t.s_n << ',' << t.ell << ',' << t.eps
       << ',' << t.delta << ',' << t.codim << '\n';
  }
  return os.str();
}

}  // namespace severi::verify
