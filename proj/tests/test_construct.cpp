#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "severi/construct.hpp"
#include "severi/errors.hpp"
#include "severi/form_ops.hpp"
#include "severi/picard.hpp"

using namespace severi;
using namespace severi::construct;

namespace {

const Field F = Field::prime(10007);
const Field SMALL = Field::prime(101);

oracle::Terms terms_of(const Form& f) {
  oracle::Terms t;
  for (const auto& [e, c] : f.terms())
    t.emplace_back(std::vector<int>(e.begin(), e.begin() + f.nvars()), static_cast<std::int64_t>(c.residue()));
  return t;
}

std::vector<std::int64_t> ints(const Vector& v) {
  std::vector<std::int64_t> out;
  for (const auto& s : v) out.push_back(static_cast<std::int64_t>(s.residue()));
  return out;
}

// Singular points of a plane curve other than q, by enumerating P^2(F_p).
std::size_t brute_singular_off(const Form& g, const ProjPoint& q) {
  const auto p = static_cast<std::int64_t>(g.field().modulus());
  const auto t = terms_of(g);
  const oracle::Terms d[3] = {oracle::derivative_terms(t, 0, p), oracle::derivative_terms(t, 1, p),
                              oracle::derivative_terms(t, 2, p)};
  const auto qi = ints(q.coords());
  std::size_t count = 0;
  auto test = [&](std::vector<std::int64_t> x) {
    if (x == qi) return;
    for (const auto& di : d)
      if (oracle::eval_terms(di, x, p) != 0) return;
    if (oracle::eval_terms(t, x, p) == 0) ++count;
  };
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b) test({1, a, b});
  for (std::int64_t b = 0; b < p; ++b) test({0, 1, b});
  test({0, 0, 1});
  return count;
}

Form random_form(Field f, CounterRng& rng, int nvars, int d) {
  Vector c;
  for (std::size_t i = 0; i < forms::monomial_basis(nvars, d).size(); ++i) c.push_back(f.from_residue(rng.below(f.modulus())));
  return Form::from_coefficients(f, nvars, d, c);
}

la::Matrix random_invertible(Field f, CounterRng& rng) {
  for (;;) {
    la::Matrix a(f, 3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a.set(i, j, f.from_residue(rng.below(f.modulus())));
    if (la::rank(a) == 3) return a;
  }
}

}  // namespace

TEST_CASE("random_gamma: n = 3 gives a smooth conic missing q") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = random_gamma(3, SMALL, seed);
    CHECK(g.gamma.degree() == 2);
    CHECK(forms::multiplicity_at(g.gamma, g.q) == 0);
    CHECK(g.q == ProjPoint::from_ints(SMALL, {0, 0, 1}));
    CHECK(brute_singular_off(g.gamma, g.q) == 0);
  }
}

TEST_CASE("random_gamma: quartic with an ordinary double point has genus 2") {
  const auto g = random_gamma(5, F, 11);
  CHECK(g.gamma.degree() == 4);
  CHECK(forms::multiplicity_at(g.gamma, g.q) == 2);
  CHECK_FALSE(gamma_defect(g.gamma, g.q).has_value());
  // Tangent cone: the quadratic part of the local expansion has two distinct lines.
  const auto local = forms::local_expansion(g.gamma, g.q);
  const auto q2 = local.homogeneous_part(2);
  const auto a = q2.coefficient({2, 0, 0, 0}), b = q2.coefficient({1, 1, 0, 0}), c = q2.coefficient({0, 2, 0, 0});
  CHECK_FALSE((b * b - F.from_int(4) * a * c).is_zero());
  // Adjunction on the blow-up at q against the plane genus formula.
  const auto x = picard::PicardLattice::create("plane blown up once", {"R", "E"}, {{1, 0}, {0, -1}}, {-3, 1});
  const auto cls = x->make({4, -2});
  CHECK(picard::adjunction_genus(cls) == oracle::binomial(3, 2) - oracle::binomial(2, 2));
  CHECK(picard::adjunction_genus(cls) == 2);
}

TEST_CASE("random_gamma rejects a cuspidal cubic") {
  CounterRng rng(21);
  // y^2 z - x^3 moved so that a smooth point lands on q.
  const Form cusp = [] {
    forms::Poly p(F, 3);
    p.add_term({0, 2, 1, 0}, F.one());
    p.add_term({3, 0, 0, 0}, -F.one());
    return Form(p, 3);
  }();
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    la::Matrix a = random_invertible(F, rng);
    const Scalar t = F.from_residue(1 + rng.below(F.modulus() - 1));
    a.set(0, 2, t * t);
    a.set(1, 2, t * t * t);
    a.set(2, 2, F.one());
    if (la::rank(a) != 3) continue;
    const Form g = forms::substitute_linear(cusp, a);
    const auto q = base_point(F);
    REQUIRE(forms::evaluate(g, q).is_zero());
    const auto why = gamma_defect(g, q);
    REQUIRE(why.has_value());
    if (*why == "discriminant-degree") continue;  // cusp on the line at infinity of the pencil
    CHECK(*why == "singular-off-q");
    ++checked;
  }
  CHECK(checked >= 15);
  CHECK_THROWS_AS(random_gamma(4, F, 1, 0, 0), GenerationError);
}

TEST_CASE("pencil singularity test agrees with a full scan of P^2(F_101)") {
  CounterRng rng(22);
  const auto q = base_point(SMALL);
  int compared = 0, singular = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 2;
    conditions::Scheme s{conditions::FatPoint{q, n - 3}};
    if (trial % 3 != 0) s.push_back(conditions::FatPoint{forms::random_point(SMALL, 3, rng), 2});
    const auto sys = conditions::linear_system(3, n - 1, s, SMALL);
    Form g(SMALL, 3, n - 1);
    for (const auto& b : sys.basis) g = g + b.scaled(SMALL.from_residue(rng.below(101)));
    const auto why = gamma_defect(g, q);
    if (why && *why != "singular-off-q") continue;
    const std::size_t brute = brute_singular_off(g, q);
    CHECK((why.has_value() == (brute > 0)));
    ++compared;
    if (brute > 0) ++singular;
  }
  CHECK(compared >= 20);
  CHECK(singular >= 5);
}

TEST_CASE("tangent lines: discriminant degree and exhaustive slope scan") {
  for (int n = 3; n <= 6; ++n) {
    const auto g = random_gamma(n, F, 30 + static_cast<std::uint64_t>(n), max_ell(n));
    const auto tr = tangent_lines(g.gamma, g.q);
    CHECK(tr.discriminant.degree() == 2 * n - 4);
    CHECK(static_cast<int>(tr.tangents.size()) >= max_ell(n));
    if (n > 4) continue;
    // Residual quadratic from the generic line restriction, discriminant by hand.
    std::vector<std::uint64_t> zeros;
    const auto p = static_cast<std::int64_t>(F.modulus());
    for (std::uint64_t t = 0; t < F.modulus(); ++t) {
      const auto c = forms::restrict_to_pencil_line(g.gamma, g.q, F.from_residue(t));
      const auto k = static_cast<std::size_t>(n - 3);
      const std::int64_t cc = static_cast<std::int64_t>(c[k].residue()), bb = static_cast<std::int64_t>(c[k + 1].residue()),
                         aa = static_cast<std::int64_t>(c[k + 2].residue());
      if (oracle::mod(bb * bb - 4 * oracle::mulmod(aa, cc, p), p) == 0) zeros.push_back(t);
    }
    CHECK(zeros == tr.rational_slopes);
  }
  // Conic from an external point: two tangents.
  const auto g3 = random_gamma(3, F, 5);
  CHECK(tangent_lines(g3.gamma, g3.q).discriminant.degree() == 2);
}

TEST_CASE("tangent data: Γ touches each r_i at q_i to order exactly 2") {
  for (int n = 3; n <= 7; ++n) {
    const auto g = random_gamma(n, F, 40 + static_cast<std::uint64_t>(n), max_ell(n));
    for (const auto& t : tangent_lines(g.gamma, g.q).tangents) {
      CHECK(t.line.contains(g.q));
      CHECK(t.line.contains(t.point));
      CHECK_FALSE(t.point == g.q);
      // Restriction to r_i around q_i: order of vanishing 2.
      const auto c = forms::restrict_to_line(g.gamma, t.point, g.q.coords());
      CHECK(c[0].is_zero());
      CHECK(c[1].is_zero());
      CHECK_FALSE(c[2].is_zero());
    }
  }
}

TEST_CASE("plane model: projdim of L is 3 for n = 3..8 and three seeds") {
  for (int n = 3; n <= 8; ++n)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto m = build_plane_model(n, F, seed);
      INFO("n = " << n << " seed = " << seed);
      CHECK(m.system.projdim() == 3);
      CHECK(2 * m.ell + m.eps == 3 * n - 4);
      CHECK(m.eps == (3 * n - 4) % 2);
      CHECK(m.qbar.size() == static_cast<std::size_t>(m.eps));
      CHECK(m.discriminant.degree() == 2 * n - 4);
      // affine dimension of degree-n plane forms minus the expected conditions
      const long expected_rank = oracle::binomial(n + 2, 2) - 4;
      CHECK(static_cast<long>(m.system.rank) == expected_rank);
      CHECK(conditions::verify_system(m.system));
      for (const auto& x : m.qbar) CHECK(forms::evaluate(m.gamma, x).is_zero());
      // slope order
      for (std::size_t i = 1; i < m.tangents.size(); ++i) CHECK(m.tangents[i - 1].slope < m.tangents[i].slope);
    }
  CHECK_THROWS_AS(build_plane_model(4, F, 1, 5), InputError);
  CHECK_THROWS_AS(build_plane_model(4, F, 1, 0), InputError);
  CHECK_THROWS_AS(build_plane_model(2, F, 1), InputError);
}

TEST_CASE("implicitize examples") {
  auto mono = [](int a, int b, int c) { return Form::monomial(F, 3, {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c), 0}, F.one()); };
  const std::vector<Form> quad{mono(2, 0, 0), mono(1, 1, 0), mono(0, 2, 0), mono(0, 0, 2)};
  const Form g = implicitize(quad, 2, 1);
  // y0 y2 - y1^2, up to scale
  CHECK(g.terms().size() == 2);
  CHECK(g.coefficient({1, 0, 1, 0}) == -g.coefficient({0, 2, 0, 0}));
  CounterRng rng(50);
  const auto t = terms_of(g);
  const auto p = static_cast<std::int64_t>(F.modulus());
  for (int i = 0; i < 200; ++i) {
    const auto x = ints(forms::random_point(F, 3, rng).coords());
    std::vector<std::int64_t> y;
    for (const auto& f : quad) y.push_back(oracle::eval_terms(terms_of(f), x, p));
    CHECK(oracle::eval_terms(t, y, p) == 0);
  }
  // A repeated form: the image lies in a plane.
  CHECK_THROWS_AS(implicitize(std::vector<Form>{quad[0], quad[1], quad[1], quad[3]}, 2, 1), DegreeError);
  // Four general conics give a Steiner quartic: nothing in degree 2, one equation in degree 4.
  std::vector<Form> general;
  for (int i = 0; i < 4; ++i) general.push_back(random_form(F, rng, 3, 2));
  CHECK_THROWS_AS(implicitize(general, 2, 1), SamplingError);
  CHECK(implicitize(general, 4, 1).degree() == 4);
}

TEST_CASE("predicted nodes: contracted curves and transversal independence") {
  const auto m = build_plane_model(5, F, 3);
  const auto& basis = m.system.basis;
  const auto pred = predicted_nodes(m, basis, 3);
  REQUIRE(pred.nodes.size() == 2 * static_cast<std::size_t>(m.ell));
  CounterRng rng(60);
  for (std::size_t i = 0; i < m.tangents.size(); ++i) {
    const auto& t = m.tangents[i];
    // every point of r_i off q, q_i maps to the same node
    for (int k = 0; k < 5; ++k) {
      const ProjPoint x(forms::combine(m.q.coords(), F.from_residue(1 + rng.below(10006)), t.direction));
      if (x == t.point) continue;
      CHECK(*map_point(basis, x.coords()) == pred.nodes[2 * i + 1]);
    }
    // three transversal directions
    for (const auto& w : {Vector{F.one(), F.zero(), F.zero()}, Vector{F.zero(), F.zero(), F.one()},
                          Vector{F.from_int(3), F.from_int(-7), F.from_int(2)}}) {
      if (forms::span_rank(std::vector<Vector>{t.point.coords(), t.direction, w}) < 3) continue;
      Vector c;
      for (const auto& b : basis) c.push_back(forms::directional_derivative(b, t.point, w));
      CHECK(ProjPoint(c) == pred.nodes[2 * i]);
    }
  }
}

TEST_CASE("build_sigma: nodes, line r and pair structure against oracles") {
  for (int n = 3; n <= 8; ++n) {
    const auto s = build_sigma(n, F, 1);
    INFO("n = " << n);
    CHECK(s.all_pass());
    const int ell = max_ell(n);
    CHECK(s.nodes.size() == 2 * static_cast<std::size_t>(ell));
    CHECK(s.surface.degree() == n);
    CHECK(forms::multiplicity_along_line(s.surface, s.r) == n - 2);
    const auto p = static_cast<std::int64_t>(F.modulus());
    const auto t = terms_of(s.surface);
    for (const auto& x : s.nodes) {
      const auto xi = ints(x.coords());
      CHECK(oracle::eval_terms(t, xi, p) == 0);
      for (std::size_t v = 0; v < 4; ++v) CHECK(oracle::eval_terms(oracle::derivative_terms(t, v, p), xi, p) == 0);
      // at a singular point the projective Hessian has the rank of the affine one
      CHECK(oracle::hessian_rank(t, xi, p) == 3);
    }
    // s_i pairwise skew: the four spanning points have rank 4
    for (std::size_t i = 0; i < s.node_lines.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const oracle::IntMatrix m{ints(s.nodes[2 * i].coords()), ints(s.nodes[2 * i + 1].coords()),
                                  ints(s.nodes[2 * j].coords()), ints(s.nodes[2 * j + 1].coords())};
        CHECK(oracle::rank_mod(m, p) == 4);
      }
    // each s_i meets r: its two nodes and r span only a plane
    for (std::size_t i = 0; i < s.node_lines.size(); ++i) {
      const oracle::IntMatrix m{ints(s.nodes[2 * i].coords()), ints(s.nodes[2 * i + 1].coords()),
                                ints(s.r.first().coords()), ints(s.r.second().coords())};
      CHECK(oracle::rank_mod(m, p) == 3);
    }
    // substitution identity at 200 points
    CounterRng rng(70 + static_cast<std::uint64_t>(n));
    for (int k = 0; k < 200; ++k) {
      const auto x = ints(forms::random_point(F, 3, rng).coords());
      std::vector<std::int64_t> y;
      for (const auto& b : s.plane.system.basis) y.push_back(oracle::eval_terms(terms_of(b), x, p));
      CHECK(oracle::eval_terms(t, y, p) == 0);
    }
  }
}

TEST_CASE("build_sigma: sub-maximal ell, retries and determinism") {
  const auto s = build_sigma(5, F, 4, BuildOptions{64, 3});
  CHECK(s.all_pass());
  CHECK(s.nodes.size() == 6);
  CHECK(s.plane.qbar.size() == 5);
  CHECK_THROWS_AS(build_sigma(5, F, 4, BuildOptions{64, 6}), InputError);
  CHECK_THROWS_AS(build_sigma(4, F, 1, BuildOptions{0, {}}), GenerationError);

  const auto a = bundle_to_json(build_sigma(4, F, 9)).dump();
  const auto b = bundle_to_json(build_sigma(4, F, 9)).dump();
  CHECK(a == b);
  CHECK(a != bundle_to_json(build_sigma(4, F, 10)).dump());
  CHECK(sub_seed(9, 0) == 9);
  CHECK(sub_seed(9, 1) != sub_seed(9, 2));
}

TEST_CASE("bundle round trip re-verifies from stored data") {
  const auto s = build_sigma(4, F, 2);
  const auto j = bundle_to_json(s);
  const auto back = bundle_from_json(nlohmann::json::parse(j.dump()));
  CHECK(bundle_to_json(back).dump() == j.dump());
  const auto checks = check_surface(back);
  CHECK(std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));

  // A moved node is caught.
  auto tampered = back;
  Vector c = tampered.nodes[0].coords();
  c[3] = c[3] + F.one();
  tampered.nodes[0] = ProjPoint(c);
  const auto bad = check_surface(tampered);
  const auto first = std::find_if(bad.begin(), bad.end(), [](const Check& k) { return !k.pass; });
  REQUIRE(first != bad.end());
  CHECK(first->id == "node-gradient");

  CHECK_THROWS_AS(bundle_from_json(nlohmann::json::parse(R"({"format":"other"})")), FormatError);
  auto broken = j;
  broken["nodes"][0] = {"1", "2"};
  CHECK_THROWS_AS(bundle_from_json(broken), FormatError);
}

TEST_CASE("auxiliary systems M, N, P") {
  for (int n = 3; n <= 8; ++n) {
    const auto m = build_plane_model(n, F, 1);
    const auto d = auxiliary_systems(m);
    INFO("n = " << n);
    CHECK(d.m == 6 * n - 4);
    CHECK(d.p == 3 * n + m.eps);
    CHECK(d.n >= 6 * n - 4 - m.ell);
    CHECK(d.m - 2 * m.ell == d.p);
  }
}

TEST_CASE("second prime gives the same counts") {
  const Field G = Field::prime(31013);
  for (int n = 3; n <= 6; ++n) {
    const auto s = build_sigma(n, G, 1);
    CHECK(s.all_pass());
    CHECK(s.nodes.size() == 2 * static_cast<std::size_t>(max_ell(n)));
  }
}
