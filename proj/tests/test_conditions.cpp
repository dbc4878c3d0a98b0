#include <doctest.h>

#include "oracles.hpp"
#include "severi/conditions.hpp"
#include "severi/errors.hpp"
#include "severi/form_ops.hpp"

using namespace severi;
using namespace severi::conditions;
using forms::monomial_basis;

namespace {

const Field Q = Field::rationals();
const Field F = Field::prime(10007);

Vector random_vector(Field f, CounterRng& rng, std::size_t n) {
  Vector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(f.from_residue(rng.below(f.modulus())));
  return v;
}

ProjPoint random_point(CounterRng& rng, std::size_t n) { return ProjPoint(random_vector(F, rng, n)); }

// All partial derivatives of order exactly m-1 of each monomial, evaluated at p.
// Their vanishing is equivalent to multiplicity >= m (Euler).
la::Matrix derivative_oracle(int nvars, int d, const ProjPoint& p, int m) {
  const auto cols = monomial_basis(nvars, d);
  la::Matrix out(F, 0, cols.size());
  if (m == 0) return out;
  for (const auto& a : monomial_basis(nvars, m - 1)) {
    Vector row;
    for (const auto& e : cols) {
      Form g = Form::monomial(F, nvars, e, F.one());
      for (int v = 0; v < nvars; ++v)
        for (int k = 0; k < a[static_cast<std::size_t>(v)]; ++k) g = g.derivative(v);
      row.push_back(forms::evaluate(g, p.coords()));
    }
    out.append_row(row);
  }
  return out;
}

la::Matrix stack(const la::Matrix& a, const la::Matrix& b) {
  la::Matrix out = a;
  for (std::size_t i = 0; i < b.rows(); ++i) out.append_row(b.row(i));
  return out;
}

}  // namespace

TEST_CASE("simple point on cubics in P^3 gives monomial values") {
  const auto p = ProjPoint::from_ints(Q, {1, 2, 3, 5});
  const auto m = condition_matrix(4, 3, {SimplePoint{p}}, Q);
  REQUIRE(m.rows() == 1);
  REQUIRE(m.cols() == 20);
  const auto basis = monomial_basis(4, 3);
  const std::vector<long> x{1, 2, 3, 5};
  for (std::size_t j = 0; j < 20; ++j) {
    const std::vector<int> e{basis[j][0], basis[j][1], basis[j][2], basis[j][3]};
    CHECK(m(0, j) == Q.from_int(oracle::monomial_value(e, x).get_si()));
  }
}

TEST_CASE("fat point row counts") {
  CounterRng rng(1);
  for (int n = 3; n <= 8; ++n) {
    const auto q = random_point(rng, 3);
    const auto m = condition_matrix(3, 3 * n - 2, {FatPoint{q, 3 * n - 6}}, F);
    CHECK(m.rows() == static_cast<std::size_t>(oracle::binomial(3 * n - 5, 2)));
    CHECK(la::rank(m) == m.rows());
  }
  const auto p = random_point(rng, 4);
  CHECK(condition_matrix(4, 5, {FatPoint{p, 3}}, F).rows() == 10);
  CHECK(row_count(FatPoint{p, 3}, 4, 5) == 10);
}

TEST_CASE("fat point rows span the same space as derivative conditions") {
  CounterRng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int nvars = 3 + trial % 2;
    const int d = 2 + static_cast<int>(rng.below(5));
    const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    // Points with zero coordinates exercise the chart selection.
    Vector v = random_vector(F, rng, static_cast<std::size_t>(nvars));
    if (trial % 3 == 0) v[0] = F.zero();
    const ProjPoint p(v);
    const auto rows = condition_matrix(nvars, d, {FatPoint{p, m}}, F);
    const auto oracle_rows = derivative_oracle(nvars, d, p, m);
    const std::size_t r = la::rank(rows);
    CHECK(r == la::rank(oracle_rows));
    CHECK(la::rank(stack(rows, oracle_rows)) == r);
  }
}

TEST_CASE("tangency and infinitely near rows are what the forms module checks") {
  CounterRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_point(rng, 3);
    const auto dir = random_vector(F, rng, 3);
    const Scheme s{FatPoint{p, 2}, InfNearDouble{p, dir}, TangencyAtPoint{random_point(rng, 3), random_vector(F, rng, 3)}};
    const auto sys = linear_system(3, 6, s, F);
    CHECK(sys.rank == 3 + 3 + 2);
    CHECK(sys.projdim() == 28 - 8 - 1);
    CHECK(verify_system(sys));
    // A double point at p not satisfying the infinitely near condition.
    const auto base = linear_system(3, 6, {FatPoint{p, 2}}, F);
    bool some_fail = false;
    for (const auto& f : base.basis) some_fail = some_fail || !satisfies(f, InfNearDouble{p, dir});
    CHECK(some_fail);
  }
}

TEST_CASE("infinitely near double point needs the double point first") {
  const auto p = ProjPoint::from_ints(F, {1, 2, 3});
  const Vector v{F.zero(), F.one(), F.zero()};
  CHECK_THROWS_AS(condition_matrix(3, 5, {InfNearDouble{p, v}}, F), SchemeError);
  CHECK_THROWS_AS(condition_matrix(3, 5, {InfNearDouble{p, v}, FatPoint{p, 2}}, F), SchemeError);
  CHECK_THROWS_AS(condition_matrix(3, 5, {FatPoint{p, 1}, InfNearDouble{p, v}}, F), SchemeError);
  CHECK_NOTHROW(condition_matrix(3, 5, {FatPoint{p, 3}, InfNearDouble{p, v}}, F));
}

TEST_CASE("dimension mismatches are rejected") {
  const auto p3 = ProjPoint::from_ints(F, {1, 2, 3});
  CHECK_THROWS_AS(condition_matrix(4, 2, {SimplePoint{p3}}, F), InputError);
  CHECK_THROWS_AS(condition_matrix(3, 2, {SimplePoint{ProjPoint::from_ints(Q, {1, 2, 3})}}, F), FieldMismatch);
  const auto r = forms::ProjLine::through(ProjPoint::from_ints(F, {1, 0, 0, 0}), ProjPoint::from_ints(F, {0, 1, 0, 0}));
  CHECK_THROWS_AS(condition_matrix(3, 2, {FatLine{r, 1}}, F), InputError);
}

TEST_CASE("fat line on the coordinate line counts monomials") {
  const auto r = forms::ProjLine::through(ProjPoint::from_ints(F, {1, 0, 0, 0}), ProjPoint::from_ints(F, {0, 1, 0, 0}));
  for (int d = 1; d <= 7; ++d)
    for (int m = 0; m <= d + 1; ++m) {
      const auto sys = linear_system(4, d, {FatLine{r, m}}, F);
      std::size_t expected = 0;
      for (const auto& e : oracle::exponents(4, d))
        if (e[2] + e[3] >= m) ++expected;
      CHECK(sys.basis.size() == expected);
      CHECK(row_count(FatLine{r, m}, 4, d) + expected == monomial_basis(4, d).size());
    }
}

TEST_CASE("fat line along a general line") {
  CounterRng rng(4);
  for (int n = 3; n <= 6; ++n) {
    const auto r = forms::ProjLine::through(random_point(rng, 4), random_point(rng, 4));
    const auto sys = linear_system(4, n, {FatLine{r, n - 2}}, F);
    // (n-1)*3 + n*2 + (n+1) affine monomials of (x2,x3)-degree >= n-2.
    CHECK(sys.projdim() == 6 * n - 3);
    CHECK(verify_system(sys));
    for (const auto& f : sys.basis) CHECK(forms::multiplicity_along_line(f, r) >= n - 2);
  }
}

TEST_CASE("projdim bookkeeping and monotonicity") {
  CounterRng rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const int nvars = 3 + trial % 2;
    const int d = 3 + static_cast<int>(rng.below(3));
    Scheme s;
    int prev = static_cast<int>(monomial_basis(nvars, d).size()) - 1;
    for (int k = 0; k < 6; ++k) {
      const auto p = random_point(rng, static_cast<std::size_t>(nvars));
      const bool simple = rng.below(2) == 0;
      if (simple) {
        s.push_back(SimplePoint{p});
      } else {
        s.push_back(FatPoint{p, 1 + static_cast<int>(rng.below(2))});
      }
      const auto sys = linear_system(nvars, d, s, F);
      const auto m = condition_matrix(nvars, d, s, F);
      CHECK(sys.projdim() == static_cast<int>(m.cols()) - static_cast<int>(la::rank(m)) - 1);
      CHECK(sys.projdim() <= prev);
      if (simple) CHECK(prev - sys.projdim() <= 1);
      CHECK(verify_system(sys));
      prev = sys.projdim();
    }
  }
}

TEST_CASE("independence defect") {
  const std::vector<ProjPoint> cayley{
      ProjPoint::from_ints(Q, {1, 0, 0, 0}),  ProjPoint::from_ints(Q, {0, 1, 0, 0}),
      ProjPoint::from_ints(Q, {0, 0, 1, 0}),  ProjPoint::from_ints(Q, {0, 0, 0, 1}),
      ProjPoint::from_ints(Q, {1, -1, -1, 1}), ProjPoint::from_ints(Q, {1, -1, 1, -1}),
      ProjPoint::from_ints(Q, {1, 1, -1, -1})};
  const auto cubics = linear_system(4, 3, {}, Q);
  CHECK(cubics.projdim() == 19);
  CHECK(independence_defect(cubics, cayley) == 0);

  const auto p = ProjPoint::from_ints(Q, {1, 2, 3, 4});
  CHECK(independence_defect(cubics, {p, p}) >= 1);
  // Four collinear points impose only three conditions on conics.
  const auto conics = linear_system(3, 2, {}, Q);
  std::vector<ProjPoint> on_line;
  for (int t = 0; t < 4; ++t) on_line.push_back(ProjPoint::from_ints(Q, {1, t, 0}));
  CHECK(independence_defect(conics, on_line) == 1);

  // Equals |extra| minus the projdim drop.
  CounterRng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q = random_point(rng, 3);
    const auto sys = linear_system(3, 4, {FatPoint{q, 2}}, F);
    std::vector<ProjPoint> extra;
    Scheme with = sys.scheme;
    for (int k = 0; k < 14; ++k) {
      extra.push_back(random_point(rng, 3));
      with.push_back(SimplePoint{extra.back()});
    }
    const auto bigger = linear_system(3, 4, with, F);
    CHECK(independence_defect(sys, extra) == extra.size() - static_cast<std::size_t>(sys.projdim() - bigger.projdim()));
  }
}

TEST_CASE("scheme JSON round trip") {
  CounterRng rng(7);
  const auto p = random_point(rng, 3);
  const Scheme plane{FatPoint{p, 3}, InfNearDouble{p, random_vector(F, rng, 3)},
                     TangencyAtPoint{random_point(rng, 3), random_vector(F, rng, 3)}, SimplePoint{random_point(rng, 3)}};
  const auto r = forms::ProjLine::through(random_point(rng, 4), random_point(rng, 4));
  const Scheme space{FatLine{r, 2}, SimplePoint{random_point(rng, 4)}};
  for (const auto& s : {plane, space}) {
    const std::string text = scheme_to_json(s).dump();
    const Scheme back = scheme_from_json(nlohmann::json::parse(text), F);
    CHECK(back == s);
    CHECK(scheme_to_json(back).dump() == text);
  }
  CHECK_THROWS_AS(scheme_from_json(nlohmann::json::parse(R"([{"type":"cusp"}])"), F), FormatError);
  CHECK_THROWS_AS(scheme_from_json(nlohmann::json::parse(R"({"type":"simple_point"})"), F), FormatError);
}
