// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "severi/cli.hpp"
#include "severi/conditions.hpp"
#include "severi/construct.hpp"
#include "severi/form_ops.hpp"
#include "severi/picard.hpp"
#include "severi/verify.hpp"

using namespace severi;
using namespace severi::forms;

namespace {

const Field P1 = Field::prime(10007);
const Field P2 = Field::prime(31013);
const Field SMALL = Field::prime(101);
constexpr int kSeeds[] = {1, 2, 3};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

oracle::Terms terms_of(const Form& f) {
  oracle::Terms t;
  for (const auto& [e, c] : f.terms())
    t.emplace_back(std::vector<int>(e.begin(), e.begin() + f.nvars()), static_cast<std::int64_t>(c.residue()));
  return t;
}

std::vector<std::int64_t> ints(const ProjPoint& x) {
  std::vector<std::int64_t> out;
  for (const auto& s : x.coords()) out.push_back(static_cast<std::int64_t>(s.residue()));
  return out;
}

bool oracle_node(const oracle::Terms& f, const ProjPoint& x, std::int64_t p) {
  const auto v = ints(x);
  if (oracle::eval_terms(f, v, p) != 0) return false;
  for (std::size_t i = 0; i < 4; ++i)
    if (oracle::eval_terms(oracle::derivative_terms(f, i, p), v, p) != 0) return false;
  return oracle::hessian_rank(f, v, p) == 3;
}

const construct::Check* find_check(const construct::SurfaceModel& m, const std::string& id) {
  for (const auto& c : m.checks)
    if (c.id == id) return &c;
  return nullptr;
}

bool check_passes(const construct::SurfaceModel& m, const std::string& id) {
  const auto* c = find_check(m, id);
  return c != nullptr && c->pass;
}

int expected_eps(int n) { return n % 2; }

std::string tag(int n, int seed) { return "n=" + std::to_string(n) + " seed=" + std::to_string(seed); }

// Built once, shared by several criteria.
struct Instances {
  std::vector<construct::SurfaceModel> main, second;
};

const Instances& instances() {
  static const Instances all = [] {
    Instances s;
    for (int n = 3; n <= 8; ++n)
      for (int seed : kSeeds) {
        s.main.push_back(construct::build_sigma(n, P1, seed));
        s.second.push_back(construct::build_sigma(n, P2, seed));
      }
    return s;
  }();
  return all;
}

Outcome ac1_pipeline_dimension() {
  Outcome o;
  int count = 0;
  for (int n = 3; n <= 8; ++n)
    for (int seed : kSeeds) {
      const auto m = construct::build_plane_model(n, P1, seed);
      o.require(m.system.projdim() == 3, tag(n, seed) + " projdim " + std::to_string(m.system.projdim()));
      // every basis member actually satisfies the scheme
      o.require(conditions::verify_system(m.system), tag(n, seed) + " basis violates a condition");
      ++count;
    }
  if (o.pass) o.detail = std::to_string(count) + " plane models, projdim 3 each";
  return o;
}

Outcome ac2_tangent_count() {
  Outcome o;
  int count = 0;
  for (int n = 3; n <= 8; ++n)
    for (int seed : kSeeds) {
      const auto m = construct::build_plane_model(n, P1, seed);
      const auto t = construct::tangent_lines(m.gamma, m.q);
      o.require(t.discriminant.degree() == 2 * n - 4, tag(n, seed) + " discriminant degree " + std::to_string(t.discriminant.degree()));
      ++count;
    }
  if (o.pass) o.detail = std::to_string(count) + " discriminants of degree 2n-4";
  return o;
}

Outcome ac3_image_surface() {
  Outcome o;
  for (const auto& m : instances().main) {
    const auto t = tag(m.n, static_cast<int>(m.seed));
    o.require(m.surface.degree() == m.n, t + " wrong degree");
    const auto* imp = find_check(m, "implicit-equation");
    o.require(imp && imp->pass && imp->witness.at("kernel_dim") == 1, t + " implicit equation not unique");
    o.require(multiplicity_along_line(m.surface, m.r) == m.n - 2, t + " multiplicity along r");
    const auto* sub = find_check(m, "substitution");
    o.require(sub && sub->pass, t + " substitution identity");
    if (sub) o.require(sub->witness.at("method") == (m.n <= 5 ? "exact" : "sampled"), t + " substitution method");

    // Independent: F(basis(x)) = 0 at 500 random plane points, by direct evaluation.
    const auto p = static_cast<std::int64_t>(m.field.modulus());
    const auto f = terms_of(m.surface);
    std::vector<oracle::Terms> basis;
    for (const auto& b : m.plane.system.basis) basis.push_back(terms_of(b));
    CounterRng rng(m.seed, 77);
    bool zero = true;
    for (int i = 0; i < 500; ++i) {
      const std::vector<std::int64_t> x{static_cast<std::int64_t>(rng.below(p)), static_cast<std::int64_t>(rng.below(p)),
                                        static_cast<std::int64_t>(rng.below(p))};
      std::vector<std::int64_t> y;
      for (const auto& b : basis) y.push_back(oracle::eval_terms(b, x, p));
      zero = zero && oracle::eval_terms(f, y, p) == 0;
    }
    o.require(zero, t + " sampled substitution nonzero");
  }
  if (o.pass) o.detail = "18 surfaces, unique equation, r of multiplicity n-2, substitution exact (n<=5) / sampled";
  return o;
}

Outcome ac4_nodes() {
  Outcome o;
  for (const auto& m : instances().main) {
    const auto t = tag(m.n, static_cast<int>(m.seed));
    const int expected = 3 * m.n - 4 - expected_eps(m.n);
    o.require(static_cast<int>(m.nodes.size()) == expected && expected == 2 * m.plane.ell, t + " node count");
    const auto f = terms_of(m.surface);
    for (const auto& x : m.nodes) {
      o.require(verify::classify_double_point(m.surface, x).verdict == verify::Verdict::A1Node, t + " node not A1");
      o.require(oracle_node(f, x, static_cast<std::int64_t>(m.field.modulus())), t + " oracle: not a node");
    }
    o.require(static_cast<int>(m.node_lines.size()) == m.plane.ell, t + " line count");
    for (std::size_t i = 0; i < m.node_lines.size(); ++i) {
      o.require(m.node_lines[i].contains(m.nodes[2 * i]) && m.node_lines[i].contains(m.nodes[2 * i + 1]), t + " pair not collinear");
      o.require(check_passes(m, "s-in-surface"), t + " line not in surface");
    }
    o.require(check_passes(m, "s-disjoint"), t + " lines meet");
    o.require(check_passes(m, "s-meet-r"), t + " line misses r");
  }
  for (int n : {3, 4}) {
    const auto m = construct::build_sigma(n, SMALL, 1);
    std::set<std::vector<std::int64_t>> off_r, nodes;
    for (const auto& x : verify::singular_scan(m.surface))
      if (!m.r.contains(x)) off_r.insert(ints(x));
    for (const auto& x : m.nodes) nodes.insert(ints(x));
    o.require(off_r == nodes, "scan at n=" + std::to_string(n) + " p=101 found " + std::to_string(off_r.size()) +
                                  " points off r, expected " + std::to_string(nodes.size()));
  }
  if (o.pass) o.detail = "18 surfaces with 2l A1 nodes on l disjoint lines meeting r; scans (n=3,4; p=101) clean";
  return o;
}

Outcome ac5_independence() {
  Outcome o;
  const auto& all = instances();
  for (const auto* set : {&all.main, &all.second})
    for (const auto& m : *set) {
      const auto t = tag(m.n, static_cast<int>(m.seed)) + " p=" + std::to_string(m.field.modulus());
      const auto sys = conditions::linear_system(4, m.n, {conditions::FatLine{m.r, m.n - 2}}, m.field);
      o.require(conditions::independence_defect(sys, m.nodes) == 0, t + " defect");
      // Independent: rank of basis evaluations at the nodes.
      const auto p = static_cast<std::int64_t>(m.field.modulus());
      oracle::IntMatrix ev;
      for (const auto& x : m.nodes) {
        std::vector<std::int64_t> row;
        for (const auto& b : sys.basis) row.push_back(oracle::eval_terms(terms_of(b), ints(x), p));
        ev.push_back(row);
      }
      o.require(oracle::rank_mod(ev, p) == m.nodes.size(), t + " oracle rank");
    }
  if (o.pass) o.detail = "defect 0 for 36 instances at p=10007 and p=31013";
  return o;
}

Outcome ac6_auxiliary() {
  Outcome o;
  for (int n = 3; n <= 8; ++n) {
    const auto m = construct::build_plane_model(n, P1, 1);
    const auto d = construct::auxiliary_systems(m);
    const int eps = expected_eps(n), ell = (3 * n - 4) / 2;
    o.require(d.m == 6 * n - 4, "n=" + std::to_string(n) + " projdim M " + std::to_string(d.m));
    o.require(d.p == 3 * n + eps, "n=" + std::to_string(n) + " projdim P " + std::to_string(d.p));
    o.require(d.m - 2 * ell == d.p, "n=" + std::to_string(n) + " chain not an equality");
    o.require(d.n >= 6 * n - 4 - ell && d.n <= d.m, "n=" + std::to_string(n) + " projdim N out of range");
  }
  if (o.pass) o.detail = "projdim M = 6n-4, P = 3n+eps, M - 2l = P for n=3..8";
  return o;
}

Outcome ac7_determinacy() {
  Outcome o;
  forms::Poly p(P1, 3);
  for (int i = 0; i < 3; ++i) {
    forms::Exponent e{};
    e[i] = 3;
    p.add_term(e, P1.one());
  }
  const Form f(p, 3);
  const auto d = verify::determinacy_rank(f);
  o.require(d.rank == 15 && d.kernel_dim == 3, "rank " + std::to_string(d.rank) + " kernel " + std::to_string(d.kernel_dim));
  // Koszul vectors (x_j^2 e_i - x_i^2 e_j, scaled) must be in the kernel of the map.
  for (const auto& v : verify::koszul_vectors(f)) {
    const auto img = d.map * v;
    o.require(std::all_of(img.begin(), img.end(), [](const Scalar& s) { return s.is_zero(); }), "Koszul vector not in kernel");
    o.require(std::any_of(v.begin(), v.end(), [](const Scalar& s) { return !s.is_zero(); }), "zero Koszul vector");
  }
  if (o.pass) o.detail = "(15, 3), three Koszul vectors in the kernel";
  return o;
}

Outcome ac8_cayley() {
  Outcome o;
  const auto r = verify::cayley_pipeline(1, P1);
  o.require(r.pass(), "pipeline report failed");
  o.require(r.nodes.size() == 4, "node count");
  const auto f = terms_of(r.cubic);
  for (const auto& x : r.nodes) o.require(oracle_node(f, x, 10007), "oracle: image of a line is not a node");
  o.require(r.seven_point_rank == 7, "7-point rank " + std::to_string(r.seven_point_rank));
  o.require(r.restriction_projdim == 9, "restriction dimension " + std::to_string(r.restriction_projdim));
  o.require(r.regular_d3.independent && r.regular_d2.independent, "nodes not regular");
  o.require(r.triangle_coplanar && r.triangle_not_concurrent && r.triangle_on_surface && r.triangle_avoids_nodes, "triangle");
  if (o.pass) o.detail = "4-nodal cubic, rank 7, restriction 9, regular at d=3 and d=2";
  return o;
}

Outcome ac9_ledger() {
  Outcome o;
  for (int n = 3; n <= 12; ++n) {
    const auto rep = picard::verify_ledger(n);
    o.require(rep.all_pass(), "ledger fails at n=" + std::to_string(n));
    const int eps = expected_eps(n);
    auto actual = [&](const std::string& id) {
      for (const auto& e : rep.entries)
        if (e.id == id) return e.actual;
      return std::string("<missing>");
    };
    const auto t = " at n=" + std::to_string(n);
    o.require(actual("prop4.4-C2") == std::to_string(n - 4), "C^2" + t);
    o.require(actual("prop4.4-deg") == std::to_string(n), "(C+L)^2" + t);
    o.require(actual("prop4.4-genus") == std::to_string(n - 3), "genus(C)" + t);
    o.require(actual("lem5.1-normal") == "-r_E + f_E", "normal class" + t);
    o.require(actual("cl4.7-degY") == std::to_string(4 * (3 * n - 4 + eps)), "deg Y" + t);
  }
  if (o.pass) o.detail = "all identities for n=3..12";
  return o;
}

Outcome ac10_formulas() {
  Outcome o;
  using oracle::binomial;
  o.require(verify::formula_table(3).delta0 == 6 && verify::formula_table(4).delta0 == 16 && verify::formula_table(5).delta0 == 31,
            "delta0 quoted values");
  o.require(verify::formula_table(3).delta == 4 && verify::formula_table(4).delta == 8, "delta quoted values");
  for (int n = 3; n <= 10; ++n) {
    const auto t = verify::formula_table(n);
    const auto at = " at n=" + std::to_string(n);
    o.require(t.delta0 == binomial(n + 2, 3) - 4, "delta0" + at);
    o.require(t.delta == 3 * n - 4 - expected_eps(n), "delta" + at);
    o.require(t.codim == 3 * n - 3, "codim" + at);
    o.require(t.f_n == binomial(n + 2, 3) + n * (n - 3) / 2 + 3, "f_n" + at);
    o.require(t.s_n == t.f_n - 4, "s_n" + at);
    for (int m = 3; m < n; ++m)
      o.require(*verify::formula_table(n, m).t_nm == binomial(n + 3, 3) - binomial(m + 2, 3) + 2, "t_nm" + at);
  }
  if (o.pass) o.detail = "quoted values and closed forms for n=3..10";
  return o;
}

Outcome ac11_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("severilab-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::string bytes[2];
  for (int i = 0; i < 2; ++i) {
    const auto path = (dir / ("run" + std::to_string(i) + ".json")).string();
    std::ostringstream out, err;
    const int code = cli::run({"construct", "--n", "5", "--seed", "9", "--out", path}, out, err);
    o.require(code == 0, "construct exit " + std::to_string(code));
    std::ifstream f(path, std::ios::binary);
    bytes[i].assign(std::istreambuf_iterator<char>(f), {});
  }
  std::filesystem::remove_all(dir);
  o.require(!bytes[0].empty() && bytes[0] == bytes[1], "bundles differ");
  if (o.pass) o.detail = "two bundles, " + std::to_string(bytes[0].size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 pipeline dimension", ac1_pipeline_dimension},
      {"AC2 tangent count", ac2_tangent_count},
      {"AC3 image surface", ac3_image_surface},
      {"AC4 nodes", ac4_nodes},
      {"AC5 independence", ac5_independence},
      {"AC6 auxiliary systems", ac6_auxiliary},
      {"AC7 determinacy", ac7_determinacy},
      {"AC8 Cayley cubic", ac8_cayley},
      {"AC9 Picard ledger", ac9_ledger},
      {"AC10 formulas", ac10_formulas},
      {"AC11 determinism", ac11_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-24s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
