#include "severi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "severi/errors.hpp"
#include "severi/form_json.hpp"
#include "severi/form_ops.hpp"
#include "severi/picard.hpp"
#include "severi/verify.hpp"

namespace severi::cli {

using construct::Check;
using nlohmann::json;

namespace {

std::string format_name(Format f) {
  switch (f) {
    case Format::Json:
      return "json";
    case Format::Csv:
      return "csv";
    case Format::Table:
      return "table";
  }
  return "?";
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool is_odd_prime(std::uint64_t p) { return p >= 5 && la::is_prime_u64(p); }

}  // namespace

void RunConfig::validate() const {
  if (!is_odd_prime(prime)) throw InputError("--prime must be an odd prime >= 5, got " + std::to_string(prime));
  if (!is_odd_prime(prime2)) throw InputError("--prime2 must be an odd prime >= 5, got " + std::to_string(prime2));
  if (prime == prime2) throw InputError("--prime and --prime2 must differ");
  if (prime >= (1ULL << 32) || prime2 >= (1ULL << 32)) throw InputError("primes must be below 2^32");
  if (retries < 1) throw InputError("--retries must be positive");
}

json RunConfig::to_json() const {
  return {{"prime", prime}, {"prime2", prime2}, {"seed", seed}, {"retries", retries}, {"out", out},
          {"format", format_name(format)}};
}

bool RunReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> RunReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c.id);
  return out;
}

json RunReport::to_json() const {
  return {{"command", command},
          {"config", config.to_json()},
          {"checks", construct::checks_to_json(checks)},
          {"all_pass", all_pass()},
          {"failing", failing()},
          {"wall_time_s", wall_time},
          {"artifacts", artifacts},
          {"notes", notes}};
}

std::string RunReport::render(Format f) const {
  std::ostringstream os;
  if (f == Format::Json) {
    os << to_json().dump(2) << '\n';
  } else if (f == Format::Csv) {
    os << "id,pass,witness\n";
    for (const auto& c : checks) os << csv_quote(c.id) << ',' << (c.pass ? "true" : "false") << ',' << csv_quote(c.witness.dump()) << '\n';
  } else {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.id.size());
    os << "command: " << command << '\n';
    for (const auto& c : checks)
      os << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2) << c.id
         << (c.witness.is_null() || c.witness.empty() ? "" : c.witness.dump()) << '\n';
    for (const auto& n : notes) os << "note: " << n << '\n';
    for (const auto& a : artifacts) os << "wrote: " << a << '\n';
    os << "wall time: " << std::fixed << std::setprecision(3) << wall_time << " s\n";
    if (all_pass()) {
      os << "result: all " << checks.size() << " checks passed\n";
    } else {
      os << "result: FAILED";
      for (const auto& id : failing()) os << ' ' << id;
      os << '\n';
    }
  }
  return os.str();
}

std::pair<int, int> parse_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw InputError("");
      return {v, v};
    }
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw InputError("");
    const int hi = std::stoi(b, &used);
    if (used != b.size() || hi < lo) throw InputError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw InputError("bad range '" + text + "' (expected a or a..b)");
  }
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("cannot write " + path);
}

int finish(const RunReport& rep, std::ostream& out, std::ostream& err) {
  out << rep.render(rep.config.format);
  if (rep.all_pass()) return 0;
  for (const auto& id : rep.failing()) err << "FAILED " << id << '\n';
  return 1;
}

// --- construct -------------------------------------------------------------

int cmd_construct(RunConfig cfg, int n, std::optional<int> ell, const std::string& echo, std::ostream& out,
                  std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  if (n < 3) throw InputError("--n must be >= 3");
  if (cfg.out.empty()) cfg.out = "sigma-n" + std::to_string(n) + ".json";
  RunReport rep{echo, cfg, {}, 0, {}, {}};
  const construct::BuildOptions opts{cfg.retries, ell};
  try {
    const auto model = construct::build_sigma(n, la::Field::prime(cfg.prime), cfg.seed, opts);
    write_file(cfg.out, construct::bundle_to_json(model).dump(1) + "\n");
    rep.artifacts.push_back(cfg.out);
    rep.checks = model.checks;
    rep.notes.push_back("attempt " + std::to_string(model.attempt) + ", sub-seed " + std::to_string(model.sub_seed));
  } catch (const GenerationError& e) {
    rep.checks.push_back({"generation", false, {{"error", e.what()}}});
    rep.wall_time = seconds_since(t0);
    return finish(rep, out, err);
  }
  // Independent instance at the second prime: same counts, independent nodes.
  try {
    const auto other = construct::build_sigma(n, la::Field::prime(cfg.prime2), cfg.seed, opts);
    std::size_t defect = 0;
    int projdim = -1;
    for (const auto& c : other.checks)
      if (c.id == "independence") {
        defect = c.witness.at("defect").get<std::size_t>();
        projdim = c.witness.at("projdim_S").get<int>();
      }
    rep.checks.push_back({"second-prime", other.all_pass(),
                          {{"prime2", cfg.prime2}, {"nodes", other.nodes.size()}, {"defect", defect},
                           {"projdim_S", projdim}, {"attempt", other.attempt}}});
  } catch (const GenerationError& e) {
    rep.checks.push_back({"second-prime", false, {{"prime2", cfg.prime2}, {"error", e.what()}}});
  }
  rep.wall_time = seconds_since(t0);
  return finish(rep, out, err);
}

// --- verify ----------------------------------------------------------------

int cmd_verify(RunConfig cfg, const std::string& path, bool scan, const std::string& echo, std::ostream& out,
               std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bundle is not JSON: ") + e.what());
  }
  const auto model = construct::bundle_from_json(j);
  if (scan && model.field.modulus() > verify::kMaxScanPrime)
    throw InputError("--scan needs a bundle over p <= " + std::to_string(verify::kMaxScanPrime));
  cfg.prime = model.field.modulus();
  RunReport rep{echo, cfg, construct::check_surface(model), 0, {}, {}};
  const bool stored = std::all_of(model.checks.begin(), model.checks.end(), [](const Check& c) { return c.pass; });
  rep.checks.push_back({"stored-checks", stored && !model.checks.empty(), {{"count", model.checks.size()}}});
  if (scan) {
    const auto found = verify::singular_scan(model.surface);
    std::size_t on_r = 0, nodes = 0;
    json unexpected = json::array();
    for (const auto& x : found) {
      if (model.r.contains(x)) {
        ++on_r;
      } else if (std::find(model.nodes.begin(), model.nodes.end(), x) != model.nodes.end()) {
        ++nodes;
      } else {
        unexpected.push_back(forms::point_to_json(x));
      }
    }
    const bool ok = unexpected.empty() && nodes == model.nodes.size();
    rep.checks.push_back({"scan", ok,
                          {{"prime", model.field.modulus()}, {"singular_points", found.size()}, {"on_r", on_r},
                           {"nodes_found", nodes}, {"unexpected", unexpected}}});
    rep.notes.push_back(unexpected.empty() ? "no unexpected singular points"
                                           : std::to_string(unexpected.size()) + " unexpected singular points");
  }
  rep.wall_time = seconds_since(t0);
  return finish(rep, out, err);
}

// --- claims ----------------------------------------------------------------

std::vector<Check> ledger_rows(int n) {
  std::vector<Check> out;
  for (const auto& e : picard::verify_ledger(n).entries)
    out.push_back({"ledger:" + e.id, e.pass, {{"n", n}, {"expected", e.expected}, {"actual", e.actual}}});
  return out;
}

std::vector<Check> formula_rows(int n, std::optional<std::pair<int, int>> mr) {
  std::vector<Check> out;
  const auto t = verify::formula_table(n);
  const long cubics = static_cast<long>(forms::monomial_basis(4, n - 1).size());
  const long surfaces = static_cast<long>(forms::monomial_basis(4, n).size());
  out.push_back({"formula:delta0", t.delta0 == cubics - 4, {{"n", n}, {"value", t.delta0}}});
  out.push_back({"formula:delta", t.delta == 3 * n - 4 - t.eps && t.delta <= t.delta0,
                 {{"n", n}, {"value", t.delta}, {"ell", t.ell}, {"eps", t.eps}}});
  out.push_back({"formula:f_n-s_n", t.f_n - t.s_n == 4, {{"n", n}, {"f_n", t.f_n}, {"s_n", t.s_n}}});
  out.push_back({"formula:codim", t.codim == 3 * n - 3 && t.codim == surfaces - 1 - t.f_n, {{"n", n}, {"value", t.codim}}});
  if (mr)
    for (int m = std::max(3, mr->first); m <= std::min(n - 1, mr->second); ++m) {
      const auto tm = verify::formula_table(n, m);
      const long count = surfaces - static_cast<long>(forms::monomial_basis(4, m - 1).size()) + 2;
      out.push_back({"formula:t_nm", *tm.t_nm == count, {{"n", n}, {"m", m}, {"value", *tm.t_nm}}});
    }
  return out;
}

std::vector<Check> aux_rows(int n, const RunConfig& cfg) {
  const auto model = construct::build_plane_model(n, la::Field::prime(cfg.prime), cfg.seed, std::nullopt, cfg.retries);
  const auto d = construct::auxiliary_systems(model);
  return {{"aux:M", d.m == d.expected_m, {{"n", n}, {"projdim", d.m}, {"expected", d.expected_m}}},
          {"aux:N", d.n >= d.expected_n_min, {{"n", n}, {"projdim", d.n}, {"at_least", d.expected_n_min}}},
          {"aux:P", d.p == d.expected_p, {{"n", n}, {"projdim", d.p}, {"expected", d.expected_p}}},
          {"aux:chain", d.m - 2 * model.ell == d.p, {{"n", n}, {"M_minus_2ell", d.m - 2 * model.ell}, {"P", d.p}}}};
}

std::vector<Check> determinacy_rows(const std::string& name, const RunConfig& cfg) {
  const la::Field f = la::Field::prime(cfg.prime);
  forms::Poly p(f, 3);
  std::pair<std::size_t, std::size_t> expected;
  if (name == "fermat") {
    p.add_term({3, 0, 0, 0}, f.one());
    p.add_term({0, 3, 0, 0}, f.one());
    p.add_term({0, 0, 3, 0}, f.one());
    expected = {15, 3};
  } else if (name == "x3") {
    p.add_term({3, 0, 0, 0}, f.one());
    expected = {6, 12};
  } else if (name == "x2y") {
    p.add_term({2, 1, 0, 0}, f.one());
    expected = {9, 9};
  } else {
    throw InputError("--determinacy must be fermat, x3 or x2y");
  }
  const forms::Form cubic(p, 3);
  const auto d = verify::determinacy_rank(cubic);
  bool koszul = true;
  for (const auto& v : verify::koszul_vectors(cubic)) {
    const auto img = d.map * v;
    koszul = koszul && std::all_of(img.begin(), img.end(), [](const la::Scalar& s) { return s.is_zero(); });
  }
  return {{"determinacy:" + name, d.rank == expected.first && d.kernel_dim == expected.second && koszul,
           {{"rank", d.rank}, {"kernel_dim", d.kernel_dim}, {"expected_rank", expected.first},
            {"expected_kernel_dim", expected.second}, {"koszul_in_kernel", koszul}}}};
}

std::vector<Check> cayley_rows(const RunConfig& cfg) {
  const auto r = verify::cayley_pipeline(cfg.seed, la::Field::prime(cfg.prime), cfg.retries);
  const bool a1 = std::all_of(r.node_verdicts.begin(), r.node_verdicts.end(), [](const std::string& v) { return v == "A1-node"; });
  return {{"cayley:nodes-A1", a1 && r.nodes.size() == 4, {{"seed", cfg.seed}, {"verdicts", r.node_verdicts}}},
          {"cayley:triangle", r.triangle_coplanar && r.triangle_not_concurrent && r.triangle_avoids_nodes && r.triangle_on_surface,
           {{"coplanar", r.triangle_coplanar}, {"not_concurrent", r.triangle_not_concurrent},
            {"avoids_nodes", r.triangle_avoids_nodes}, {"on_surface", r.triangle_on_surface}}},
          {"cayley:rank-7", r.seven_point_rank == 7, {{"seed", cfg.seed}, {"rank", r.seven_point_rank}}},
          {"cayley:restriction-9", r.restriction_projdim == 9, {{"projdim", r.restriction_projdim}}},
          {"cayley:regular-d3", r.regular_d3.independent, {{"rank", r.regular_d3.rank}}},
          {"cayley:regular-d2", r.regular_d2.independent, {{"rank", r.regular_d2.rank}}}};
}

struct ClaimsSel {
  std::pair<int, int> n{3, 8};
  std::optional<std::pair<int, int>> m;
  std::string determinacy;
  bool cayley = false, ledger = false, formulas = false, aux = false;
};

int cmd_claims(const RunConfig& cfg, ClaimsSel sel, const std::string& echo, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  if (sel.n.first < 3 || sel.n.second > 12) throw InputError("--n range must lie in 3..12");
  const bool all = sel.determinacy.empty() && !sel.cayley && !sel.ledger && !sel.formulas && !sel.aux;
  if (all) {
    sel.ledger = sel.formulas = sel.aux = sel.cayley = true;
    sel.determinacy = "fermat";
  }
  if (!sel.determinacy.empty()) determinacy_rows(sel.determinacy, cfg);  // validates the name early

  // one isolated job per n; results are collected in parameter order
  std::vector<std::future<std::vector<Check>>> jobs;
  for (int n = sel.n.first; n <= sel.n.second; ++n)
    jobs.push_back(std::async(std::launch::async, [n, &sel, &cfg] {
      std::vector<Check> rows;
      auto append = [&](std::vector<Check> more) { rows.insert(rows.end(), more.begin(), more.end()); };
      if (sel.ledger) append(ledger_rows(n));
      if (sel.formulas) append(formula_rows(n, sel.m));
      if (sel.aux) append(aux_rows(n, cfg));
      return rows;
    }));
  RunReport rep{echo, cfg, {}, 0, {}, {}};
  for (auto& j : jobs) {
    auto rows = j.get();
    rep.checks.insert(rep.checks.end(), rows.begin(), rows.end());
  }
  if (!sel.determinacy.empty()) {
    auto rows = determinacy_rows(sel.determinacy, cfg);
    rep.checks.insert(rep.checks.end(), rows.begin(), rows.end());
  }
  if (sel.cayley) {
    auto rows = cayley_rows(cfg);
    rep.checks.insert(rep.checks.end(), rows.begin(), rows.end());
  }
  rep.wall_time = seconds_since(t0);
  if (!cfg.out.empty()) {
    write_file(cfg.out, rep.render(cfg.format == Format::Table ? Format::Csv : cfg.format));
    rep.artifacts.push_back(cfg.out);
  }
  return finish(rep, out, err);
}

// --- formulas --------------------------------------------------------------

int cmd_formulas(const RunConfig& cfg, std::pair<int, int> nr, std::optional<std::pair<int, int>> mr, std::ostream& out) {
  if (nr.first < 3) throw InputError("--n must be >= 3");
  std::vector<verify::FormulaTable> rows;
  for (int n = nr.first; n <= nr.second; ++n) {
    if (!mr) {
      rows.push_back(verify::formula_table(n));
      continue;
    }
    for (int m = std::max(3, mr->first); m <= std::min(n - 1, mr->second); ++m) rows.push_back(verify::formula_table(n, m));
  }
  std::string text;
  if (cfg.format == Format::Csv) {
    text = verify::formula_csv(rows);
  } else if (cfg.format == Format::Json) {
    json j = json::array();
    for (const auto& r : rows) j.push_back(r.to_json());
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << std::right << std::setw(4) << "n" << std::setw(4) << "m" << std::setw(9) << "delta0" << std::setw(9) << "t_nm"
       << std::setw(9) << "f_n" << std::setw(9) << "s_n" << std::setw(5) << "ell" << std::setw(5) << "eps" << std::setw(7)
       << "delta" << std::setw(7) << "codim" << '\n';
    for (const auto& r : rows)
      os << std::setw(4) << r.n << std::setw(4) << (r.m ? std::to_string(*r.m) : "-") << std::setw(9) << r.delta0
         << std::setw(9) << (r.t_nm ? std::to_string(*r.t_nm) : "-") << std::setw(9) << r.f_n << std::setw(9) << r.s_n
         << std::setw(5) << r.ell << std::setw(5) << r.eps << std::setw(7) << r.delta << std::setw(7) << r.codim << '\n';
    text = os.str();
  }
  if (!cfg.out.empty()) write_file(cfg.out, text);
  out << text;
  return 0;
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-' || text[0] == '+')
    throw InputError(source + " is not an unsigned integer: '" + text + "'");
  return v;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table") return Format::Table;
  throw InputError("--format must be json, csv or table");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nodal surfaces with a multiple line: constructions and checks over finite fields", "severilab"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "table";
  std::string seed_text;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--prime", cfg.prime, "working prime (default 10007)");
    sub->add_option("--prime2", cfg.prime2, "confirmation prime (default 31013)");
    sub->add_option("--seed", seed_text, std::string("seed (default: $") + kSeedEnv + " or 1)");
    sub->add_option("--retries", cfg.retries, "retry budget (default 64)");
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--format", format, "json, csv or table");
  };

  int n = 0;
  int ell = 0;
  auto* construct = app.add_subcommand("construct", "build a surface bundle");
  common(construct);
  construct->add_option("--n", n, "degree")->required();
  auto* ell_opt = construct->add_option("--ell", ell, "number of tangent lines (default maximal)");

  std::string bundle;
  bool scan = false;
  auto* verify_cmd = app.add_subcommand("verify", "re-check a stored bundle");
  common(verify_cmd);
  verify_cmd->add_option("bundle", bundle, "bundle path")->required();
  verify_cmd->add_flag("--scan", scan, "exhaustive singular-point scan (p <= 211)");

  ClaimsSel sel;
  std::string n_range = "3..8", m_range;
  auto* claims = app.add_subcommand("claims", "sweep the identities and rank checks");
  common(claims);
  claims->add_option("--n", n_range, "degree range a..b (default 3..8)");
  claims->add_option("--m", m_range, "range of m for t_{n,m}");
  claims->add_option("--determinacy", sel.determinacy, "fermat, x3 or x2y");
  claims->add_flag("--cayley", sel.cayley, "quadrilateral cubic pipeline");
  claims->add_flag("--ledger", sel.ledger, "Picard lattice identities");
  claims->add_flag("--formulas", sel.formulas, "closed-form counts");
  claims->add_flag("--aux", sel.aux, "dimensions of the auxiliary plane systems");

  std::string f_range = "3..10", fm_range;
  auto* formulas = app.add_subcommand("formulas", "print the closed-form table");
  common(formulas);
  formulas->add_option("--n", f_range, "degree range a..b (default 3..10)");
  formulas->add_option("--m", fm_range, "range of m for t_{n,m}");

  std::vector<std::string> argv_store{"severilab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string echo = "severilab";
  for (const auto& a : args) echo += " " + a;
  try {
    cfg.format = parse_format(format);
    if (!seed_text.empty()) {
      cfg.seed = parse_seed(seed_text, "--seed");
    } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      cfg.seed = parse_seed(env, kSeedEnv);
    }
    cfg.validate();
    if (construct->parsed())
      return cmd_construct(cfg, n, ell_opt->count() ? std::optional<int>(ell) : std::nullopt, echo, out, err);
    if (verify_cmd->parsed()) return cmd_verify(cfg, bundle, scan, echo, out, err);
    if (claims->parsed()) {
      sel.n = parse_range(n_range);
      if (!m_range.empty()) sel.m = parse_range(m_range);
      return cmd_claims(cfg, sel, echo, out, err);
    }
    if (formulas->parsed())
      return cmd_formulas(cfg, parse_range(f_range), fm_range.empty() ? std::nullopt : std::optional(parse_range(fm_range)), out);
  } catch (const InputError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "malformed input: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace severi::cli
