#include "severi/picard.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "severi/errors.hpp"

namespace severi::picard {

std::shared_ptr<const PicardLattice> PicardLattice::create(std::string title, std::vector<std::string> names,
                                                           std::vector<std::vector<long>> gram,
                                                           std::vector<long> canonical) {
  const std::size_t n = names.size();
  if (gram.size() != n || canonical.size() != n) throw LatticeError("lattice data sizes disagree");
  for (std::size_t i = 0; i < n; ++i) {
    if (gram[i].size() != n) throw LatticeError("gram matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (gram[i][j] != gram[j][i]) throw LatticeError("gram matrix is not symmetric");
  }
  auto l = std::shared_ptr<PicardLattice>(new PicardLattice());
  l->title_ = std::move(title);
  l->names_ = std::move(names);
  l->gram_ = std::move(gram);
  l->canonical_ = std::move(canonical);
  return l;
}

DivClass PicardLattice::generator(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw LatticeError("no generator named " + name + " in " + title_);
  std::vector<long> c(rank(), 0);
  c[static_cast<std::size_t>(it - names_.begin())] = 1;
  return make(std::move(c));
}

DivClass PicardLattice::zero() const { return make(std::vector<long>(rank(), 0)); }
DivClass PicardLattice::canonical() const { return make(canonical_); }
DivClass PicardLattice::make(std::vector<long> coeffs) const { return {shared_from_this(), std::move(coeffs)}; }

DivClass::DivClass(std::shared_ptr<const PicardLattice> lattice, std::vector<long> coeffs)
    : lattice_(std::move(lattice)), c_(std::move(coeffs)) {
  if (c_.size() != lattice_->rank()) throw LatticeError("class length does not match the lattice rank");
}

void DivClass::require_same(const DivClass& o) const {
  if (lattice_ != o.lattice_) throw LatticeError("classes live on different lattices");
}

DivClass DivClass::operator+(const DivClass& o) const {
  require_same(o);
  auto c = c_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return {lattice_, c};
}

DivClass DivClass::operator-(const DivClass& o) const { return *this + (-o); }

DivClass DivClass::operator-() const { return -1 * *this; }

DivClass operator*(long k, const DivClass& d) {
  auto c = d.c_;
  for (auto& x : c) x *= k;
  return {d.lattice_, c};
}

bool operator==(const DivClass& a, const DivClass& b) { return a.lattice_ == b.lattice_ && a.c_ == b.c_; }

std::string DivClass::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const long k = c_[i];
    if (k == 0) continue;
    if (out.empty()) {
      if (k < 0) out += "-";
    } else {
      out += k < 0 ? " - " : " + ";
    }
    const long a = k < 0 ? -k : k;
    if (a != 1) out += std::to_string(a);
    out += lattice_->names()[i];
  }
  return out.empty() ? "0" : out;
}

long intersect(const DivClass& a, const DivClass& b) {
  if (&a.lattice() != &b.lattice()) throw LatticeError("intersection across lattices");
  const auto& g = a.lattice().gram();
  long s = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) s += a.coeffs()[i] * g[i][j] * b.coeffs()[j];
  return s;
}

long adjunction_genus(const DivClass& c) {
  const long t = intersect(c, c) + intersect(c, c.lattice().canonical());
  if (t % 2 != 0) throw LatticeError("C^2 + C.K is odd for " + c.to_string());
  return 1 + t / 2;
}

long rr_projdim(const DivClass& d) {
  const long t = intersect(d, d) - intersect(d, d.lattice().canonical());
  if (t % 2 != 0) throw LatticeError("D^2 - D.K is odd for " + d.to_string());
  return t / 2;
}

std::shared_ptr<const PicardLattice> blown_up_plane(int ell, int eps) {
  if (ell < 0 || eps < 0 || eps > 1) throw InputError("blown_up_plane: need ell >= 0 and eps in {0, 1}");
  std::vector<std::string> names{"R", "E_q"};
  for (int i = 1; i <= ell; ++i) names.push_back("e_" + std::to_string(i));
  for (int i = 1; i <= ell; ++i) names.push_back("f_" + std::to_string(i));
  if (eps == 1) names.push_back("ebar");
  const std::size_t n = names.size();
  std::vector<std::vector<long>> gram(n, std::vector<long>(n, 0));
  std::vector<long> k(n, 1);
  gram[0][0] = 1;
  k[0] = -3;
  for (std::size_t i = 1; i < n; ++i) gram[i][i] = -1;
  return PicardLattice::create("blown-up plane", std::move(names), std::move(gram), std::move(k));
}

std::shared_ptr<const PicardLattice> quadric_surface() {
  return PicardLattice::create("P1 x P1", {"r_E", "f_E"}, {{0, 1}, {1, 0}}, {-2, -2});
}

std::shared_ptr<const PicardLattice> hirzebruch_one() {
  return PicardLattice::create("F1", {"E", "F"}, {{-1, 1}, {1, 0}}, {-2, -3});
}

namespace {

class Ledger {
 public:
  explicit Ledger(LedgerReport& r) : r_(r) {}

  void check(std::string id, std::string statement, long expected, long actual) {
    r_.entries.push_back({std::move(id), std::move(statement), std::to_string(expected), std::to_string(actual),
                          expected == actual});
  }
  void check(std::string id, std::string statement, const DivClass& expected, const DivClass& actual) {
    r_.entries.push_back(
        {std::move(id), std::move(statement), expected.to_string(), actual.to_string(), expected == actual});
  }
  void check_all(std::string id, std::string statement, bool ok, std::string detail) {
    r_.entries.push_back({std::move(id), std::move(statement), "true", ok ? "true" : detail, ok});
  }

 private:
  LedgerReport& r_;
};

long binom2(long a) { return a * (a - 1) / 2; }

}  // namespace

bool LedgerReport::all_pass() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const LedgerEntry& e) { return e.pass; });
}

nlohmann::json LedgerReport::to_json() const {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& e : entries)
    ids.push_back({{"id", e.id}, {"statement", e.statement}, {"expected", e.expected}, {"actual", e.actual},
                   {"pass", e.pass}});
  return {{"n", n}, {"ell", ell}, {"eps", eps}, {"identities", ids}, {"all_pass", all_pass()}};
}

std::string LedgerReport::table() const {
  std::size_t w_id = 2, w_st = 9, w_ex = 8, w_ac = 6;
  for (const auto& e : entries) {
    w_id = std::max(w_id, e.id.size());
    w_st = std::max(w_st, e.statement.size());
    w_ex = std::max(w_ex, e.expected.size());
    w_ac = std::max(w_ac, e.actual.size());
  }
  std::ostringstream os;
  os << "n = " << n << ", ell = " << ell << ", eps = " << eps << "\n";
  auto row = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d,
                 const std::string& s) {
    os << std::left << std::setw(static_cast<int>(w_id)) << a << "  " << std::setw(static_cast<int>(w_st)) << b
       << "  " << std::setw(static_cast<int>(w_ex)) << c << "  " << std::setw(static_cast<int>(w_ac)) << d << "  " << s
       << "\n";
  };
  row("id", "statement", "expected", "actual", "result");
  for (const auto& e : entries) row(e.id, e.statement, e.expected, e.actual, e.pass ? "pass" : "FAIL");
  return os.str();
}

LedgerReport verify_ledger(int n, int ell, int eps) {
  if (n < 3) throw InputError("verify_ledger: n must be at least 3");
  if (eps < 0 || eps > 1 || 3 * n - 4 != 2 * ell + eps)
    throw InputError("verify_ledger: need 3n - 4 = 2 ell + eps with eps in {0, 1}");
  LedgerReport report{n, ell, eps, {}};
  Ledger L(report);

  // Blown-up plane X.
  const auto x = blown_up_plane(ell, eps);
  const DivClass R = x->generator("R");
  const DivClass Eq = x->generator("E_q");
  const DivClass K = x->canonical();
  std::vector<DivClass> e, f;
  for (int i = 1; i <= ell; ++i) {
    e.push_back(x->generator("e_" + std::to_string(i)));
    f.push_back(x->generator("f_" + std::to_string(i)));
  }
  DivClass C = (n - 1) * R - (n - 3) * Eq;
  for (int i = 0; i < ell; ++i) C = C - e[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)];
  if (eps == 1) C = C - x->generator("ebar");
  const DivClass Lc = R - Eq;
  const DivClass Lp = C + Lc;
  std::vector<DivClass> D;
  for (int i = 0; i < ell; ++i) D.push_back(e[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)]);
  for (int i = 0; i < ell; ++i)
    D.push_back(R - Eq - e[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)]);

  L.check("prop4.4-C2", "C^2 = n - 4 on X", n - 4, intersect(C, C));
  L.check("prop4.4-CL", "C.L = 2", 2, intersect(C, Lc));
  L.check("prop4.4-deg", "deg Sigma = (C + L)^2 = n", n, intersect(Lp, Lp));
  L.check("prop4.4-genus", "genus(C) on X = plane genus with an (n-3)-fold point", binom2(n - 2) - binom2(n - 3),
          adjunction_genus(C));
  L.check("prop4.4-dimL", "dim |C + L| = 3 (Riemann-Roch)", 3, rr_projdim(Lp));

  bool d2 = true, dk = true, ld = true, cd = true, dd = true, fd = true, lf = true;
  for (std::size_t i = 0; i < D.size(); ++i) {
    d2 = d2 && intersect(D[i], D[i]) == -2;
    dk = dk && intersect(D[i], K) == 0;
    ld = ld && intersect(Lp, D[i]) == 0;
    cd = cd && intersect(C, D[i]) == 0;
    for (std::size_t j = 0; j < i; ++j) dd = dd && intersect(D[i], D[j]) == 0;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    fd = fd && intersect(f[i], D[i]) == 1 && intersect(f[i], D[i + f.size()]) == 1;
    lf = lf && intersect(Lp, f[i]) == 1;
  }
  L.check_all("prop4.5-D2", "D_i^2 = -2 for i = 1..2l", d2, "false");
  L.check_all("prop4.5-DK", "D_i.K = 0 for i = 1..2l", dk, "false");
  L.check_all("prop4.5-LD", "(C + L).D_i = 0", ld, "false");
  L.check_all("prop4.5-CD", "C.D_i = 0", cd, "false");
  L.check_all("prop4.5-DD", "D_i.D_j = 0 for i != j", dd, "false");
  L.check_all("prop4.5-FD", "F_i.D_i = F_i.D_{l+i} = 1", fd, "false");
  L.check_all("prop4.5-LF", "(C + L).F_i = 1", lf, "false");
  if (eps == 1) {
    const DivClass rbar = R - Eq - x->generator("ebar");
    L.check("prop4.5-Ebar", "rbar^2 = -1", -1, intersect(rbar, rbar));
    L.check("prop4.5-EbarK", "rbar.K = -1", -1, intersect(rbar, K));
    L.check("prop4.5-EbarL", "(C + L).rbar = 1", 1, intersect(Lp, rbar));
  }

  // The exceptional quadric E = P1 x P1.
  const auto q = quadric_surface();
  const DivClass r = q->generator("r_E");
  const DivClass fe = q->generator("f_E");
  const DivClass KE = q->canonical();
  // Adjunction on A: 2e = K_E + 4 f_E.
  auto twice = (KE + 4 * fe).coeffs();
  const bool even = std::all_of(twice.begin(), twice.end(), [](long v) { return v % 2 == 0; });
  for (auto& v : twice) v /= 2;
  const DivClass ee = q->make(twice);
  L.check_all("lem5.1-even", "K_E + 4 f_E is divisible by 2", even, "false");
  L.check("lem5.1-normal", "e = c1(N_{E|A}) ~ f_E - r_E", fe - r, ee);
  const DivClass nTheta = -ee;  // c1(N_{E|Theta}) = -e
  const DivClass Ce = n * fe + 2 * nTheta;
  L.check("lem5.2-class", "n f_E + 2 c1(N_{E|Theta}) ~ 2 r_E + (n - 2) f_E", 2 * r + (n - 2) * fe, Ce);
  L.check("lem5.2-genus", "genus(C) on E = n - 3", n - 3, adjunction_genus(Ce));
  L.check("sec4.2-gdeg", "C.f_E = 2 (the g^1_2)", 2, intersect(Ce, fe));
  // Riemann-Hurwitz for the double cover C -> P1.
  L.check("sec4.2-ramification", "ramification of the g^1_2 = 2n - 4", 2 * n - 4, 2 * adjunction_genus(Ce) - 2 + 4);
  L.check("cl4.11-restriction", "(P_Theta + E)|_E ~ r_E", r, fe + nTheta);
  L.check("cl4.11-contract", "E.(P_Theta + E)^2 = r_E^2 = 0", 0, intersect(fe + nTheta, fe + nTheta));

  // F_1 and the surface Y.
  const auto h = hirzebruch_one();
  const DivClass E1 = h->generator("E");
  const DivClass F1 = h->generator("F");
  const DivClass H = (3 * n - 2 - ell) * F1 + 4 * E1;
  const long a = 3 * n - 2 - ell, b = 3 * n - 6 - ell;
  L.check("cl4.7-HE", "H.E = 3n - 6 - l", 3 * n - 6 - ell, intersect(H, E1));
  L.check("cl4.7-HF", "H.F = 4", 4, intersect(H, F1));
  L.check("cl4.7-degY", "deg Y = H^2 = 4(3n - 4 + eps)", 4 * (3 * n - 4 + eps), intersect(H, H));
  L.check("cl4.7-degY-squares", "deg Y = (3n-2-l)^2 - (3n-6-l)^2", a * a - b * b, intersect(H, H));
  // Nef cone of F_1 is spanned by F and E + F.
  L.check("cl4.7-minmove", "min degree of a moving curve on Y = 4", 4,
          std::min(intersect(H, F1), intersect(H, E1 + F1)));
  L.check("cl4.7-embed", "dim |H| = 15n - 5l - 16", 15 * n - 5 * ell - 16, rr_projdim(H));
  return report;
}

LedgerReport verify_ledger(int n) {
  if (n < 3) throw InputError("verify_ledger: n must be at least 3");
  return verify_ledger(n, (3 * n - 4) / 2, (3 * n - 4) % 2);
}

}  // namespace severi::picard
