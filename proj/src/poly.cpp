#include "severi/poly.hpp"

#include <string>
#include <unordered_map>

#include "severi/errors.hpp"

namespace severi::forms {

int total_degree(const Exponent& e) noexcept { return e[0] + e[1] + e[2] + e[3]; }

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const noexcept {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

std::vector<Exponent> monomial_basis(int nvars, int d) {
  if (nvars < 1 || nvars > 4) throw InputError("monomial_basis: nvars must be in 1..4");
  if (d < 0) throw InputError("monomial_basis: negative degree");
  std::vector<Exponent> out;
  Exponent e{};
  // Recursive fill in lexicographically decreasing order.
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == nvars - 1) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(remaining);
      out.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(k);
      self(self, var + 1, remaining - k);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  rec(rec, 0, d);
  return out;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {
std::uint64_t pack(const Exponent& e) {
  return static_cast<std::uint64_t>(e[0]) | static_cast<std::uint64_t>(e[1]) << 16U |
         static_cast<std::uint64_t>(e[2]) << 32U | static_cast<std::uint64_t>(e[3]) << 48U;
}
Exponent unpack(std::uint64_t k) {
  return {static_cast<std::uint16_t>(k & 0xffffU), static_cast<std::uint16_t>((k >> 16U) & 0xffffU),
          static_cast<std::uint16_t>((k >> 32U) & 0xffffU), static_cast<std::uint16_t>(k >> 48U)};
}
}  // namespace

std::size_t monomial_index(int nvars, const Exponent& e) {
  // Count exponents of the same degree that precede e in decreasing lex order.
  int remaining = total_degree(e);
  std::size_t idx = 0;
  for (int var = 0; var < nvars - 1; ++var) {
    const int k = e[static_cast<std::size_t>(var)];
    const int rest_vars = nvars - var - 1;
    // exponents with a larger value at position var
    for (int bigger = remaining; bigger > k; --bigger)
      idx += static_cast<std::size_t>(binomial(remaining - bigger + rest_vars - 1, rest_vars - 1));
    remaining -= k;
  }
  return idx;
}

Poly::Poly(Field field, int nvars) : field_(field), nvars_(nvars) {
  if (nvars < 1 || nvars > 4) throw InputError("Poly: nvars must be in 1..4");
}

Poly Poly::constant(Field field, int nvars, const Scalar& c) {
  Poly p(field, nvars);
  p.add_term(Exponent{}, c);
  return p;
}

Poly Poly::variable(Field field, int nvars, int index) {
  Poly p(field, nvars);
  Exponent e{};
  e[static_cast<std::size_t>(index)] = 1;
  p.add_term(e, field.one());
  return p;
}

int Poly::max_degree() const noexcept { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }
int Poly::min_degree() const noexcept { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }
bool Poly::is_homogeneous() const noexcept { return max_degree() == min_degree(); }

Scalar Poly::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? field_.zero() : it->second;
}

void Poly::add_term(const Exponent& e, const Scalar& c) {
  if (c.field() != field_) throw FieldMismatch("Poly::add_term: coefficient field mismatch");
  for (int i = nvars_; i < 4; ++i)
    if (e[static_cast<std::size_t>(i)] != 0) throw InputError("exponent uses a variable beyond nvars");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_compatible(const Poly& o) const {
  if (field_ != o.field_) throw FieldMismatch("Poly field mismatch");
  if (nvars_ != o.nvars_) throw InputError("Poly nvars mismatch");
}

Poly Poly::operator+(const Poly& o) const {
  check_compatible(o);
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  check_compatible(o);
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Poly Poly::operator-() const {
  Poly r(field_, nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  check_compatible(o);
  Poly r(field_, nvars_);
  if (is_zero() || o.is_zero()) return r;
  if (field_.is_prime()) {
    const std::uint64_t p = field_.modulus();
    std::unordered_map<std::uint64_t, std::uint64_t> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rhs;
    rhs.reserve(o.terms_.size());
    for (const auto& [e, c] : o.terms_) rhs.emplace_back(pack(e), c.residue());
    for (const auto& [e1, c1] : terms_) {
      const std::uint64_t k1 = pack(e1), v1 = c1.residue();
      for (const auto& [k2, v2] : rhs) {
        std::uint64_t& slot = acc[k1 + k2];
        slot += la::mul_mod(v1, v2, p);
        if (slot >= p) slot -= p;
      }
    }
    for (const auto& [k, v] : acc)
      if (v != 0) r.terms_.emplace(unpack(k), field_.from_residue(v));
    return r;
  }
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e{};
      for (std::size_t i = 0; i < 4; ++i) e[i] = static_cast<std::uint16_t>(e1[i] + e2[i]);
      r.add_term(e, c1 * c2);
    }
  return r;
}

Poly Poly::scaled(const Scalar& s) const {
  Poly r(field_, nvars_);
  if (s.is_zero()) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
  return r;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw InputError("negative power");
  Poly result = constant(field_, nvars_, field_.one());
  Poly base = *this;
  while (e != 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(int var) const {
  Poly r(field_, nvars_);
  const auto v = static_cast<std::size_t>(var);
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Exponent d = e;
    --d[v];
    r.add_term(d, c * field_.from_int(e[v]));
  }
  return r;
}

Poly Poly::homogeneous_part(int degree) const {
  Poly r(field_, nvars_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == degree) r.terms_.emplace(e, c);
  return r;
}

Scalar Poly::evaluate(std::span<const Scalar> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw InputError("Poly::evaluate: wrong number of coordinates");
  int maxdeg = 0;
  for (const auto& [e, c] : terms_)
    for (int i = 0; i < nvars_; ++i) maxdeg = std::max<int>(maxdeg, e[static_cast<std::size_t>(i)]);
  std::vector<Vector> powers(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    auto& pw = powers[static_cast<std::size_t>(i)];
    pw.reserve(static_cast<std::size_t>(maxdeg) + 1);
    pw.push_back(field_.one());
    for (int k = 1; k <= maxdeg; ++k) pw.push_back(pw.back() * x[static_cast<std::size_t>(i)]);
  }
  Scalar acc = field_.zero();
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (int i = 0; i < nvars_; ++i) t *= powers[static_cast<std::size_t>(i)][e[static_cast<std::size_t>(i)]];
    acc += t;
  }
  return acc;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

Form::Form(Field field, int nvars, int degree) : poly_(field, nvars), degree_(degree) {
  if (degree < 0) throw InputError("Form: negative degree");
}

Form::Form(Poly poly, int degree) : poly_(std::move(poly)), degree_(degree) {
  if (degree < 0) throw InputError("Form: negative degree");
  for (const auto& [e, c] : poly_.terms())
    if (total_degree(e) != degree) {
      throw InputError("Form: term of degree " + std::to_string(total_degree(e)) + " in a form of degree " +
                       std::to_string(degree));
    }
}

Form Form::from_coefficients(Field field, int nvars, int degree, std::span<const Scalar> coeffs) {
  const auto basis = monomial_basis(nvars, degree);
  if (coeffs.size() != basis.size()) throw InputError("Form::from_coefficients: length mismatch");
  Poly p(field, nvars);
  for (std::size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], coeffs[i]);
  return Form(std::move(p), degree);
}

Form Form::monomial(Field field, int nvars, const Exponent& e, const Scalar& c) {
  Poly p(field, nvars);
  p.add_term(e, c);
  return Form(std::move(p), total_degree(e));
}

Form Form::linear(std::span<const Scalar> coeffs) {
  if (coeffs.empty()) throw InputError("Form::linear: no coefficients");
  const Field f = coeffs.front().field();
  const int n = static_cast<int>(coeffs.size());
  Poly p(f, n);
  for (int i = 0; i < n; ++i) {
    Exponent e{};
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, coeffs[static_cast<std::size_t>(i)]);
  }
  return Form(std::move(p), 1);
}

Vector Form::coefficients() const {
  const auto basis = monomial_basis(nvars(), degree_);
  Vector out(basis.size(), field().zero());
  for (const auto& [e, c] : terms()) out[monomial_index(nvars(), e)] = c;
  return out;
}

Form Form::operator+(const Form& o) const {
  if (degree_ != o.degree_) throw InputError("adding forms of different degrees");
  return Form(poly_ + o.poly_, degree_);
}

Form Form::operator-(const Form& o) const {
  if (degree_ != o.degree_) throw InputError("subtracting forms of different degrees");
  return Form(poly_ - o.poly_, degree_);
}

Form Form::operator*(const Form& o) const { return Form(poly_ * o.poly_, degree_ + o.degree_); }

Form Form::scaled(const Scalar& s) const { return Form(poly_.scaled(s), degree_); }

Form Form::pow(int e) const { return Form(poly_.pow(e), degree_ * e); }

Form Form::derivative(int var) const {
  return Form(poly_.derivative(var), degree_ == 0 ? 0 : degree_ - 1);
}

Form compose(const Form& f, std::span<const Form> subs) {
  if (static_cast<int>(subs.size()) != f.nvars()) throw InputError("compose: need one substitute per variable");
  const int sub_nvars = subs.front().nvars();
  const int sub_deg = subs.front().degree();
  for (const auto& s : subs)
    if (s.nvars() != sub_nvars || s.degree() != sub_deg) throw InputError("compose: substitutes must agree");
  // powers[i][k] = subs[i]^k
  std::vector<std::vector<Poly>> powers(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    powers[i].push_back(Poly::constant(f.field(), sub_nvars, f.field().one()));
    for (int k = 1; k <= f.degree(); ++k) powers[i].push_back(powers[i].back() * subs[i].poly());
  }
  Poly acc(f.field(), sub_nvars);
  for (const auto& [e, c] : f.terms()) {
    Poly t = Poly::constant(f.field(), sub_nvars, c);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (e[i] != 0) t = t * powers[i][e[i]];
    acc = acc + t;
  }
  return Form(std::move(acc), f.degree() * sub_deg);
}

Form substitute_linear(const Form& f, const la::Matrix& a) {
  const auto n = static_cast<std::size_t>(f.nvars());
  if (a.rows() != n || a.cols() != n) throw InputError("substitute_linear: matrix size mismatch");
  std::vector<Form> lin;
  for (std::size_t k = 0; k < n; ++k) lin.push_back(Form::linear(a.row(k)));
  return compose(f, lin);
}

}  // namespace severi::forms
