#include "severi/projective.hpp"

#include "severi/errors.hpp"

namespace severi::forms {

ProjPoint::ProjPoint(Vector coords) : c_(std::move(coords)) {
  if (c_.size() != 3 && c_.size() != 4) throw InputError("ProjPoint needs 3 or 4 coordinates");
  const Field f = c_.front().field();
  for (const auto& x : c_)
    if (x.field() != f) throw FieldMismatch("ProjPoint coordinates in different fields");
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (lead == c_.size()) throw InputError("ProjPoint: all coordinates are zero");
  if (!c_[lead].is_one()) {
    const Scalar inv = c_[lead].inverse();
    for (auto& x : c_) x *= inv;
  }
}

ProjPoint ProjPoint::from_ints(Field field, std::initializer_list<std::int64_t> coords) {
  Vector v;
  for (auto c : coords) v.push_back(field.from_int(c));
  return ProjPoint(std::move(v));
}

std::size_t ProjPoint::chart() const noexcept {
  std::size_t i = 0;
  while (c_[i].is_zero()) ++i;
  return i;
}

std::size_t span_rank(std::span<const Vector> rows) {
  if (rows.empty()) return 0;
  return la::rank(la::Matrix::from_rows(rows.front().front().field(), {rows.begin(), rows.end()}));
}

std::size_t span_rank(std::initializer_list<const ProjPoint*> points) {
  std::vector<Vector> rows;
  for (const auto* p : points) rows.push_back(p->coords());
  return span_rank(rows);
}

Vector cross(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != 3 || b.size() != 3) throw InputError("cross product needs 3-vectors");
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ProjLine ProjLine::through(const ProjPoint& a, const ProjPoint& b) {
  if (a.size() != b.size()) throw InputError("ProjLine::through: points in different ambient spaces");
  if (a == b) throw InputError("ProjLine::through: points coincide");
  if (a.size() == 3) return from_dual(cross(a.coords(), b.coords()));
  const auto red = la::row_reduce(la::Matrix::from_rows(a.field(), {a.coords(), b.coords()})).reduced;
  return ProjLine(3, ProjPoint({red.row(0).begin(), red.row(0).end()}),
                  ProjPoint({red.row(1).begin(), red.row(1).end()}), {});
}

ProjLine ProjLine::from_dual(Vector dual) {
  if (dual.size() != 3) throw InputError("dual line vector must have 3 entries");
  ProjPoint canon(std::move(dual));  // normalizes and rejects zero
  const auto ker = la::kernel_basis(la::Matrix::from_rows(canon.field(), {canon.coords()}));
  return ProjLine(2, ProjPoint(ker[0]), ProjPoint(ker[1]), canon.coords());
}

const Vector& ProjLine::dual() const {
  if (ambient_ != 2) throw InputError("dual vector requested for a line of P^3");
  return dual_;
}

bool ProjLine::contains(const ProjPoint& p) const {
  if (p.size() != a_.size()) throw InputError("ProjLine::contains: ambient mismatch");
  return span_rank({&a_, &b_, &p}) == 2;
}

ProjPoint ProjLine::point_at(const Scalar& s, const Scalar& t) const {
  Vector v;
  for (std::size_t i = 0; i < a_.size(); ++i) v.push_back(s * a_[i] + t * b_[i]);
  return ProjPoint(std::move(v));
}

ProjPoint intersect(const ProjLine& a, const ProjLine& b) {
  if (a.ambient() != 2 || b.ambient() != 2) throw InputError("intersect: lines of P^2 expected");
  if (a == b) throw InputError("intersect: lines coincide");
  return ProjPoint(cross(a.dual(), b.dual()));
}

bool lines_meet(const ProjLine& a, const ProjLine& b) {
  if (a.ambient() != 3 || b.ambient() != 3) throw InputError("lines_meet: lines of P^3 expected");
  return span_rank({&a.first(), &a.second(), &b.first(), &b.second()}) < 4;
}

ProjPoint meeting_point(const ProjLine& a, const ProjLine& b) {
  if (!lines_meet(a, b) || a == b) throw InputError("meeting_point: lines are skew or equal");
  // Solve s*a1 + t*a2 = u*b1 + v*b2.
  const Field f = a.field();
  la::Matrix m(f, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    m.set(i, 0, a.first()[i]);
    m.set(i, 1, a.second()[i]);
    m.set(i, 2, -b.first()[i]);
    m.set(i, 3, -b.second()[i]);
  }
  const auto ker = la::kernel_basis(m);
  return a.point_at(ker.front()[0], ker.front()[1]);
}

std::vector<Vector> completion(std::span<const Vector> rows, std::size_t dim) {
  if (rows.empty()) throw InputError("completion of an empty family");
  const Field f = rows.front().front().field();
  std::vector<Vector> current(rows.begin(), rows.end());
  std::vector<Vector> added;
  for (std::size_t k = 0; k < dim && current.size() < dim; ++k) {
    Vector e(dim, f.zero());
    e[k] = f.one();
    current.push_back(e);
    if (span_rank(current) == current.size()) {
      added.push_back(std::move(e));
    } else {
      current.pop_back();
    }
  }
  if (current.size() != dim) throw InputError("completion: input vectors are dependent");
  return added;
}

}  // namespace severi::forms
