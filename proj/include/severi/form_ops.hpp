#pragma once

#include <span>
#include <utility>
#include <vector>

#include "severi/matrix.hpp"
#include "severi/poly.hpp"
#include "severi/projective.hpp"
#include "severi/upoly.hpp"

namespace severi::forms {

Scalar evaluate(const Form& f, const ProjPoint& p);
Scalar evaluate(const Form& f, std::span<const Scalar> x);

/// (dF/dx_0, ..., dF/dx_{n-1}) at x.
Vector gradient(const Form& f, std::span<const Scalar> x);

/// sum_i v_i dF/dx_i at p. Throws InputError when v is proportional to p.
Scalar directional_derivative(const Form& f, const ProjPoint& p, std::span<const Scalar> v);

/// F dehomogenized at p.chart() (where p has coordinate 1) and translated so p
/// is the origin. The local variables are the remaining coordinates in index order.
Poly local_expansion(const Form& f, const ProjPoint& p);

/// Least k such that the local expansion at p has a nonzero term of degree k.
/// Throws UndefinedError for the zero form.
int multiplicity_at(const Form& f, const ProjPoint& p);

/// Invertible 4x4 matrix whose first two columns span r and whose last two are
/// the first standard basis vectors (in index order) completing them. With
/// G(y) = F(A y), the line r is {y2 = y3 = 0}.
la::Matrix line_frame(const ProjLine& r);

/// Least total (y2, y3)-degree among the terms of F in line_frame(r) coordinates.
/// Throws UndefinedError for the zero form.
int multiplicity_along_line(const Form& f, const ProjLine& r);

/// The two standard basis vectors (in index order) completing q to a basis;
/// the pencil of lines through q is q + s * (a + t * b), t in k, plus t = infinity.
std::pair<Vector, Vector> pencil_directions(const ProjPoint& q);

/// Coefficients c_0..c_d of F(q + s * v) in s, where v = a + slope * b.
Vector restrict_to_pencil_line(const Form& f, const ProjPoint& q, const Scalar& slope);
/// Same with an explicit direction v; throws InputError when v is proportional to q.
Vector restrict_to_line(const Form& f, const ProjPoint& q, std::span<const Scalar> v);

/// Over F_p: element k is the coefficient of s^k in F(q + s * (a + t * b)),
/// as a polynomial in the slope t.
std::vector<la::UPoly> pencil_restriction(const Form& f, const ProjPoint& q);

/// Local blow-up chart at q along the direction v (a homogeneous vector not
/// proportional to q). Local affine coordinates are u = x * (d + t * w), where
/// d is the affine direction of v at q and w the first standard vector
/// independent of d; the result is g(x, t) = F_local(u) / x^clear, a
/// polynomial in (x, t) with x as variable 0. The infinitely near point of q
/// along v is (x, t) = (0, 0). Throws InputError when some term of local
/// degree < clear survives.
Poly blowup_chart(const Form& f, const ProjPoint& q, std::span<const Scalar> v, int clear);

/// The affine direction of v at q in local coordinates (the vector d above).
Vector affine_direction(const ProjPoint& q, std::span<const Scalar> v);

/// Projective-space points x with x in span(p, v) other than p: p + s v.
Vector combine(std::span<const Scalar> p, const Scalar& s, std::span<const Scalar> v);

}  // namespace severi::forms
