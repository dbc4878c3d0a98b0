#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "severi/conditions.hpp"
#include "severi/poly.hpp"
#include "severi/projective.hpp"
#include "severi/upoly.hpp"

namespace severi::construct {

using conditions::LinearSystem;
using forms::Field;
using forms::Form;
using forms::ProjLine;
using forms::ProjPoint;
using forms::Scalar;
using forms::Vector;

/// Counts of discarded draws keyed by reason.
using Census = std::map<std::string, int>;

/// The fixed point of multiplicity n - 3 (resp. n - 2 for the system L).
ProjPoint base_point(Field field);

/// Maximal number of tangents, floor((3n - 4) / 2).
int max_ell(int n);

struct Tangent {
  std::uint64_t slope;  ///< pencil slope t; direction is (1, t, 0)
  ProjLine line;
  ProjPoint point;
  Vector direction;
};

struct TangentReport {
  la::UPoly discriminant;
  /// Rational roots of the discriminant, ascending.
  std::vector<std::uint64_t> rational_slopes;
  /// One per rational slope whose double root is not q, in slope order.
  std::vector<Tangent> tangents;
  std::vector<std::string> excluded;
};

/// Discriminant of the residual quadratic on the pencil through q. Γ has
/// degree n - 1 and multiplicity n - 3 at q.
TangentReport tangent_lines(const Form& gamma, const ProjPoint& q);

/// Why Γ is unusable, or nullopt. Reasons: "multiplicity", "tangent-cone",
/// "tangent-at-q", "discriminant-degree", "singular-off-q".
std::optional<std::string> gamma_defect(const Form& gamma, const ProjPoint& q);

struct GammaDraw {
  Form gamma;
  ProjPoint q;
  int attempts;
  Census census;
};

/// Γ of degree n - 1 with an ordinary (n - 3)-fold point at q and no rational
/// singular point elsewhere. With planted > 0 the draw is restricted to curves
/// tangent to `planted` seeded lines of the pencil at seeded points.
/// Throws GenerationError after `retries` rejected draws.
GammaDraw random_gamma(int n, Field field, std::uint64_t seed, int planted = 0, int retries = 64);

struct PlaneModel {
  int n;
  Field field;
  std::uint64_t seed;
  Form gamma;
  ProjPoint q;
  std::vector<Tangent> tangents;
  /// Simple base points on Γ: one when eps = 1, 3n - 4 - 2 ell in general.
  std::vector<ProjPoint> qbar;
  int ell;
  int eps;
  la::UPoly discriminant;
  std::size_t rational_tangents;
  LinearSystem system;

  conditions::Scheme scheme() const { return system.scheme; }
};

/// Scheme of L: FatPoint{q, n-2}, tangencies, simple points.
conditions::Scheme plane_scheme(int n, const ProjPoint& q, std::span<const Tangent> tangents,
                                std::span<const ProjPoint> qbar);

/// ell defaults to max_ell(n). Throws InputError for a bad ell, GenericityError
/// when projdim(L) != 3, GenerationError when no usable Γ turns up.
PlaneModel build_plane_model(int n, Field field, std::uint64_t seed, std::optional<int> ell = std::nullopt,
                             int retries = 64);

/// Degree-n equation of the image of P^2 under the 4 forms, by interpolation
/// at binomial(n+3,3) + 32 sampled image points. Throws SamplingError when the
/// kernel is 0, DegreeError when it has dimension >= 2.
Form implicitize(std::span<const Form> basis, int n, std::uint64_t seed, std::span<const ProjPoint> avoid = {});

struct NodePrediction {
  ProjLine r;
  /// nodes[2i]: contracted exceptional over q_i, nodes[2i+1]: contracted line r_i.
  std::vector<ProjPoint> nodes;
  std::vector<ProjLine> node_lines;
};

/// Throws GenericityError when a predicted point is undefined or the two
/// independent evaluations of a node disagree.
NodePrediction predicted_nodes(const PlaneModel& model, std::span<const Form> basis, std::uint64_t seed);

/// Image of a plane point under the basis; nullopt at a base point.
std::optional<ProjPoint> map_point(std::span<const Form> basis, std::span<const Scalar> x);

struct Check {
  std::string id;
  bool pass;
  nlohmann::json witness;
};

struct SurfaceModel {
  int n;
  Field field;
  std::uint64_t seed;
  std::uint64_t sub_seed;
  int attempt;
  Form surface;
  ProjLine r;
  std::vector<ProjPoint> nodes;
  std::vector<ProjLine> node_lines;
  PlaneModel plane;
  std::vector<Check> checks;
  Census census;

  bool all_pass() const;
};

/// Every invariant of the model recomputed from its stored data.
std::vector<Check> check_surface(const SurfaceModel& m);

struct BuildOptions {
  int retries = 64;
  std::optional<int> ell;
};

/// Plane model, implicitization, nodes and checks, retried over sub-seeds
/// until every check passes. Throws GenerationError with the census otherwise.
SurfaceModel build_sigma(int n, Field field, std::uint64_t seed, const BuildOptions& options = {});

/// Sub-seed used by attempt k of build_sigma.
std::uint64_t sub_seed(std::uint64_t seed, int attempt);

nlohmann::json plane_to_json(const PlaneModel& m);
PlaneModel plane_from_json(const nlohmann::json& j);
nlohmann::json checks_to_json(std::span<const Check> checks);
/// The bundle written by `severilab construct`.
nlohmann::json bundle_to_json(const SurfaceModel& m);
/// Reads a bundle; stored checks are kept, not recomputed. Throws FormatError.
SurfaceModel bundle_from_json(const nlohmann::json& j);

/// The auxiliary plane systems M, N, P of a model (degrees 3n-2 and 3n-2-ell).
struct AuxiliaryDims {
  int m;
  int n;
  int p;
  int expected_m;
  int expected_n_min;
  int expected_p;
};
AuxiliaryDims auxiliary_systems(const PlaneModel& model);

}  // namespace severi::construct
