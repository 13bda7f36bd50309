#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

// Poincaré ball model of hyperbolic space on R^d (d >= 2, runtime dimension).
// The model lives on the open unit ball with metric conformal factor
// 4/(1-|w|^2)^2; the unit sphere is the boundary at infinity.

namespace conbar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Points within `kBoundaryGuard` of the singular set (the boundary sphere,
// vanishing shift denominators) are rejected rather than computed with.
inline constexpr double kBoundaryGuard = 1e-14;

// Largest Euclidean norm a ball point may take once clamped (exp_origin
// saturates here instead of rounding onto the boundary).
inline constexpr double kMaxBallRadius = 1.0 - 2e-14;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shift denominator collapsed: the two points pin a transformation that has
// no double-precision representation.
struct DegenerateConfiguration : GeometryError {
  using GeometryError::GeometryError;
};

// Ball point ran into a boundary atom (or the boundary itself); results past
// this point would be garbage.
struct PrecisionLoss : GeometryError {
  using GeometryError::GeometryError;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) throw DimensionMismatch(std::string(where) + ": dimension mismatch");
}
}  // namespace detail

// A point of the open unit ball. Construction enforces |coords| < 1 - guard.
class BallPoint {
 public:
  explicit BallPoint(Vector coords);

  static BallPoint origin(Eigen::Index dim);

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  double norm() const { return std::sqrt(norm2_); }
  double norm2() const { return norm2_; }
  bool is_origin() const { return norm2_ == 0.0; }

 private:
  Vector coords_;
  double norm2_;  // cached squared norm; bitwise equal to coords().squaredNorm()
};

// Inverse translation parameter: shift(-w, .) undoes shift(w, .).
inline BallPoint operator-(const BallPoint& w) { return BallPoint(-w.coords()); }

// A point of the unit sphere. Inputs within 1e-8 of unit norm are
// renormalized; anything farther off is rejected.
class SpherePoint {
 public:
  explicit SpherePoint(Vector coords);

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Vector coords_;
};

inline SpherePoint operator-(const SpherePoint& x) { return SpherePoint(-x.coords()); }

// Tangent vector in the ambient chart, attached to its base point.
struct Tangent {
  BallPoint base;
  Vector vec;

  Tangent(BallPoint base_, Vector vec_) : base(std::move(base_)), vec(std::move(vec_)) {
    detail::require_same_dim(base.dim(), vec.size(), "Tangent");
  }
};

// |X|_g = 2|X| / (1 - |w|^2).
double hyp_norm(const Tangent& t);

// g_w(X, Y); both tangents must share the base point.
double hyp_inner(const Tangent& a, const Tangent& b);

// Riemannian exponential at the origin: a reparameterized linear ray,
// exp_0(v) = tanh(|v|)/|v| * v. Saturates at kMaxBallRadius for arguments so
// long that tanh rounds to 1 in double precision.
BallPoint exp_origin(const Vector& v);
BallPoint exp_origin(const Tangent& v);  // requires base = 0

// Hyperbolic translation taking w to the origin.
BallPoint shift(const BallPoint& w, const BallPoint& z);

// Boundary extension of the shift; acts on the sphere at infinity.
SpherePoint boundary_shift(const BallPoint& w, const SpherePoint& x);

// Differential d sigma_w(z), a similarity matrix with conformal factor
// C(w,z) = (1-|w|^2) / (1 - 2<w,z> + |w|^2 |z|^2).
Matrix shift_differential(const BallPoint& w, const BallPoint& z);
double conformal_factor(const BallPoint& w, const BallPoint& z);

// d_g(w1, w2) = 2 artanh |sigma_{w1}(w2)|.
double geodesic_distance(const BallPoint& w1, const BallPoint& w2);

// Exponential at an arbitrary base point, by conjugation with the shift:
// exp_w(v) = sigma_{-w}(exp_0(d sigma_w(w) v)).
BallPoint exp_at(const BallPoint& w, const Tangent& v);

// Unit tangent at w of the geodesic from w to the boundary point x.
Tangent director(const BallPoint& w, const SpherePoint& x);

// Angular (great-circle) distance on the sphere.
double sphere_distance(const SpherePoint& x, const SpherePoint& y);

}  // namespace conbar
