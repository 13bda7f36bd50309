#include "conbar/geometry.hpp"

#include <cmath>

namespace conbar {

BallPoint::BallPoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("BallPoint: dimension must be >= 2");
  norm2_ = coords_.squaredNorm();
  if (!(std::sqrt(norm2_) < 1.0 - kBoundaryGuard))
    throw PrecisionLoss("BallPoint: point within boundary guard of the unit sphere");
}

BallPoint BallPoint::origin(Eigen::Index dim) { return BallPoint(Vector::Zero(dim)); }

SpherePoint::SpherePoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("SpherePoint: dimension must be >= 2");
  const double n = coords_.norm();
  if (std::abs(n - 1.0) > 1e-8)
    throw std::invalid_argument("SpherePoint: norm deviates from 1 by more than 1e-8");
  coords_ /= n;
}

double hyp_norm(const Tangent& t) { return 2.0 * t.vec.norm() / (1.0 - t.base.norm2()); }

double hyp_inner(const Tangent& a, const Tangent& b) {
  detail::require_same_dim(a.base.dim(), b.base.dim(), "hyp_inner");
  if (!(a.base.coords() - b.base.coords()).isZero(0.0))
    throw std::invalid_argument("hyp_inner: tangents have different base points");
  const double s = 1.0 - a.base.norm2();
  return 4.0 / (s * s) * a.vec.dot(b.vec);
}

BallPoint exp_origin(const Vector& v) {
  const double r = v.norm();
  if (r == 0.0) return BallPoint(Vector::Zero(v.size()));
  double t = std::tanh(r);
  if (t > kMaxBallRadius) t = kMaxBallRadius;
  return BallPoint((t / r) * v);
}

BallPoint exp_origin(const Tangent& v) {
  if (!v.base.is_origin()) throw std::invalid_argument("exp_origin: base point must be 0");
  return exp_origin(v.vec);
}

BallPoint shift(const BallPoint& w, const BallPoint& z) {
  detail::require_same_dim(w.dim(), z.dim(), "shift");
  const double wz = w.coords().dot(z.coords());
  const double denom = 1.0 - 2.0 * wz + w.norm2() * z.norm2();
  if (denom < kBoundaryGuard)
    throw DegenerateConfiguration("shift: denominator below boundary guard");
  // grouping makes the z = w coefficients cancel exactly, so sigma_w(w) = 0
  const double a = 1.0 - w.norm2();
  const double b = 1.0 + (z.norm2() - 2.0 * wz);
  Vector out = (a * z.coords() - b * w.coords()) / denom;
  const double n = out.norm();
  if (n >= 1.0 - kBoundaryGuard) out *= kMaxBallRadius / n;  // rounding pushed past the guard
  return BallPoint(std::move(out));
}

SpherePoint boundary_shift(const BallPoint& w, const SpherePoint& x) {
  detail::require_same_dim(w.dim(), x.dim(), "boundary_shift");
  const double wx = w.coords().dot(x.coords());
  // 1 - 2<w,x> + |w|^2 = |x - w|^2
  const double denom = 1.0 - 2.0 * wx + w.norm2();
  if (denom < kBoundaryGuard)
    throw PrecisionLoss("boundary_shift: base point within guard of the boundary atom");
  Vector num = (1.0 - w.norm2()) * x.coords() - 2.0 * (1.0 - wx) * w.coords();
  num /= denom;
  const double n = num.norm();
  if (!(n > 0.5))  // the exact image is unit; anything else is a blown-up rounding error
    throw PrecisionLoss("boundary_shift: image norm collapsed");
  return SpherePoint(num / n);
}

double conformal_factor(const BallPoint& w, const BallPoint& z) {
  const double denom = 1.0 - 2.0 * w.coords().dot(z.coords()) + w.norm2() * z.norm2();
  if (denom < kBoundaryGuard)
    throw DegenerateConfiguration("conformal_factor: denominator below boundary guard");
  return (1.0 - w.norm2()) / denom;
}

Matrix shift_differential(const BallPoint& w, const BallPoint& z) {
  detail::require_same_dim(w.dim(), z.dim(), "shift_differential");
  const Eigen::Index d = w.dim();
  const Vector& wc = w.coords();
  const Vector& zc = z.coords();
  const double wz = wc.dot(zc);
  const double denom = 1.0 - 2.0 * wz + w.norm2() * z.norm2();
  if (denom < kBoundaryGuard)
    throw DegenerateConfiguration("shift_differential: denominator below boundary guard");
  Matrix inner = z.norm2() * (wc * wc.transpose()) + (wc * zc.transpose()) -
                 (zc * wc.transpose()) - 2.0 * wz * (wc * zc.transpose()) +
                 w.norm2() * (zc * zc.transpose());
  Matrix m = Matrix::Identity(d, d) - (2.0 / denom) * inner;
  return ((1.0 - w.norm2()) / denom) * m;
}

double geodesic_distance(const BallPoint& w1, const BallPoint& w2) {
  const double r = shift(w1, w2).norm();
  return 2.0 * std::atanh(r);
}

BallPoint exp_at(const BallPoint& w, const Tangent& v) {
  detail::require_same_dim(w.dim(), v.base.dim(), "exp_at");
  if (!(v.base.coords() - w.coords()).isZero(0.0))
    throw std::invalid_argument("exp_at: tangent not based at w");
  // d sigma_w(w) = id / (1 - |w|^2): the cross terms of the differential cancel at z = w.
  Vector u = v.vec / (1.0 - w.norm2());
  return shift(-w, exp_origin(u));
}

Tangent director(const BallPoint& w, const SpherePoint& x) {
  SpherePoint y = boundary_shift(w, x);
  return Tangent(w, 0.5 * (1.0 - w.norm2()) * y.coords());
}

double sphere_distance(const SpherePoint& x, const SpherePoint& y) {
  detail::require_same_dim(x.dim(), y.dim(), "sphere_distance");
  const double half_chord = 0.5 * (x.coords() - y.coords()).norm();
  return 2.0 * std::asin(std::min(1.0, half_chord));
}

}  // namespace conbar
