#pragma once

#include <optional>
#include <vector>

#include "conbar/geometry.hpp"

// Discrete probability measures on the unit sphere and the calculus of the
// mean director field F_mu, its covariant gradient, and the log potential
// Psi_mu whose minimizer is the conformal barycenter.

namespace conbar {

enum class StabilityClass { Stable, NiceSemiStable, SemiStable, Unstable };

const char* to_string(StabilityClass c);

struct StabilityReport {
  StabilityClass cls;
  double max_cluster_mass;  // largest mass supported by a single point
};

// Newton-Kantorovich data at the origin: lambda_min of -grad F_mu(0),
// residual |F_mu(0)|_g = |w_cm|, q = 4 residual / lambda_min^2, and the
// a-posteriori bound 2 residual / lambda_min on the distance to the
// barycenter (infinite when lambda_min vanishes).
struct NKReport {
  double lambda_min;
  double residual_g;
  double q;
  double error_bound;
};

struct StabilityCertificate {
  double epsilon;  // mass margin: every delta-cone holds at most (1-eps)/2
  double delta;    // cone opening angle
};

// mu = sum_i omega_i delta(x_i), weights normalized to total mass 1.
class DiscreteMeasure {
 public:
  // `atoms` has one unit column per atom (renormalized within 1e-8 of unit
  // norm, rejected beyond). Weights must be nonnegative with positive sum.
  DiscreteMeasure(Matrix atoms, Vector weights);
  DiscreteMeasure(const std::vector<SpherePoint>& atoms, const std::vector<double>& weights);

  Eigen::Index dim() const { return atoms_.rows(); }
  Eigen::Index size() const { return atoms_.cols(); }
  const Matrix& atoms() const { return atoms_; }
  const Vector& weights() const { return weights_; }
  SpherePoint atom(Eigen::Index i) const { return SpherePoint(atoms_.col(i)); }

 private:
  Matrix atoms_;    // d x n, unit columns
  Vector weights_;  // n, nonnegative, sums to 1
};

// Euclidean weighted mean of the atoms; |result| <= 1.
Vector center_of_mass(const DiscreteMeasure& mu);

// F_mu(0) = 1/2 sum omega_i x_i.
Tangent field_at_origin(const DiscreteMeasure& mu);

// grad F_mu(0) = sum omega_i x_i x_i^T - id; symmetric, spectrum in [-1, 0].
Matrix grad_field_at_origin(const DiscreteMeasure& mu);

// F_mu(w) = sum omega_i V_{x_i}(w).
Tangent field_at(const DiscreteMeasure& mu, const BallPoint& w);

// grad F_mu(w) expressed in a g-orthonormal frame at w, where the director
// coordinates are exactly the shifted atoms sigma_w(x_i). Spectrum in [-1,0];
// -grad F is the Hessian of the potential in the same frame.
Matrix grad_field_at(const DiscreteMeasure& mu, const BallPoint& w);

// Psi_mu(w) = sum omega_i log(|x_i - w|^2 / (1 - |w|^2)), gauged to 0 at 0.
double potential(const DiscreteMeasure& mu, const BallPoint& w);

// Atoms transported by the boundary shift, weights unchanged.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const BallPoint& w);

// Aggregates atoms closer than 1e-12 into point masses and classifies per
// the half-mass threshold. Borderline-at-1/2 clusters resolve to the weaker
// class.
StabilityReport classify_stability(const DiscreteMeasure& mu);

NKReport nk_report(const DiscreteMeasure& mu);

// Mass of the viewing cone A(w, X; delta) = {y : <X, V_y(w)>_g >= cos delta}.
// X must be g-unit (within 1e-6).
double cone_mass(const DiscreteMeasure& mu, const BallPoint& w, const Tangent& x, double delta);

// Radius -(2/eps) log(sin(delta)/2): outside the ball of this hyperbolic
// radius around a certified point, the potential exceeds its value there.
double a_priori_radius(double eps, double delta);

// Scans delta over {k pi/64} with cone centers at the atom directions,
// evaluated at doubled radius so the bound covers arbitrarily centered
// cones; keeps the pair maximizing eps sin^2(delta). Nullopt when no
// scanned pair certifies.
std::optional<StabilityCertificate> certify_stability(const DiscreteMeasure& mu,
                                                      const BallPoint& w);

}  // namespace conbar
