#pragma once

#include <functional>
#include <vector>

#include "conbar/solve.hpp"

// Discrete Douady-Earle extension: a map from the circle into S^2 is
// extended to the disk by sending z to the conformal barycenter of the
// curve-pushforward of the z-recentered quadrature measure on the circle.

namespace conbar {

// Uniform n-point quadrature of the rotation-invariant measure on S^1.
DiscreteMeasure quadrature_circle(int n);

// Closed piecewise-geodesic curve through m >= 3 samples on S^2, sample i at
// circle parameter 2 pi i / m. Consecutive samples must not be antipodal.
class SphericalCurve {
 public:
  explicit SphericalCurve(std::vector<Eigen::Vector3d> samples);

  Eigen::Index sample_count() const { return static_cast<Eigen::Index>(samples_.size()); }
  const std::vector<Eigen::Vector3d>& samples() const { return samples_; }

  Eigen::Vector3d at_angle(double theta) const;
  Eigen::Vector3d operator()(const SpherePoint& s1_point) const;

 private:
  std::vector<Eigen::Vector3d> samples_;
};

// Any map from the parameter circle (points of S^1 in R^2) into S^2.
using CurveFn = std::function<Eigen::Vector3d(const SpherePoint&)>;

struct PointDiagnostics {
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  double error_bound = 0.0;
};

// One extension value E_n(curve)(z): pull the quadrature back by the shift
// centered at z, map through the curve, and solve for the barycenter of the
// resulting measure starting from its Euclidean center of mass.
std::pair<BallPoint, PointDiagnostics> douady_earle_point(const CurveFn& curve, const BallPoint& z,
                                                          int n, const SolverConfig& cfg);

// Polar evaluation grid: the disk center, n_r rings of n_theta points at
// radii r_max j / n_r, plus the r = 1 ring taken directly from the curve
// (the continuous boundary values; no solve).
struct ExtensionGrid {
  int n_r = 0;
  int n_theta = 0;
  double r_max = 0.0;
  int quadrature = 0;

  // index 0 = center, then ring-major: 1 + (j-1) n_theta + l.
  std::vector<Eigen::Vector3d> images;
  std::vector<PointDiagnostics> diagnostics;
  std::vector<Eigen::Vector3d> boundary_ring;  // n_theta curve values on S^2

  size_t solved_points() const { return images.size(); }
  size_t converged_points() const;
  double median_iterations() const;
};

// Individual point failures are recorded in the diagnostics (image falls back
// to the starting guess); the grid always completes.
ExtensionGrid douady_earle_grid(const CurveFn& curve, int n_r, int n_theta, int n,
                                const SolverConfig& cfg, double r_max = 0.95);

}  // namespace conbar
