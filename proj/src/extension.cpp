#include "conbar/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conbar {

namespace {
constexpr double kStartClamp = 1.0 - 1e-8;  // starting guesses stay clear of the boundary

Eigen::Vector3d slerp(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double t) {
  const double omega = std::atan2(a.cross(b).norm(), a.dot(b));
  Eigen::Vector3d out;
  if (omega < 1e-9) {
    out = (1.0 - t) * a + t * b;
  } else {
    out = (std::sin((1.0 - t) * omega) * a + std::sin(t * omega) * b) / std::sin(omega);
  }
  return out.normalized();
}
}  // namespace

DiscreteMeasure quadrature_circle(int n) {
  if (n < 3) throw std::invalid_argument("quadrature_circle: need n >= 3");
  Matrix atoms(2, n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    atoms(0, i) = std::cos(a);
    atoms(1, i) = std::sin(a);
  }
  return DiscreteMeasure(std::move(atoms), Vector::Constant(n, 1.0 / n));
}

SphericalCurve::SphericalCurve(std::vector<Eigen::Vector3d> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 3) throw std::invalid_argument("SphericalCurve: need at least 3 samples");
  for (Eigen::Vector3d& s : samples_) {
    const double n = s.norm();
    if (std::abs(n - 1.0) > 1e-8)
      throw std::invalid_argument("SphericalCurve: sample off the unit sphere");
    s /= n;
  }
  for (size_t i = 0; i < samples_.size(); ++i) {
    const Eigen::Vector3d& a = samples_[i];
    const Eigen::Vector3d& b = samples_[(i + 1) % samples_.size()];
    if (a.dot(b) < -1.0 + 1e-9)
      throw std::invalid_argument("SphericalCurve: consecutive samples are antipodal");
  }
}

Eigen::Vector3d SphericalCurve::at_angle(double theta) const {
  const auto m = static_cast<double>(samples_.size());
  double s = theta / (2.0 * M_PI);
  s -= std::floor(s);
  const double u = s * m;
  auto i = static_cast<size_t>(u);
  if (i >= samples_.size()) i = samples_.size() - 1;
  const double t = u - static_cast<double>(i);
  return slerp(samples_[i], samples_[(i + 1) % samples_.size()], t);
}

Eigen::Vector3d SphericalCurve::operator()(const SpherePoint& s1_point) const {
  if (s1_point.dim() != 2)
    throw std::invalid_argument("SphericalCurve: parameter point must lie on S^1");
  return at_angle(std::atan2(s1_point.coords()[1], s1_point.coords()[0]));
}

std::pair<BallPoint, PointDiagnostics> douady_earle_point(const CurveFn& curve, const BallPoint& z,
                                                          int n, const SolverConfig& cfg) {
  if (z.dim() != 2) throw std::invalid_argument("douady_earle_point: z must lie in the disk");
  const DiscreteMeasure quad = quadrature_circle(n);
  // nu_z = sigma_z^# nu_0 realized atomwise as the pushforward along sigma_{-z}.
  const DiscreteMeasure pulled = pushforward(quad, -z);

  Matrix atoms(3, n);
  for (int i = 0; i < n; ++i) atoms.col(i) = curve(pulled.atom(i));
  const DiscreteMeasure pushed(std::move(atoms), Vector::Constant(n, 1.0 / n));

  Vector start = center_of_mass(pushed);
  const double r = start.norm();
  if (r > kStartClamp) start *= kStartClamp / r;

  SolveResult res = solve_drnm(pushed, BallPoint(std::move(start)), cfg);
  PointDiagnostics diag{res.trace.iterations(), res.trace.status, res.error_bound};
  return {res.barycenter, diag};
}

size_t ExtensionGrid::converged_points() const {
  return static_cast<size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                           [](const PointDiagnostics& d) {
                                             return d.status == SolveStatus::Converged;
                                           }));
}

double ExtensionGrid::median_iterations() const {
  if (diagnostics.empty()) return 0.0;
  std::vector<int> counts;
  counts.reserve(diagnostics.size());
  for (const PointDiagnostics& d : diagnostics) counts.push_back(d.iterations);
  std::sort(counts.begin(), counts.end());
  const size_t m = counts.size();
  return m % 2 == 1 ? counts[m / 2] : 0.5 * (counts[m / 2 - 1] + counts[m / 2]);
}

ExtensionGrid douady_earle_grid(const CurveFn& curve, int n_r, int n_theta, int n,
                                const SolverConfig& cfg, double r_max) {
  if (n_r < 1 || n_theta < 3) throw std::invalid_argument("douady_earle_grid: grid too small");
  if (!(r_max > 0.0 && r_max <= 1.0 - 1e-6))
    throw std::invalid_argument("douady_earle_grid: r_max must respect the boundary margin");

  ExtensionGrid grid;
  grid.n_r = n_r;
  grid.n_theta = n_theta;
  grid.r_max = r_max;
  grid.quadrature = n;
  grid.images.reserve(1 + static_cast<size_t>(n_r) * n_theta);
  grid.diagnostics.reserve(grid.images.capacity());

  auto eval = [&](double radius, double angle) {
    Vector z(2);
    z << radius * std::cos(angle), radius * std::sin(angle);
    try {
      auto [w, diag] = douady_earle_point(curve, BallPoint(std::move(z)), n, cfg);
      Eigen::Vector3d img(w.coords()[0], w.coords()[1], w.coords()[2]);
      grid.images.push_back(img);
      grid.diagnostics.push_back(diag);
    } catch (const std::exception&) {
      // Record the failure and fall back to the boundary value under this angle.
      grid.images.push_back(curve(SpherePoint((Vector(2) << std::cos(angle), std::sin(angle)).finished())));
      grid.diagnostics.push_back({0, SolveStatus::PrecisionLimit, std::numeric_limits<double>::infinity()});
    }
  };

  eval(0.0, 0.0);
  for (int j = 1; j <= n_r; ++j) {
    const double radius = r_max * j / n_r;
    for (int l = 0; l < n_theta; ++l) eval(radius, 2.0 * M_PI * l / n_theta);
  }

  grid.boundary_ring.reserve(n_theta);
  for (int l = 0; l < n_theta; ++l) {
    const double angle = 2.0 * M_PI * l / n_theta;
    grid.boundary_ring.push_back(
        curve(SpherePoint((Vector(2) << std::cos(angle), std::sin(angle)).finished())));
  }
  return grid;
}

}  // namespace conbar
