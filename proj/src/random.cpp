#include "conbar/random.hpp"

#include <cmath>

namespace conbar {

double SplitMix64::next_gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

SplitMix64 instance_stream(uint64_t seed, uint64_t index) {
  return SplitMix64(SplitMix64(seed).next() + index);
}

SpherePoint sample_uniform_sphere(Eigen::Index d, SplitMix64& rng) {
  if (d < 2) throw std::invalid_argument("sample_uniform_sphere: dimension must be >= 2");
  Vector v(d);
  for (;;) {
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.next_gauss();
    const double n = v.norm();
    if (n > 1e-12) return SpherePoint(v / n);
  }
}

SpherePoint sample_vmf(double kappa, const SpherePoint& xi, SplitMix64& rng) {
  if (!(kappa > 0.0)) throw std::invalid_argument("sample_vmf: kappa must be positive");
  if (xi.dim() != 3) throw std::invalid_argument("sample_vmf: direction must lie on S^2");

  // Inverse CDF of the cosine t on [-1,1] with density ~ exp(kappa t):
  // t = 1 + log(u + (1-u) e^{-2 kappa}) / kappa.
  double u = rng.next_double();
  if (u <= 0.0) u = 0x1.0p-53;
  const double t = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
  const double phi = 2.0 * M_PI * rng.next_double();

  // Orthonormal completion of xi.
  const Vector& z = xi.coords();
  Vector a(3);
  if (std::abs(z[0]) <= std::abs(z[1]) && std::abs(z[0]) <= std::abs(z[2]))
    a << 0.0, -z[2], z[1];
  else if (std::abs(z[1]) <= std::abs(z[2]))
    a << -z[2], 0.0, z[0];
  else
    a << -z[1], z[0], 0.0;
  a /= a.norm();
  Vector b(3);
  b << z[1] * a[2] - z[2] * a[1], z[2] * a[0] - z[0] * a[2], z[0] * a[1] - z[1] * a[0];

  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  Vector x = t * z + s * (std::cos(phi) * a + std::sin(phi) * b);
  return SpherePoint(x / x.norm());
}

namespace {

SpherePoint kink_axis() {
  return SpherePoint((Vector(3) << 0.0, 0.0, 1.0).finished());
}

std::vector<SpherePoint> sample_directions(const EnsembleSpec& spec, uint64_t instance) {
  if (spec.n < 1) throw std::invalid_argument("sample_directions: need n >= 1");
  if (spec.kind != EnsembleKind::UniformSphere && spec.d != 3)
    throw std::invalid_argument("sample_directions: vMF-based ensembles require d = 3");
  SplitMix64 rng = instance_stream(spec.seed, instance);
  std::vector<SpherePoint> dirs;
  dirs.reserve(static_cast<size_t>(spec.n));
  const SpherePoint xi = kink_axis();
  const int flip_after = (spec.n + 1) / 2;
  for (int i = 0; i < spec.n; ++i) {
    switch (spec.kind) {
      case EnsembleKind::UniformSphere:
        dirs.push_back(sample_uniform_sphere(spec.d, rng));
        break;
      case EnsembleKind::VonMisesFisher:
        dirs.push_back(sample_vmf(spec.kappa, xi, rng));
        break;
      case EnsembleKind::HardKink:
        dirs.push_back(sample_vmf(spec.kappa, i < flip_after ? xi : -xi, rng));
        break;
    }
  }
  return dirs;
}

}  // namespace

DiscreteMeasure sample_measure(const EnsembleSpec& spec, uint64_t instance) {
  std::vector<SpherePoint> dirs = sample_directions(spec, instance);
  return DiscreteMeasure(dirs, std::vector<double>(dirs.size(), 1.0 / static_cast<double>(dirs.size())));
}

OpenPolygon sample_polygon(const EnsembleSpec& spec, uint64_t instance) {
  std::vector<SpherePoint> dirs = sample_directions(spec, instance);
  std::vector<double> lengths(dirs.size(), 1.0);
  return OpenPolygon(std::move(dirs), std::move(lengths), Vector::Zero(spec.d));
}

}  // namespace conbar
