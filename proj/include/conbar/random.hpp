#pragma once

#include <cstdint>

#include "conbar/polygon.hpp"

// Deterministic sampling. All randomness flows through SplitMix64 so that
// identical (seed, instance) pairs reproduce identical streams on any
// platform; parallel and serial ensemble runs therefore agree bit for bit.

namespace conbar {

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (explicit formulas, no library
  // distribution objects, to keep streams portable).
  double next_gauss();

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream for instance i of a seeded ensemble: state seeded with
// mix(seed) + i, where mix is one SplitMix64 output of the master seed.
SplitMix64 instance_stream(uint64_t seed, uint64_t index);

// Normalized vector of d independent standard normals.
SpherePoint sample_uniform_sphere(Eigen::Index d, SplitMix64& rng);

// von Mises-Fisher on S^2 with density proportional to exp(kappa <xi, x>):
// the cosine against xi is drawn by the closed-form inverse CDF, the azimuth
// uniformly.
SpherePoint sample_vmf(double kappa, const SpherePoint& xi, SplitMix64& rng);

enum class EnsembleKind { UniformSphere, VonMisesFisher, HardKink };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::UniformSphere;
  int n = 64;           // atoms / edges per instance
  Eigen::Index d = 3;   // ambient dimension (vMF and HardKink require 3)
  int samples = 1;      // instance count
  uint64_t seed = 0;
  double kappa = 1.0;   // vMF / HardKink concentration
};

// Equal-weight measure of n atoms drawn per the spec's kind. HardKink flips
// the vMF axis after the first ceil(n/2) draws.
DiscreteMeasure sample_measure(const EnsembleSpec& spec, uint64_t instance);

// Unit-length-edge polygonal line with directions drawn like sample_measure.
OpenPolygon sample_polygon(const EnsembleSpec& spec, uint64_t instance);

}  // namespace conbar
