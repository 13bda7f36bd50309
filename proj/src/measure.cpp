#include "conbar/measure.hpp"

#include <cmath>
#include <limits>

#include "conbar/jacobi.hpp"

namespace conbar {

namespace {
constexpr double kClusterTol = 1e-12;  // atoms this close count as one point mass
constexpr double kHalfMassTol = 1e-12;
}  // namespace

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "Stable";
    case StabilityClass::NiceSemiStable: return "NiceSemiStable";
    case StabilityClass::SemiStable: return "SemiStable";
    case StabilityClass::Unstable: return "Unstable";
  }
  return "?";
}

DiscreteMeasure::DiscreteMeasure(Matrix atoms, Vector weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.cols() < 1) throw std::invalid_argument("DiscreteMeasure: needs at least one atom");
  if (atoms_.rows() < 2) throw std::invalid_argument("DiscreteMeasure: dimension must be >= 2");
  if (weights_.size() != atoms_.cols())
    throw std::invalid_argument("DiscreteMeasure: atom/weight count mismatch");
  for (Eigen::Index i = 0; i < atoms_.cols(); ++i) {
    const double n = atoms_.col(i).norm();
    if (std::abs(n - 1.0) > 1e-8)
      throw std::invalid_argument("DiscreteMeasure: atom norm deviates from 1 by more than 1e-8");
    atoms_.col(i) /= n;
    if (weights_[i] < 0.0) throw std::invalid_argument("DiscreteMeasure: negative weight");
  }
  const double total = weights_.sum();
  if (!(total > 0.0)) throw std::invalid_argument("DiscreteMeasure: weights must have positive sum");
  weights_ /= total;
}

DiscreteMeasure::DiscreteMeasure(const std::vector<SpherePoint>& atoms,
                                 const std::vector<double>& weights)
    : DiscreteMeasure(
          [&] {
            if (atoms.empty()) throw std::invalid_argument("DiscreteMeasure: needs at least one atom");
            Matrix m(atoms[0].dim(), static_cast<Eigen::Index>(atoms.size()));
            for (size_t i = 0; i < atoms.size(); ++i) {
              detail::require_same_dim(atoms[0].dim(), atoms[i].dim(), "DiscreteMeasure");
              m.col(static_cast<Eigen::Index>(i)) = atoms[i].coords();
            }
            return m;
          }(),
          Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()))) {}

Vector center_of_mass(const DiscreteMeasure& mu) { return mu.atoms() * mu.weights(); }

Tangent field_at_origin(const DiscreteMeasure& mu) {
  return Tangent(BallPoint::origin(mu.dim()), 0.5 * center_of_mass(mu));
}

Matrix grad_field_at_origin(const DiscreteMeasure& mu) {
  const Eigen::Index d = mu.dim();
  Matrix second = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    second.noalias() += mu.weights()[i] * (mu.atoms().col(i) * mu.atoms().col(i).transpose());
  return second - Matrix::Identity(d, d);
}

Tangent field_at(const DiscreteMeasure& mu, const BallPoint& w) {
  detail::require_same_dim(mu.dim(), w.dim(), "field_at");
  Vector acc = Vector::Zero(mu.dim());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    acc += mu.weights()[i] * director(w, mu.atom(i)).vec;
  return Tangent(w, std::move(acc));
}

Matrix grad_field_at(const DiscreteMeasure& mu, const BallPoint& w) {
  // In the g-orthonormal frame at w the unit directors are the shifted atoms,
  // so the frame expression coincides with the origin formula for the
  // pushforward measure.
  return grad_field_at_origin(pushforward(mu, w));
}

double potential(const DiscreteMeasure& mu, const BallPoint& w) {
  detail::require_same_dim(mu.dim(), w.dim(), "potential");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double dist2 = (mu.atoms().col(i) - w.coords()).squaredNorm();
    if (dist2 < kBoundaryGuard) throw PrecisionLoss("potential: evaluation point within guard of an atom");
    acc += mu.weights()[i] * std::log(dist2);
  }
  return acc - std::log(1.0 - w.norm2());
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const BallPoint& w) {
  detail::require_same_dim(mu.dim(), w.dim(), "pushforward");
  Matrix moved(mu.dim(), mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    moved.col(i) = boundary_shift(w, mu.atom(i)).coords();
  return DiscreteMeasure(std::move(moved), mu.weights());
}

StabilityReport classify_stability(const DiscreteMeasure& mu) {
  const Eigen::Index n = mu.size();
  std::vector<double> cluster_mass;
  std::vector<Eigen::Index> representative;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool merged = false;
    for (size_t c = 0; c < representative.size(); ++c) {
      if ((mu.atoms().col(i) - mu.atoms().col(representative[c])).norm() <= kClusterTol) {
        cluster_mass[c] += mu.weights()[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      representative.push_back(i);
      cluster_mass.push_back(mu.weights()[i]);
    }
  }

  double max_mass = 0.0;
  int at_half = 0;
  bool above_half = false;
  for (double m : cluster_mass) {
    max_mass = std::max(max_mass, m);
    if (m > 0.5 + kHalfMassTol)
      above_half = true;
    else if (m >= 0.5 - kHalfMassTol)
      ++at_half;
  }

  StabilityClass cls;
  if (above_half)
    cls = StabilityClass::Unstable;
  else if (at_half == 2)
    cls = StabilityClass::NiceSemiStable;
  else if (at_half == 1)
    cls = StabilityClass::SemiStable;
  else
    cls = StabilityClass::Stable;
  return {cls, max_mass};
}

NKReport nk_report(const DiscreteMeasure& mu) {
  NKReport r;
  r.lambda_min = smallest_eigenvalue(-grad_field_at_origin(mu));
  r.residual_g = center_of_mass(mu).norm();
  if (r.lambda_min > 0.0) {
    r.q = 4.0 * r.residual_g / (r.lambda_min * r.lambda_min);
    r.error_bound = 2.0 * r.residual_g / r.lambda_min;
  } else {
    r.q = std::numeric_limits<double>::infinity();
    r.error_bound = std::numeric_limits<double>::infinity();
  }
  return r;
}

double cone_mass(const DiscreteMeasure& mu, const BallPoint& w, const Tangent& x, double delta) {
  detail::require_same_dim(mu.dim(), w.dim(), "cone_mass");
  if (std::abs(hyp_norm(x) - 1.0) > 1e-6)
    throw std::invalid_argument("cone_mass: direction must be g-unit");
  if (delta < 0.0 || delta > M_PI) throw std::invalid_argument("cone_mass: delta outside [0, pi]");
  // Frame coordinates of a g-unit tangent are a Euclidean unit vector; the
  // frame coordinates of V_y(w) are the shifted atoms.
  const Vector x_frame = 2.0 / (1.0 - w.norm2()) * x.vec;
  const double threshold = std::cos(delta);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const Vector y = boundary_shift(w, mu.atom(i)).coords();
    if (x_frame.dot(y) >= threshold) mass += mu.weights()[i];
  }
  return mass;
}

double a_priori_radius(double eps, double delta) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("a_priori_radius: eps outside (0,1]");
  if (!(delta > 0.0 && delta < M_PI)) throw std::invalid_argument("a_priori_radius: delta outside (0,pi)");
  return -(2.0 / eps) * std::log(std::sin(delta) / 2.0);
}

std::optional<StabilityCertificate> certify_stability(const DiscreteMeasure& mu,
                                                      const BallPoint& w) {
  detail::require_same_dim(mu.dim(), w.dim(), "certify_stability");
  // Candidate cone centers: the g-unit directors toward the atoms.
  std::vector<Tangent> centers;
  centers.reserve(static_cast<size_t>(mu.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    Tangent v = director(w, mu.atom(i));
    centers.push_back(std::move(v));
  }

  std::optional<StabilityCertificate> best;
  double best_score = 0.0;
  for (int k = 1; k < 32; ++k) {
    const double delta = M_PI / 64.0 * k;
    // Covering bound: a delta-cone containing any atom lies inside the
    // 2 delta-cone centered at it, so the atom scan at doubled radius
    // dominates the supremum over arbitrary cone directions.
    double max_mass = 0.0;
    for (const Tangent& x : centers)
      max_mass = std::max(max_mass, cone_mass(mu, w, x, 2.0 * delta));
    const double eps = 1.0 - 2.0 * max_mass;
    if (eps <= 0.0) continue;
    const double score = eps * std::sin(delta) * std::sin(delta);
    if (score > best_score) {
      best_score = score;
      best = StabilityCertificate{eps, delta};
    }
  }
  return best;
}

}  // namespace conbar
