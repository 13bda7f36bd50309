#include <doctest.h>

#include <cmath>
#include <limits>

#include "conbar/jacobi.hpp"
#include "conbar/measure.hpp"
#include "test_support.hpp"

using namespace conbar;
using namespace conbar::testing;

namespace {

Vector vec2(double x, double y) { return (Vector(2) << x, y).finished(); }

// Independent potential evaluation for oracles (kept apart from the library
// code path on purpose).
double psi_oracle(const DiscreteMeasure& mu, const Vector& w) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    acc += mu.weights()[i] *
           std::log((mu.atoms().col(i) - w).squaredNorm() / (1.0 - w.squaredNorm()));
  return acc;
}

// Velocity of t -> exp_at(w, t X) at parameter t.
Vector geodesic_velocity(const BallPoint& w, const Tangent& x, double t) {
  const Vector u = x.vec / (1.0 - w.norm2());
  const double m = u.norm();
  const Vector uhat = u / m;
  const double rho = std::tanh(t * m);
  BallPoint c(rho * uhat);
  Vector cdot = m * (1.0 - rho * rho) * uhat;
  return shift_differential(-w, c) * cdot;
}

}  // namespace

TEST_CASE("measure construction and normalization") {
  Matrix atoms(2, 2);
  atoms << 1, 0, 0, 1;
  DiscreteMeasure mu(atoms, vec2(3.0, 1.0));
  CHECK(mu.weights()[0] == doctest::Approx(0.75));
  CHECK(mu.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(DiscreteMeasure(atoms, vec2(-0.1, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure(atoms, vec2(0.0, 0.0)), std::invalid_argument);
  Matrix bad = atoms;
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(DiscreteMeasure(bad, vec2(1.0, 1.0)), std::invalid_argument);
}

TEST_CASE("center of mass and field at the origin") {
  SUBCASE("regular simplex is centralized") {
    for (Eigen::Index d : {2, 3, 5}) {
      DiscreteMeasure mu = simplex_measure(d);
      CHECK(center_of_mass(mu).norm() <= 1e-14);
      CHECK(hyp_norm(field_at_origin(mu)) <= 1e-14);
    }
  }
  SUBCASE("single atom") {
    Matrix one(3, 1);
    one << 0, 0, 1;
    DiscreteMeasure mu(one, Vector::Ones(1));
    CHECK((center_of_mass(mu) - one.col(0)).norm() == 0.0);
    CHECK((field_at_origin(mu).vec - 0.5 * one.col(0)).norm() == 0.0);
  }
  SUBCASE("right-angle example") {
    DiscreteMeasure mu = planar_measure({0, 90, 180}, {1, 1, 1});
    CHECK((center_of_mass(mu) - vec2(0, 1.0 / 3.0)).norm() <= 1e-15);
    CHECK((field_at_origin(mu).vec - vec2(0, 1.0 / 6.0)).norm() <= 1e-15);
    CHECK(hyp_norm(field_at_origin(mu)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("grad of the field at the origin") {
  SUBCASE("equilateral: sum x x^T = 3/2 I") {
    DiscreteMeasure mu = planar_measure({0, 120, 240}, {1, 1, 1});
    CHECK((grad_field_at_origin(mu) + 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("right-angle example: diag(-1/3, -2/3)") {
    DiscreteMeasure mu = planar_measure({0, 90, 180}, {1, 1, 1});
    Matrix expected = vec2(-1.0 / 3.0, -2.0 / 3.0).asDiagonal();
    CHECK((grad_field_at_origin(mu) - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("single atom e1") {
    Matrix one(3, 1);
    one << 1, 0, 0;
    DiscreteMeasure mu(one, Vector::Ones(1));
    Matrix expected = Matrix::Zero(3, 3);
    expected(1, 1) = expected(2, 2) = -1.0;
    CHECK((grad_field_at_origin(mu) - expected).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("field at a general point") {
  SplitMix64 rng(41);

  SUBCASE("reduces to the origin expression") {
    DiscreteMeasure mu = random_measure(3, 8, rng);
    Tangent f = field_at(mu, BallPoint::origin(3));
    CHECK((f.vec - field_at_origin(mu).vec).norm() <= 1e-15);
  }

  SUBCASE("consistency with the shifted evaluation") {
    for (int i = 0; i < 500; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 4 + static_cast<int>(rng.next() % 8), rng);
      BallPoint w = random_ball_point(d, rng, 0.9);
      Vector direct = field_at(mu, w).vec;
      Vector shifted = shift_differential(-w, BallPoint::origin(d)) *
                       field_at_origin(pushforward(mu, w)).vec;
      CHECK((direct - shifted).norm() <= 1e-10);
    }
  }

  SUBCASE("Moebius equivariance of F") {
    for (int i = 0; i < 500; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 6, rng);
      BallPoint w = random_ball_point(d, rng, 0.85);
      BallPoint v = random_ball_point(d, rng, 0.85);
      Vector lhs = shift_differential(v, w) * field_at(mu, w).vec;
      Vector rhs = field_at(pushforward(mu, v), shift(v, w)).vec;
      CHECK((lhs - rhs).norm() <= 1e-9);
    }
  }
}

TEST_CASE("grad of the field at a general point") {
  SplitMix64 rng(43);

  SUBCASE("origin frame agrees with direct formula") {
    DiscreteMeasure mu = random_measure(3, 10, rng);
    Matrix a = grad_field_at(mu, BallPoint::origin(3));
    Matrix b = grad_field_at_origin(mu);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13);
  }

  SUBCASE("spectrum lies in [-1, 0]") {
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 3 + static_cast<int>(rng.next() % 10), rng);
      BallPoint w = random_ball_point(d, rng, 0.9);
      Vector ev = jacobi_eigen(grad_field_at(mu, w)).values;
      CHECK(ev[0] >= -1.0 - 1e-10);
      CHECK(ev[ev.size() - 1] <= 1e-10);
    }
  }

  SUBCASE("matches finite differences of the field along geodesics") {
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 8, rng);
      BallPoint w = random_ball_point(d, rng, 0.8);
      Tangent x = random_unit_tangent(w, rng);
      Matrix m = grad_field_at(mu, w);
      Vector xf = 2.0 / (1.0 - w.norm2()) * x.vec;

      // s(t) = g(F(gamma(t)), gamma'(t)); s'(0) = <X, (grad F) X> in the frame
      auto s = [&](double t) {
        BallPoint p = exp_at(w, Tangent(w, t * x.vec));
        return hyp_inner(field_at(mu, p), Tangent(p, geodesic_velocity(w, x, t)));
      };
      const double fd = (s(h) - s(-h)) / (2.0 * h);
      const double expected = xf.dot(m * xf);
      CHECK(std::abs(fd - expected) / std::max(1.0, sym_operator_norm(m)) <= 1e-5);
    }
  }
}

TEST_CASE("potential") {
  SplitMix64 rng(47);

  SUBCASE("gauge and single-atom closed form") {
    DiscreteMeasure mu = random_measure(3, 6, rng);
    CHECK(potential(mu, BallPoint::origin(3)) == doctest::Approx(0.0).epsilon(1e-14));

    Matrix one(2, 1);
    one << 1, 0;
    DiscreteMeasure single(one, Vector::Ones(1));
    for (double t : {0.1, 0.5, 0.9}) {
      // psi(-t x) = log((1+t)^2 / (1-t^2)) = log((1+t)/(1-t))
      const double got = potential(single, BallPoint(vec2(-t, 0)));
      CHECK(got == doctest::Approx(std::log((1.0 + t) / (1.0 - t))).epsilon(1e-13));
    }
  }

  SUBCASE("rejects evaluation on an atom") {
    Matrix one(2, 1);
    one << 1, 0;
    DiscreteMeasure single(one, Vector::Ones(1));
    CHECK_THROWS_AS(potential(single, BallPoint(vec2(1.0 - 1e-9, 0))), PrecisionLoss);
  }

  SUBCASE("-F is the metric gradient of Psi (finite differences)") {
    const double h = 1e-5;
    for (int i = 0; i < 200; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 8, rng);
      BallPoint w = random_ball_point(d, rng, 0.8);
      Tangent x = random_unit_tangent(w, rng);
      const double fd = (potential(mu, exp_at(w, Tangent(w, h * x.vec))) -
                         potential(mu, exp_at(w, Tangent(w, -h * x.vec)))) /
                        (2.0 * h);
      const double expected = -hyp_inner(field_at(mu, w), x);
      CHECK(std::abs(fd - expected) / std::max(1.0, std::abs(expected)) <= 1e-5);
    }
  }
}

TEST_CASE("pushforward") {
  SplitMix64 rng(53);

  SUBCASE("identity at the origin") {
    DiscreteMeasure mu = random_measure(3, 5, rng);
    DiscreteMeasure same = pushforward(mu, BallPoint::origin(3));
    CHECK((same.atoms() - mu.atoms()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("group law on atoms") {
    for (int i = 0; i < 200; ++i) {
      DiscreteMeasure mu = random_measure(3, 6, rng);
      BallPoint w = random_ball_point(3, rng, 0.9);
      DiscreteMeasure back = pushforward(pushforward(mu, w), -w);
      CHECK((back.atoms() - mu.atoms()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("stability classification") {
  SUBCASE("simplex is stable") {
    StabilityReport r = classify_stability(simplex_measure(3));
    CHECK(r.cls == StabilityClass::Stable);
    CHECK(r.max_cluster_mass == doctest::Approx(0.25));
  }
  SUBCASE("two half masses at antipodes") {
    DiscreteMeasure mu = planar_measure({0, 180}, {0.5, 0.5});
    CHECK(classify_stability(mu).cls == StabilityClass::NiceSemiStable);
  }
  SUBCASE("single half mass") {
    DiscreteMeasure mu = planar_measure({0, 90, 180}, {0.5, 0.25, 0.25});
    CHECK(classify_stability(mu).cls == StabilityClass::SemiStable);
  }
  SUBCASE("dominant atom") {
    DiscreteMeasure mu = planar_measure({0, 90}, {0.6, 0.4});
    CHECK(classify_stability(mu).cls == StabilityClass::Unstable);
    CHECK(classify_stability(mu).max_cluster_mass == doctest::Approx(0.6));
  }
  SUBCASE("mass aggregates over coincident atoms") {
    // the same point split across three entries carries 0.6 in total
    DiscreteMeasure mu = planar_measure({90, 90, 90, 0}, {0.2, 0.2, 0.2, 0.4});
    StabilityReport r = classify_stability(mu);
    CHECK(r.cls == StabilityClass::Unstable);
    CHECK(r.max_cluster_mass == doctest::Approx(0.6));
  }
}

TEST_CASE("nk report") {
  SUBCASE("simplex in d = 3") {
    NKReport r = nk_report(simplex_measure(3));
    CHECK(r.residual_g <= 1e-14);
    CHECK(r.q <= 1e-12);
  }
  SUBCASE("equilateral planar measure") {
    NKReport r = nk_report(planar_measure({0, 120, 240}, {1, 1, 1}));
    CHECK(r.lambda_min == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(r.q <= 1e-12);
  }
  SUBCASE("right-angle example: lambda 1/3, residual 1/3, q 12") {
    NKReport r = nk_report(planar_measure({0, 90, 180}, {1, 1, 1}));
    CHECK(r.lambda_min == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(r.residual_g == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(r.q == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(r.error_bound == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("viewing cones") {
  SplitMix64 rng(59);

  SUBCASE("full sphere and degenerate cone") {
    DiscreteMeasure mu = random_measure(3, 7, rng);
    BallPoint w = random_ball_point(3, rng, 0.8);
    Tangent x = random_unit_tangent(w, rng);
    CHECK(cone_mass(mu, w, x, M_PI) == doctest::Approx(1.0).epsilon(1e-15));

    DiscreteMeasure planar = planar_measure({0, 90, 180}, {1, 1, 1});
    BallPoint zero = BallPoint::origin(2);
    Tangent e1(zero, vec2(0.5, 0.0));
    CHECK(cone_mass(planar, zero, e1, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  SUBCASE("mapping property under shifts") {
    for (int i = 0; i < 300; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
      DiscreteMeasure mu = random_measure(d, 8, rng);
      BallPoint w = random_ball_point(d, rng, 0.8);
      BallPoint v = random_ball_point(d, rng, 0.8);
      Tangent x = random_unit_tangent(w, rng);

      // keep delta away from atom angles so roundoff cannot flip membership
      double delta = 0.3 + 2.4 * rng.next_double();
      const Vector xf = 2.0 / (1.0 - w.norm2()) * x.vec;
      bool clear = false;
      for (int attempt = 0; attempt < 50 && !clear; ++attempt) {
        clear = true;
        for (Eigen::Index j = 0; j < mu.size(); ++j) {
          const double c = xf.dot(boundary_shift(w, mu.atom(j)).coords());
          if (std::abs(c - std::cos(delta)) < 1e-6) {
            clear = false;
            delta = 0.3 + 2.4 * rng.next_double();
            break;
          }
        }
      }
      if (!clear) continue;

      const double lhs = cone_mass(mu, w, x, delta);
      Tangent moved(shift(v, w), shift_differential(v, w) * x.vec);
      const double rhs = cone_mass(pushforward(mu, v), shift(v, w), moved, delta);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("a priori radius") {
  CHECK(a_priori_radius(1.0, M_PI / 2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));

  SUBCASE("monotone in eps and in delta on (0, pi/2]") {
    double prev = a_priori_radius(0.1, 0.3);
    for (double eps : {0.2, 0.4, 0.8}) {
      const double r = a_priori_radius(eps, 0.3);
      CHECK(r < prev);
      prev = r;
    }
    prev = a_priori_radius(0.5, 0.05);
    for (double delta : {0.3, 0.8, M_PI / 2}) {
      const double r = a_priori_radius(0.5, delta);
      CHECK(r < prev);
      prev = r;
    }
  }

  SUBCASE("potential exceeds the center value on the certified sphere (grid oracle)") {
    // caller-provided certificate: atoms 120 degrees apart, delta = pi/3 caps
    // hold at most one atom each, so eps = 1 - 2/3.
    DiscreteMeasure mu = planar_measure({0, 120, 240}, {1, 1, 1});
    const double eps = 1.0 / 3.0;
    const double delta = M_PI / 3.0;
    const double radius = a_priori_radius(eps, delta);
    const double euclid = std::tanh(radius / 2.0);
    double min_psi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4096; ++k) {
      const double a = 2.0 * M_PI * k / 4096;
      min_psi = std::min(min_psi, psi_oracle(mu, euclid * vec2(std::cos(a), std::sin(a))));
    }
    CHECK(min_psi > 0.0);  // Psi_mu(0) = 0 by the gauge
  }
}

TEST_CASE("certified stability bounds the Hessian (uniform convexity)") {
  SplitMix64 rng(61);

  // caller-certified pair for the d = 3 simplex: pairwise angle acos(-1/3)
  // exceeds 2 delta for delta = 0.94, so caps hold at most one atom.
  DiscreteMeasure mu = simplex_measure(3);
  const double delta = 0.94;
  const double eps = 1.0 - 2.0 * 0.25;

  // dense validation of the certificate before using it
  BallPoint zero = BallPoint::origin(3);
  for (int k = 0; k < 4096; ++k) {
    Vector dir = random_direction(3, rng);
    const double mass = cone_mass(mu, zero, Tangent(zero, 0.5 * dir), delta);
    REQUIRE(mass <= (1.0 - eps) / 2.0 + 1e-12);
  }

  const double floor_const = eps * std::sin(delta) * std::sin(delta);
  for (int i = 0; i < 300; ++i) {
    BallPoint w = random_ball_point(3, rng, 0.9);
    const double lambda = smallest_eigenvalue(-grad_field_at(mu, w));
    const double bound = floor_const * std::exp(-2.0 * geodesic_distance(zero, w));
    CHECK(lambda >= bound - 1e-10);
  }
}

TEST_CASE("cone concentration brackets the smallest Hessian eigenvalue") {
  SplitMix64 rng(67);
  // Double-cone measures: two tight clusters at +/- x0 plus an equatorial
  // remainder. beta stays below 0.6 so no tilted cone can trade a cluster
  // atom for a band atom, keeping the infimum over directions at x0.
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = 0.25 + 0.35 * rng.next_double();
    const double outside_mass = 0.1 + 0.35 * rng.next_double();
    Vector x0 = random_direction(3, rng);

    Eigen::Vector3d x0v(x0[0], x0[1], x0[2]);
    Eigen::Vector3d ea = x0v.unitOrthogonal();
    Eigen::Vector3d eb = x0v.cross(ea);
    Vector axis_a = ea, axis_b = eb;
    std::vector<SpherePoint> atoms;
    std::vector<double> weights;
    const int per_cluster = 4;
    for (int s : {+1, -1}) {
      for (int j = 0; j < per_cluster; ++j) {
        const double ang = 0.3 * beta * rng.next_double();
        const double az = 2.0 * M_PI * rng.next_double();
        Vector p = std::cos(ang) * (s * x0) +
                   std::sin(ang) * (std::cos(az) * axis_a + std::sin(az) * axis_b);
        atoms.emplace_back(p);
        weights.push_back((1.0 - outside_mass) / (2 * per_cluster));
      }
    }
    // spread mass on the equatorial band, clear of both cones
    const int band = 6;
    for (int j = 0; j < band; ++j) {
      const double az = 2.0 * M_PI * (j + rng.next_double()) / band;
      Vector p = std::cos(az) * axis_a + std::sin(az) * axis_b;
      atoms.emplace_back(p);
      weights.push_back(outside_mass / band);
    }
    DiscreteMeasure mu(atoms, weights);

    BallPoint zero = BallPoint::origin(3);
    const double inside = cone_mass(mu, zero, Tangent(zero, 0.5 * x0), beta) +
                          cone_mass(mu, zero, Tangent(zero, -0.5 * x0), beta);
    const double a = 1.0 - inside;  // attained at the cluster axis by construction
    const double lambda = smallest_eigenvalue(-grad_field_at_origin(mu));
    const double s2 = std::sin(beta) * std::sin(beta);
    const double c2 = std::cos(beta) * std::cos(beta);
    CHECK(lambda >= a * s2 - 1e-10);
    CHECK(lambda <= s2 + a * c2 + 1e-10);

    // isometry invariance: the same bracket holds viewed from a shifted frame
    BallPoint v = random_ball_point(3, rng, 0.6);
    const double lambda_moved =
        smallest_eigenvalue(-grad_field_at(pushforward(mu, v), shift(v, zero)));
    CHECK(lambda_moved == doctest::Approx(lambda).epsilon(1e-9));
  }
}

TEST_CASE("Lipschitz spot check at the origin") {
  SplitMix64 rng(71);
  for (int i = 0; i < 100; ++i) {
    DiscreteMeasure mu = random_measure(3, 8, rng);
    const double t = 1e-3 * rng.next_double();
    Vector dir = random_direction(3, rng);
    BallPoint w = exp_origin(t * dir);  // d_g(0, w) = 2t
    Matrix diff = grad_field_at(mu, w) - grad_field_at(mu, BallPoint::origin(3));
    CHECK(sym_operator_norm(diff) <= 2.0 * (2.0 * t) + 1e-6);
  }
}

TEST_CASE("atomwise coupling bounds every Wasserstein shift distance") {
  SplitMix64 rng(73);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.next() % 2);
    DiscreteMeasure mu = random_measure(d, 10, rng);
    BallPoint w1 = random_ball_point(d, rng, 0.9);
    BallPoint w2 = random_ball_point(d, rng, 0.9);
    double sup = 0.0;
    for (Eigen::Index j = 0; j < mu.size(); ++j)
      sup = std::max(sup, sphere_distance(boundary_shift(w1, mu.atom(j)),
                                          boundary_shift(w2, mu.atom(j))));
    CHECK(sup <= 2.0 * geodesic_distance(w1, w2) + 1e-10);
  }
}

TEST_CASE("certify_stability finds sound certificates on separated supports") {
  DiscreteMeasure mu = planar_measure({0, 90, 200, 285}, {1.0, 1.2, 0.9, 1.1});
  BallPoint zero = BallPoint::origin(2);
  auto cert = certify_stability(mu, zero);
  REQUIRE(cert.has_value());
  CHECK(cert->epsilon > 0.0);
  // dense soundness sweep over cone directions
  for (int k = 0; k < 2048; ++k) {
    const double a = 2.0 * M_PI * k / 2048;
    Tangent x(zero, 0.5 * vec2(std::cos(a), std::sin(a)));
    CHECK(cone_mass(mu, zero, x, cert->delta) <= (1.0 - cert->epsilon) / 2.0 + 1e-12);
  }
}
