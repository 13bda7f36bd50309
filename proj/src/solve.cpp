#include "conbar/solve.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "conbar/jacobi.hpp"

namespace conbar {

namespace {

constexpr double kLambdaFloor = 1e-14;
const double kInf = std::numeric_limits<double>::infinity();

// Everything the solvers need at the origin after shifting the current
// iterate there.
struct OriginState {
  DiscreteMeasure pushed;  // mu_k
  Vector wcm;              // center of mass of mu_k; g-frame coordinates of F_{mu_k}(0)
  double residual;         // |F_{mu_k}(0)|_g
  Matrix hess;             // -grad F_{mu_k}(0), the frame Hessian of the potential
  double lambda;           // smallest eigenvalue of hess
  double q;                // NK quantity, inf when hess is numerically singular
};

OriginState eval_origin(const DiscreteMeasure& mu, const BallPoint& w) {
  DiscreteMeasure pushed = pushforward(mu, w);
  Vector wcm = center_of_mass(pushed);
  const double residual = wcm.norm();
  Matrix hess = -grad_field_at_origin(pushed);
  const double lambda = smallest_eigenvalue(hess);
  const double q =
      lambda > kLambdaFloor ? 4.0 * residual / (lambda * lambda) : kInf;
  return {std::move(pushed), std::move(wcm), residual, std::move(hess), lambda, q};
}

// Merit along the radial geodesic t -> exp_0(t u) for the pushed measure:
// phi(t) = Psi(exp_0(t u)) with its exact derivative. Unit atoms make
// |y - gamma|^2 = 1 - 2 rho <y, uhat> + rho^2 with rho = tanh(t |u|).
class Merit {
 public:
  Merit(const DiscreteMeasure& pushed, const Vector& u)
      : atoms_(pushed.atoms()), weights_(pushed.weights()), m_(u.norm()), uhat_(u / u.norm()) {}

  std::pair<double, double> operator()(double t) const {
    const double rho = std::tanh(t * m_);
    const double flat = 1.0 - rho * rho;
    if (!(flat > 0.0)) return {kInf, 0.0};  // ray saturated at the boundary
    double f = -std::log(flat);
    double slope_sum = 0.0;
    for (Eigen::Index i = 0; i < atoms_.cols(); ++i) {
      const double c = atoms_.col(i).dot(uhat_);
      const double dist2 = 1.0 - 2.0 * rho * c + rho * rho;
      if (dist2 < kBoundaryGuard) return {kInf, 0.0};  // ray ran into an atom
      f += weights_[i] * std::log(dist2);
      slope_sum += weights_[i] * (rho - c) / dist2;
    }
    return {f, 2.0 * m_ * (flat * slope_sum + rho)};
  }

 private:
  const Matrix& atoms_;
  const Vector& weights_;
  double m_;
  Vector uhat_;
};

// Fills next/tau/evals for one step from w given the origin state; returns
// false to abort with PrecisionLimit.
using Stepper = std::function<bool(const OriginState&, const BallPoint&, BallPoint*, double*, int*)>;

SolveResult drive(const DiscreteMeasure& mu, const BallPoint& w0, const SolverConfig& cfg,
                  const Stepper& step) {
  SolveTrace trace;
  BallPoint w = w0;
  std::optional<DiscreteMeasure> centered;
  double error_bound = kInf;

  try {
    for (int k = 0;; ++k) {
      OriginState s = eval_origin(mu, w);
      centered = s.pushed;
      trace.records.push_back({w, s.residual, s.lambda, s.q, 0.0, 0});
      if (s.lambda > kLambdaFloor) {
        error_bound = 2.0 * s.residual / s.lambda;
        if (s.q < 1.0 && error_bound < cfg.epsilon) {
          trace.status = SolveStatus::Converged;
          break;
        }
      } else {
        error_bound = kInf;
      }
      if (k >= cfg.max_iter) {
        trace.status = SolveStatus::MaxIterations;
        break;
      }
      BallPoint next = w;
      double tau = 0.0;
      int evals = 0;
      if (!step(s, w, &next, &tau, &evals)) {
        trace.status = SolveStatus::PrecisionLimit;
        break;
      }
      trace.records.back().tau = tau;
      trace.records.back().line_search_evals = evals;
      w = next;
    }
  } catch (const GeometryError&) {
    // Iterate drifted into the guarded zone; keep the last sound iterate.
    trace.status = SolveStatus::PrecisionLimit;
    if (trace.records.empty()) trace.records.push_back({w, kInf, 0.0, kInf, 0.0, 0});
  }

  BallPoint final_w = trace.records.back().w;
  if (!centered) centered = mu;
  return {std::move(final_w), std::move(*centered), error_bound, std::move(trace)};
}

SolveResult unstable_result(const DiscreteMeasure& mu, const BallPoint& w0) {
  SolveTrace trace;
  trace.status = SolveStatus::UnstableInput;
  std::optional<DiscreteMeasure> pushed;
  try {
    OriginState s = eval_origin(mu, w0);
    pushed = s.pushed;
    trace.records.push_back({w0, s.residual, s.lambda, s.q, 0.0, 0});
  } catch (const GeometryError&) {
    trace.records.push_back({w0, kInf, 0.0, kInf, 0.0, 0});
  }
  return {w0, pushed ? std::move(*pushed) : mu, kInf, std::move(trace)};
}

Vector newton_direction(const OriginState& s) { return s.hess.ldlt().solve(s.wcm / 2.0); }

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::UnstableInput: return "UnstableInput";
    case SolveStatus::PrecisionLimit: return "PrecisionLimit";
  }
  return "?";
}

LineSearchResult line_search_weak_wolfe(
    const std::function<std::pair<double, double>(double)>& phi, double c1, double c2,
    int max_steps) {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0))
    throw std::invalid_argument("line_search_weak_wolfe: need 0 < c1 < c2 < 1");
  const auto [f0, d0] = phi(0.0);
  if (!(d0 < 0.0)) throw std::invalid_argument("line_search_weak_wolfe: slope at 0 not negative");

  LineSearchResult r;
  double lo = 0.0;
  double hi = kInf;
  double t = 1.0;
  while (r.evals < max_steps) {
    const auto [ft, dt] = phi(t);
    ++r.evals;
    if (!(ft <= f0 + c1 * t * d0)) {
      hi = t;  // overshoot (or non-finite merit): shrink
    } else if (dt < c2 * d0) {
      lo = t;  // slope still steep: extend
    } else {
      r.tau = t;
      r.ok = true;
      return r;
    }
    const double next = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
    if (!(next > 0.0) || next == t || (std::isfinite(hi) && hi - lo <= 1e-16 * hi)) break;
    t = next;
  }
  return r;  // bracket collapsed or budget exhausted
}

SolveResult solve_newton_fixed(const DiscreteMeasure& mu, const BallPoint& w0,
                               const SolverConfig& cfg) {
  if (classify_stability(mu).cls != StabilityClass::Stable) return unstable_result(mu, w0);
  return drive(mu, w0, cfg,
               [](const OriginState& s, const BallPoint& w, BallPoint* next, double* tau, int* evals) {
                 if (s.lambda <= kLambdaFloor) return false;  // singular grad F
                 *next = shift(-w, exp_origin(newton_direction(s)));
                 *tau = 1.0;
                 *evals = 0;
                 return true;
               });
}

SolveResult solve_drnm(const DiscreteMeasure& mu, const BallPoint& w0, const SolverConfig& cfg) {
  const StabilityClass cls = classify_stability(mu).cls;
  SolveResult res = drive(
      mu, w0, cfg,
      [&cfg](const OriginState& s, const BallPoint& w, BallPoint* next, double* tau, int* evals) {
        if (s.q < 1.0) {
          // NK regime: plain Newton step, no regularization, no search.
          *next = shift(-w, exp_origin(newton_direction(s)));
          *tau = 1.0;
          *evals = 0;
          return true;
        }
        if (s.residual == 0.0) return false;  // flat spot with singular Hessian
        const Eigen::Index d = s.wcm.size();
        Matrix m = s.hess + cfg.alpha * s.residual * s.residual * Matrix::Identity(d, d);
        Vector u = m.ldlt().solve(s.wcm / 2.0);
        Merit merit(s.pushed, u);
        LineSearchResult ls = line_search_weak_wolfe(merit, cfg.c1, cfg.c2, cfg.max_line_search_steps);
        if (!ls.ok) return false;
        *next = shift(-w, exp_origin(ls.tau * u));
        *tau = ls.tau;
        *evals = ls.evals;
        return true;
      });
  // Best-effort on non-stable inputs: a run that did not converge is reported
  // as an input problem, not a solver one.
  if (res.trace.status != SolveStatus::Converged && cls != StabilityClass::Stable)
    res.trace.status = SolveStatus::UnstableInput;
  return res;
}

SolveResult solve_abikoff_ye(const DiscreteMeasure& mu, const BallPoint& w0,
                             const SolverConfig& cfg) {
  if (classify_stability(mu).cls != StabilityClass::Stable) return unstable_result(mu, w0);
  return drive(mu, w0, cfg,
               [](const OriginState& s, const BallPoint& w, BallPoint* next, double* tau, int* evals) {
                 // exp_0(tau_k u_k) = 2 u_k = w_cm, i.e. the step lands on the
                 // Euclidean center of mass of the shifted measure.
                 *next = shift(-w, BallPoint(s.wcm));
                 *tau = s.residual > 0.0 ? 2.0 * std::atanh(s.residual) / s.residual : 2.0;
                 *evals = 0;
                 return true;
               });
}

SolveResult solve_barycenter(const DiscreteMeasure& mu, const BallPoint& w0,
                             const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::NewtonFixed: return solve_newton_fixed(mu, w0, cfg);
    case Method::DRNM: return solve_drnm(mu, w0, cfg);
    case Method::AbikoffYe: return solve_abikoff_ye(mu, w0, cfg);
  }
  throw std::invalid_argument("solve_barycenter: unknown method");
}

SolveResult solve_barycenter(const DiscreteMeasure& mu, const SolverConfig& cfg) {
  return solve_barycenter(mu, BallPoint::origin(mu.dim()), cfg);
}

}  // namespace conbar
