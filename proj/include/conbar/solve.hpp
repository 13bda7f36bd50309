#pragma once

#include <functional>
#include <vector>

#include "conbar/measure.hpp"

// Iterative solvers for the conformal barycenter. All three share the same
// shifted structure: push the measure to the origin at the current iterate,
// compute a search direction there, map back. The Newton-Kantorovich
// quantities (residual, smallest Hessian eigenvalue, q) are tracked every
// iteration and drive both the stopping criterion and the damping logic.

namespace conbar {

enum class Method { NewtonFixed, DRNM, AbikoffYe };

enum class SolveStatus { Converged, MaxIterations, UnstableInput, PrecisionLimit };

const char* to_string(SolveStatus s);

struct SolverConfig {
  Method method = Method::DRNM;
  double epsilon = 1e-8;  // target bound on the hyperbolic distance to the barycenter
  double alpha = 1.0;     // regularization weight
  double c1 = 1e-4;       // Armijo constant, 0 < c1 < c2
  double c2 = 0.9;        // weak Wolfe constant, c1 < c2 < 1
  int max_iter = 1000;
  int max_line_search_steps = 60;
};

struct IterationRecord {
  BallPoint w;            // iterate
  double residual_g;      // |F_{mu_k}(0)|_g = |w_cm(mu_k)|
  double lambda;          // smallest eigenvalue of -grad F_{mu_k}(0)
  double q;               // 4 residual / lambda^2 (inf when lambda ~ 0)
  double tau;             // step size taken from this iterate (0 on the last record)
  int line_search_evals;  // merit evaluations spent on this step
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::MaxIterations;

  int iterations() const { return static_cast<int>(records.size()) - 1; }
};

struct SolveResult {
  BallPoint barycenter;
  DiscreteMeasure centered;  // pushforward of the input by the barycenter
  double error_bound;        // 2 residual / lambda at termination
  SolveTrace trace;
};

struct LineSearchResult {
  double tau = 0.0;
  int evals = 0;
  bool ok = false;
};

// Weak Wolfe bracketing search on a merit function phi reporting
// {phi(t), phi'(t)}. Starts at t = 1 (accepted whenever admissible), halves
// the upper bracket on Armijo failure, doubles or bisects on Wolfe failure.
// Requires phi'(0) < 0; gives up after max_steps evaluations or when the
// bracket collapses.
LineSearchResult line_search_weak_wolfe(
    const std::function<std::pair<double, double>(double)>& phi, double c1, double c2,
    int max_steps);

// Fixed-step shifted Newton. Quadratically convergent under the NK condition
// q < 1; requires a stable measure and a nonsingular Hessian along the way.
SolveResult solve_newton_fixed(const DiscreteMeasure& mu, const BallPoint& w0,
                               const SolverConfig& cfg);

// Damped regularized Newton: direction from the shifted Hessian regularized
// by alpha |F|_g^2, step from the Armijo/weak-Wolfe search. Falls back to a
// plain Newton step (tau = 1, no regularization, no search) whenever the NK
// condition q < 1 holds. Runs best-effort on non-stable inputs.
SolveResult solve_drnm(const DiscreteMeasure& mu, const BallPoint& w0, const SolverConfig& cfg);

// Steepest-descent-type iteration w <- sigma(-w, w_cm(mu_k)); linear rate,
// kept as a baseline.
SolveResult solve_abikoff_ye(const DiscreteMeasure& mu, const BallPoint& w0,
                             const SolverConfig& cfg);

// Dispatch on cfg.method; starts at the origin.
SolveResult solve_barycenter(const DiscreteMeasure& mu, const SolverConfig& cfg);
SolveResult solve_barycenter(const DiscreteMeasure& mu, const BallPoint& w0,
                             const SolverConfig& cfg);

}  // namespace conbar
