#pragma once

#include <cstdint>
#include <functional>

#include "hdelm/types.hpp"

namespace hdelm {

struct SolveResult {
  Vector phi;
  double residual_norm = 0.0;  // ||R(phi)||_2, recomputed from the inputs
  Index rank = -1;             // numerical rank (linear path; last Jacobian for nonlinear)
  int iterations = 0;          // accepted + rejected trust-region steps, summed over restarts
  int restarts = 0;
  bool converged = false;
};

/// Minimum-norm least squares via LAPACK dgelsd (SVD, divide and conquer)
/// with singular-value cutoff rcond = machine epsilon * max(N, M).
SolveResult min_norm_lsq(const Matrix& a, const Vector& b);

double default_rcond(Index rows, Index cols);

struct NllsqOptions {
  int max_iterations = 100;      // per trust-region run
  double step_tol = 1e-12;       // stop when ||delta|| <= step_tol * (||phi|| + step_tol)
  double residual_tol = 1e-13;   // stop when ||R|| <= residual_tol
  double cost_tol = 1e-12;       // stop when an accepted step reduces the cost by < cost_tol * cost
  double initial_radius = 0.0;   // <= 0: length of the first Gauss-Newton step
  double shrink = 0.25;
  double expand = 2.0;
  double eta_low = 0.25;         // accept steps with actual/predicted reduction > eta_low
  double eta_high = 0.75;        // expand the radius above eta_high (when the step hit the boundary)
  double perturb = 0.5;          // restart perturbation magnitude (relative to max(|phi_best|_inf, 1))
  double restart_threshold = -1; // cost level that triggers restarts; < 0: 1e-10 * number of residuals
  int max_restarts = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Gauss-Newton with a trust region. Each iteration takes the thin SVD of J;
/// the step is the truncated Gauss-Newton step, or the Levenberg-Marquardt
/// step with ||delta|| = radius when that is longer than the radius. The cost
/// is 0.5 ||R||^2.
SolveResult gauss_newton_trust(const ResidualFn& residual, const JacobianFn& jacobian, const Vector& phi0,
                               const NllsqOptions& options);

/// gauss_newton_trust from phi = 0, restarted from randomly perturbed copies
/// of the best iterate while its cost exceeds the restart threshold.
SolveResult nllsq_perturb(const ResidualFn& residual, const JacobianFn& jacobian, Index n_params,
                          const NllsqOptions& options);

}  // namespace hdelm
