#pragma once

#include "regerr/core.hpp"

#include <string_view>

namespace regerr {

struct L1SolverConfig {
  // Radius of the residual ball ||A x - b||_2 <= noise_budget. Zero gives
  // equality-constrained basis pursuit.
  double noise_budget = 0.0;
  // Relative primal/dual feasibility tolerance.
  double tolerance = 1e-8;
  int max_iter = 50000;
  // l1 weight on off-diagonal moments relative to diagonal ones in full moment
  // recovery. Slightly above 1 so that exact ties between equally short l1
  // solutions resolve toward diagonal support.
  double offdiag_weight = 1.0 + 1e-3;
  // With noise_budget == 0, re-solve the equality system on the detected
  // support once the iteration converges.
  bool polish = true;
};

enum class SolverStatus {
  kConverged,
  kMaxIterations,
};

std::string_view to_string(SolverStatus status);

struct L1Solution {
  Vector x;
  SolverStatus status = SolverStatus::kConverged;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // Primal objective minus the value of a scaled dual-feasible point.
  double duality_gap = 0.0;
  double objective = 0.0;
  double residual_norm = 0.0;
  bool polished = false;
};

/// Minimizes sum_k weights(k) |x_k| subject to ||A x - b||_2 <= cfg.noise_budget.
///
/// ADMM on the splitting x = z, A x - b = u with z carrying the weighted l1
/// term and u the ball indicator. The x-step matrix (I + A^T A) does not depend
/// on the penalty, so the penalty is rebalanced between primal and dual
/// residuals without refactoring. Returns z, which is exactly sparse. On
/// kMaxIterations the best iterate seen (smallest combined residual) is returned.
L1Solution solve_weighted_basis_pursuit(const Matrix& A, const Vector& b, const Vector& weights,
                                        const L1SolverConfig& cfg);

}  // namespace regerr
