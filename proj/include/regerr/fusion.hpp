#pragma once

#include "regerr/core.hpp"
#include "regerr/synth.hpp"

namespace regerr {

/// Per-regressor scalar weights summing to one.
struct FusionWeights {
  Vector weights;
};

/// w_r proportional to 1 / max(<d_r^2>, floor), floor = 1e-12 * max diagonal
/// moment. Negative recovered variances therefore get the floor and dominate
/// the fusion. Uniform weights when every diagonal sits at the floor.
FusionWeights inverse_variance_weights(const MomentVector& moments);

/// Minimum-MSE weights w proportional to M^{-1} 1 for the full second-moment
/// matrix M, after projecting M onto the PSD cone and flooring eigenvalues at
/// 1e-12 * the largest one. Weights may be negative.
FusionWeights moment_matrix_weights(const MomentVector& moments);

/// fused[i] = sum_r w_r m[i][r].
Vector fuse(const PredictionMatrix& m, const FusionWeights& w);

/// Simple average of all regressors.
Vector average(const PredictionMatrix& m);

struct FusionEvaluation {
  double mse = 0.0;
  // MSE of the unweighted average of the same ensemble.
  double average_mse = 0.0;
};

/// MSE of `fused` against the bundle's truth, with the simple-average baseline
/// computed from the bundle's truth and errors.
FusionEvaluation evaluate_fusion(const Vector& fused, const GroundTruthBundle& bundle);

double mean_squared_error(const Vector& a, const Vector& b);

}  // namespace regerr
