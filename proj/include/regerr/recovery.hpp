#pragma once

#include "regerr/core.hpp"
#include "regerr/l1_solver.hpp"
#include "regerr/pairwise_stats.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace regerr {

enum class MomentMode {
  kDiagonal,  // cross moments assumed zero, R unknowns
  kFull,      // all R(R+1)/2 second moments
};

enum class RecoveryMode {
  kDiagonalLeastSquares,
  kFullBasisPursuit,
  kBiasL1,
};

std::string_view to_string(MomentMode mode);
std::string_view to_string(RecoveryMode mode);
MomentMode moment_mode_from_string(std::string_view name);
RecoveryMode recovery_mode_from_string(std::string_view name);

/// Rows follow the strict pair order. Diagonal mode: row (i,j) has +1 at
/// columns i and j. Full mode: +1 at the diagonal columns (i,i), (j,j) and -2
/// at the cross column (i,j) of the diagonal-inclusive index.
/// Throws ArgumentError for R < 3 (diagonal) or R < 2 (full).
Matrix build_moment_design(int regressors, MomentMode mode);

/// Row (i,j) has +1 at column i and -1 at column j. Rank R-1; the all-ones
/// vector spans its null space.
Matrix build_bias_design(int regressors);

struct SolverInfo {
  std::string method;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  double tolerance = 0.0;
  SolverStatus status = SolverStatus::kConverged;
  bool polished = false;
};

struct RecoveryReport {
  RecoveryMode mode = RecoveryMode::kDiagonalLeastSquares;
  int regressors = 0;
  // Diagonal LS: R diagonal moments. Full: R(R+1)/2 moments in canonical
  // order. Bias: R first moments.
  Vector estimate;
  // ||A x - b||_2 of the unclamped estimate.
  double residual_norm = 0.0;
  double noise_budget = 0.0;
  SolverInfo solver;
  // Diagonal moments that came out negative. They are reported unchanged;
  // fusion floors them.
  std::vector<int> clamped;
  // R - rank of the design; 1 for bias recovery, 0 for moment recovery.
  int null_space_dimension = 0;
  std::vector<std::string> warnings;

  bool ok() const { return solver.status == SolverStatus::kConverged; }
  /// Moment recoveries only; diagonal mode fills cross moments with zero.
  MomentVector moments() const;
  /// Bias recovery only.
  BiasVector bias() const;
};

/// Least-squares solution of the diagonal system. Exact for R = 3, the unique
/// least-squares minimizer for R > 3.
RecoveryReport recover_moments_diagonal(const PairwiseStats& stats);

/// Minimum l1 moment vector consistent with the observed squared differences
/// up to cfg.noise_budget. Solver failures come back as status kMaxIterations
/// with the best iterate, not as exceptions.
RecoveryReport recover_moments_full(const PairwiseStats& stats, const L1SolverConfig& cfg = {});

/// Data-driven residual budget for full recovery from finite samples:
/// ||delta_sq||_2 * sqrt(log(R^2) / D). Spurious cross moments of independent
/// errors scale like sqrt(<d_i^2><d_j^2> / D), which the delta_sq entries bound.
double default_noise_budget(const PairwiseStats& stats);

/// Bias representative with minimal l1 norm among all solutions of the bias
/// system. Takes the minimum-norm least-squares solution p, then shifts it by
/// minus the median of its entries (midpoint of the two middle entries for even R).
RecoveryReport recover_bias(const PairwiseStats& stats);

/// Median used by recover_bias; even-length input returns the midpoint of the
/// two middle values.
double median(Vector values);

}  // namespace regerr
