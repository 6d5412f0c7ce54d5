#include "regerr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regerr {

namespace {

void check_stats(const PairwiseStats& stats) {
  const auto expected = static_cast<Index>(strict_pair_count(stats.regressors));
  if (stats.delta.size() != expected || stats.delta_sq.size() != expected) {
    std::ostringstream os;
    os << "pairwise stats for R=" << stats.regressors << " need " << expected << " pairs";
    throw ArgumentError(os.str());
  }
}

std::vector<int> negative_diagonals(const Vector& diagonal) {
  std::vector<int> out;
  for (Index r = 0; r < diagonal.size(); ++r)
    if (diagonal(r) < 0.0) out.push_back(static_cast<int>(r));
  return out;
}

}  // namespace

std::string_view to_string(MomentMode mode) {
  return mode == MomentMode::kDiagonal ? "diagonal" : "full";
}

std::string_view to_string(RecoveryMode mode) {
  switch (mode) {
    case RecoveryMode::kDiagonalLeastSquares:
      return "diagonal-least-squares";
    case RecoveryMode::kFullBasisPursuit:
      return "full-basis-pursuit";
    case RecoveryMode::kBiasL1:
      return "bias-l1";
  }
  return "unknown";
}

MomentMode moment_mode_from_string(std::string_view name) {
  if (name == "diagonal") return MomentMode::kDiagonal;
  if (name == "full") return MomentMode::kFull;
  throw ArgumentError("unknown moment mode '" + std::string(name) + "' (expected diagonal or full)");
}

RecoveryMode recovery_mode_from_string(std::string_view name) {
  for (auto mode : {RecoveryMode::kDiagonalLeastSquares, RecoveryMode::kFullBasisPursuit,
                    RecoveryMode::kBiasL1})
    if (to_string(mode) == name) return mode;
  throw ArgumentError("unknown recovery mode '" + std::string(name) + "'");
}

Matrix build_moment_design(int regressors, MomentMode mode) {
  if (mode == MomentMode::kDiagonal && regressors < 3)
    throw ArgumentError("diagonal moment recovery needs R >= 3 (got R=" +
                        std::to_string(regressors) + ")");
  if (mode == MomentMode::kFull && regressors < 2)
    throw ArgumentError("full moment recovery needs R >= 2 (got R=" + std::to_string(regressors) +
                        ")");

  const PairIndexMap rows(regressors, PairMode::kStrict);
  const Index cols = mode == MomentMode::kDiagonal
                         ? regressors
                         : static_cast<Index>(diagonal_pair_count(regressors));
  Matrix a = Matrix::Zero(static_cast<Index>(rows.size()), cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto [i, j] = rows.pair(k);
    const auto row = static_cast<Index>(k);
    if (mode == MomentMode::kDiagonal) {
      a(row, i) = 1.0;
      a(row, j) = 1.0;
    } else {
      const auto diag = [&](int r) {
        return static_cast<Index>(pair_index(regressors, r, r, PairMode::kDiagonalInclusive));
      };
      a(row, diag(i)) = 1.0;
      a(row, diag(j)) = 1.0;
      a(row, static_cast<Index>(pair_index(regressors, i, j, PairMode::kDiagonalInclusive))) = -2.0;
    }
  }
  return a;
}

Matrix build_bias_design(int regressors) {
  if (regressors < 2)
    throw ArgumentError("bias recovery needs R >= 2 (got R=" + std::to_string(regressors) + ")");
  const PairIndexMap rows(regressors, PairMode::kStrict);
  Matrix a = Matrix::Zero(static_cast<Index>(rows.size()), regressors);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto [i, j] = rows.pair(k);
    a(static_cast<Index>(k), i) = 1.0;
    a(static_cast<Index>(k), j) = -1.0;
  }
  return a;
}

MomentVector RecoveryReport::moments() const {
  switch (mode) {
    case RecoveryMode::kDiagonalLeastSquares:
      return MomentVector::from_diagonal(estimate);
    case RecoveryMode::kFullBasisPursuit:
      return {regressors, estimate};
    case RecoveryMode::kBiasL1:
      break;
  }
  throw ArgumentError("a bias report carries no second moments");
}

BiasVector RecoveryReport::bias() const {
  if (mode != RecoveryMode::kBiasL1) throw ArgumentError("a moment report carries no bias vector");
  return {estimate};
}

RecoveryReport recover_moments_diagonal(const PairwiseStats& stats) {
  check_stats(stats);
  const Matrix a = build_moment_design(stats.regressors, MomentMode::kDiagonal);
  // Full column rank for R >= 3.
  const Eigen::ColPivHouseholderQR<Matrix> qr(a);

  RecoveryReport report;
  report.mode = RecoveryMode::kDiagonalLeastSquares;
  report.regressors = stats.regressors;
  report.estimate = qr.solve(stats.delta_sq);
  report.residual_norm = (a * report.estimate - stats.delta_sq).norm();
  report.solver.method = "householder-qr";
  report.solver.primal_residual = report.residual_norm;
  report.clamped = negative_diagonals(report.estimate);
  report.null_space_dimension = static_cast<int>(a.cols() - qr.rank());
  return report;
}

RecoveryReport recover_moments_full(const PairwiseStats& stats, const L1SolverConfig& cfg) {
  check_stats(stats);
  const int n = stats.regressors;
  const Matrix a = build_moment_design(n, MomentMode::kFull);

  Vector weights = Vector::Constant(a.cols(), cfg.offdiag_weight);
  for (int r = 0; r < n; ++r)
    weights(static_cast<Index>(pair_index(n, r, r, PairMode::kDiagonalInclusive))) = 1.0;

  const L1Solution sol = solve_weighted_basis_pursuit(a, stats.delta_sq, weights, cfg);

  RecoveryReport report;
  report.mode = RecoveryMode::kFullBasisPursuit;
  report.regressors = n;
  report.estimate = sol.x;
  report.residual_norm = sol.residual_norm;
  report.noise_budget = cfg.noise_budget;
  report.solver.method = "admm-weighted-basis-pursuit";
  report.solver.iterations = sol.iterations;
  report.solver.primal_residual = sol.primal_residual;
  report.solver.dual_residual = sol.dual_residual;
  report.solver.duality_gap = sol.duality_gap;
  report.solver.tolerance = cfg.tolerance;
  report.solver.status = sol.status;
  report.solver.polished = sol.polished;
  report.clamped = negative_diagonals(report.moments().diagonal());
  if (sol.status != SolverStatus::kConverged) {
    std::ostringstream os;
    os << "solver stopped after " << sol.iterations
       << " iterations without meeting tolerance; estimate is the best iterate";
    report.warnings.push_back(os.str());
  }
  return report;
}

double default_noise_budget(const PairwiseStats& stats) {
  check_stats(stats);
  if (stats.items < 1 || stats.regressors < 2) return 0.0;
  const double r = static_cast<double>(stats.regressors);
  return stats.delta_sq.norm() * std::sqrt(std::log(r * r) / static_cast<double>(stats.items));
}

double median(Vector values) {
  if (values.size() == 0) throw ArgumentError("median of an empty vector");
  std::sort(values.begin(), values.end());
  const Index n = values.size();
  if (n % 2 == 1) return values(n / 2);
  return 0.5 * (values(n / 2 - 1) + values(n / 2));
}

RecoveryReport recover_bias(const PairwiseStats& stats) {
  check_stats(stats);
  const int n = stats.regressors;
  const Matrix a = build_bias_design(n);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Vector particular = cod.solve(stats.delta);

  // l1 line search along the null direction: argmin_c ||p + c 1||_1 = -median(p).
  const double shift = -median(particular);
  Vector representative = particular.array() + shift;

  RecoveryReport report;
  report.mode = RecoveryMode::kBiasL1;
  report.regressors = n;
  report.residual_norm = (a * representative - stats.delta).norm();
  report.estimate = std::move(representative);
  report.solver.method = "min-norm-least-squares+l1-median";
  report.solver.primal_residual = report.residual_norm;
  report.null_space_dimension = static_cast<int>(a.cols() - cod.rank());

  const double scale = std::max(1.0, particular.cwiseAbs().maxCoeff());
  if (report.estimate.cwiseAbs().maxCoeff() > 1e-9 * scale) {
    report.warnings.push_back(
        "biases are relative to the median regressor: a bias shared by a majority of regressors "
        "is undetectable and shows up as an opposite bias on the minority");
  }
  if (n % 2 == 0) {
    Vector sorted = particular;
    std::sort(sorted.begin(), sorted.end());
    if (sorted(n / 2) - sorted(n / 2 - 1) > 1e-9 * scale) {
      report.warnings.push_back(
          "l1 representative is not unique for this even ensemble; returned the midpoint of the "
          "minimizing interval");
    }
  }
  return report;
}

}  // namespace regerr
