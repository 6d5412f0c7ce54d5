#include "regerr/l1_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace regerr {

namespace {

double weighted_l1(const Vector& x, const Vector& w) { return x.cwiseAbs().dot(w); }

Vector shrink(const Vector& v, const Vector& thresholds) {
  Vector out(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k)) - thresholds(k);
    out(k) = mag > 0.0 ? std::copysign(mag, v(k)) : 0.0;
  }
  return out;
}

Vector project_ball(const Vector& v, double radius) {
  const double n = v.norm();
  if (n <= radius) return v;
  if (radius <= 0.0) return Vector::Zero(v.size());
  return v * (radius / n);
}

// Lower bound on the optimum from a multiplier on the residual constraint,
// scaled into the dual feasible set |A^T nu|_k <= w_k.
double dual_value(const Matrix& A, const Vector& b, const Vector& w, Vector nu, double budget) {
  const Vector at_nu = A.transpose() * nu;
  double scale = 1.0;
  for (Index k = 0; k < w.size(); ++k) scale = std::max(scale, std::abs(at_nu(k)) / w(k));
  nu /= scale;
  return -b.dot(nu) - budget * nu.norm();
}

// Re-solves A_S x_S = b on the support of `z`; accepted only when it keeps the
// equality satisfied and does not raise the weighted l1 norm.
bool polish_support(const Matrix& A, const Vector& b, const Vector& w, double tolerance,
                    Vector& z) {
  const double zmax = z.cwiseAbs().maxCoeff();
  if (zmax == 0.0) return false;
  std::vector<Index> support;
  for (Index k = 0; k < z.size(); ++k)
    if (std::abs(z(k)) > 1e-6 * zmax) support.push_back(k);
  if (static_cast<Index>(support.size()) > A.rows()) return false;

  Matrix sub(A.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Index>(j)) = A.col(support[j]);
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  if (qr.rank() != sub.cols()) return false;
  const Vector xs = qr.solve(b);

  Vector candidate = Vector::Zero(z.size());
  for (std::size_t j = 0; j < support.size(); ++j) candidate(support[j]) = xs(static_cast<Index>(j));

  const double scale = 1.0 + b.norm();
  const double residual = (A * candidate - b).norm();
  if (residual > tolerance * scale) return false;
  const double before = weighted_l1(z, w);
  if (weighted_l1(candidate, w) > before + tolerance * (1.0 + before)) return false;
  z = std::move(candidate);
  return true;
}

}  // namespace

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged:
      return "converged";
    case SolverStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

L1Solution solve_weighted_basis_pursuit(const Matrix& A, const Vector& b, const Vector& weights,
                                        const L1SolverConfig& cfg) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m) throw ArgumentError("right-hand side length does not match design rows");
  if (weights.size() != n) throw ArgumentError("weight vector length does not match design columns");
  if ((weights.array() <= 0.0).any()) throw ArgumentError("l1 weights must be positive");
  if (!(cfg.noise_budget >= 0.0)) throw ArgumentError("noise budget must be non-negative");
  if (!(cfg.tolerance > 0.0)) throw ArgumentError("solver tolerance must be positive");
  if (cfg.max_iter < 1) throw ArgumentError("max_iter must be at least 1");

  L1Solution out;
  out.x = Vector::Zero(n);

  // Zero is feasible, and it is the l1 minimizer whenever it is feasible.
  if (b.norm() <= cfg.noise_budget) {
    out.residual_norm = b.norm();
    return out;
  }

  const Matrix At = A.transpose();
  const Eigen::LLT<Matrix> xstep(Matrix::Identity(n, n) + At * A);

  Vector x = Vector::Zero(n);
  Vector z = Vector::Zero(n);
  Vector u = Vector::Zero(m);
  Vector y1 = Vector::Zero(n);  // scaled multiplier for x = z
  Vector y2 = Vector::Zero(m);  // scaled multiplier for A x - b = u
  double rho = 1.0 / std::max(b.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());

  const double tol = cfg.tolerance;
  const double root_pri = std::sqrt(static_cast<double>(n + m));
  const double root_dual = std::sqrt(static_cast<double>(n));

  Vector best = z;
  double best_score = std::numeric_limits<double>::infinity();
  double best_primal = 0.0;
  double best_dual = 0.0;

  int iter = 0;
  bool converged = false;
  double last_primal = 0.0;
  double last_dual = 0.0;
  while (iter < cfg.max_iter) {
    ++iter;
    x = xstep.solve((z - y1) + At * (b + u - y2));
    const Vector ax = A * x;

    const Vector z_old = z;
    const Vector u_old = u;
    z = shrink(x + y1, weights / rho);
    u = project_ball(ax - b + y2, cfg.noise_budget);

    const Vector r1 = x - z;
    const Vector r2 = ax - b - u;
    y1 += r1;
    y2 += r2;

    const double primal = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    const double dual = rho * ((z - z_old) + At * (u - u_old)).norm();
    const double eps_pri =
        tol * (root_pri + std::max({std::sqrt(x.squaredNorm() + ax.squaredNorm()),
                                    std::sqrt(z.squaredNorm() + u.squaredNorm()), b.norm()}));
    const double eps_dual = tol * (root_dual + rho * (y1 + At * y2).norm());

    last_primal = primal;
    last_dual = dual;
    const double score = std::max(primal / eps_pri, dual / eps_dual);
    if (score < best_score) {
      best_score = score;
      best = z;
      best_primal = primal;
      best_dual = dual;
    }
    if (primal <= eps_pri && dual <= eps_dual) {
      converged = true;
      break;
    }

    if (iter % 10 == 0) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        y1 /= 2.0;
        y2 /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        y1 *= 2.0;
        y2 *= 2.0;
      }
    }
  }

  out.iterations = iter;
  out.status = converged ? SolverStatus::kConverged : SolverStatus::kMaxIterations;
  out.x = converged ? z : best;
  out.primal_residual = converged ? last_primal : best_primal;
  out.dual_residual = converged ? last_dual : best_dual;

  if (converged && cfg.polish && cfg.noise_budget == 0.0)
    out.polished = polish_support(A, b, weights, tol, out.x);

  out.objective = weighted_l1(out.x, weights);
  out.residual_norm = (A * out.x - b).norm();
  out.duality_gap = out.objective - dual_value(A, b, weights, rho * y2, cfg.noise_budget);
  return out;
}

}  // namespace regerr
