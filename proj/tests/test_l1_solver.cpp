#include "regerr/l1_solver.hpp"

#include <gtest/gtest.h>

#include <random>

namespace regerr {
namespace {

TEST(L1Solver, SingleEquationPicksLargestColumn) {
  // min |x|_1 s.t. x1 + 2 x2 + 3 x3 = 6  ->  (0, 0, 2).
  Matrix a(1, 3);
  a << 1, 2, 3;
  const auto sol = solve_weighted_basis_pursuit(a, Vector::Constant(1, 6.0), Vector::Ones(3), {});
  EXPECT_EQ(sol.status, SolverStatus::kConverged);
  EXPECT_LT((sol.x - Vector::Unit(3, 2) * 2.0).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(sol.objective, 2.0, 1e-8);
}

TEST(L1Solver, WeightsSteerTheSolution) {
  // Same problem, third column made expensive: 2 * w3 = 2 * 10 > 3 = cost of (0, 3, 0).
  Matrix a(1, 3);
  a << 1, 2, 3;
  const Vector w = (Vector(3) << 1.0, 1.0, 10.0).finished();
  const auto sol = solve_weighted_basis_pursuit(a, Vector::Constant(1, 6.0), w, {});
  EXPECT_LT((sol.x - Vector::Unit(3, 1) * 3.0).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(L1Solver, FeasibleZeroIsReturnedImmediately) {
  const Matrix a = Matrix::Random(4, 6);
  L1SolverConfig cfg;
  cfg.noise_budget = 1.0;
  const Vector b = Vector::Constant(4, 0.1);
  const auto sol = solve_weighted_basis_pursuit(a, b, Vector::Ones(6), cfg);
  EXPECT_EQ(sol.x, Vector::Zero(6));
  EXPECT_EQ(sol.iterations, 0);
}

TEST(L1Solver, DualityGapClosesOnConvergence) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Matrix a(20, 40);
  for (auto& x : a.reshaped()) x = g(rng);
  Vector truth = Vector::Zero(40);
  truth(3) = 2.0;
  truth(17) = -1.0;
  truth(30) = 0.5;
  for (double budget : {0.0, 0.1}) {
    L1SolverConfig cfg;
    cfg.noise_budget = budget;
    cfg.polish = false;
    const auto sol = solve_weighted_basis_pursuit(a, a * truth, Vector::Ones(40), cfg);
    ASSERT_EQ(sol.status, SolverStatus::kConverged);
    EXPECT_GT(sol.duality_gap, -1e-5);
    EXPECT_LT(sol.duality_gap, 1e-5);
    EXPECT_LE(sol.residual_norm, budget + 1e-6);
    if (budget == 0.0) {
      EXPECT_LT((sol.x - truth).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(L1Solver, RejectsBadArguments) {
  const Matrix a = Matrix::Ones(2, 3);
  const Vector b = Vector::Ones(2);
  EXPECT_THROW(solve_weighted_basis_pursuit(a, Vector::Ones(3), Vector::Ones(3), {}), ArgumentError);
  EXPECT_THROW(solve_weighted_basis_pursuit(a, b, Vector::Ones(2), {}), ArgumentError);
  EXPECT_THROW(solve_weighted_basis_pursuit(a, b, Vector::Zero(3), {}), ArgumentError);
  L1SolverConfig cfg;
  cfg.noise_budget = -1.0;
  EXPECT_THROW(solve_weighted_basis_pursuit(a, b, Vector::Ones(3), cfg), ArgumentError);
  cfg = {};
  cfg.max_iter = 0;
  EXPECT_THROW(solve_weighted_basis_pursuit(a, b, Vector::Ones(3), cfg), ArgumentError);
}

TEST(L1Solver, StatusNames) {
  EXPECT_EQ(to_string(SolverStatus::kConverged), "converged");
  EXPECT_EQ(to_string(SolverStatus::kMaxIterations), "max_iterations");
}

}  // namespace
}  // namespace regerr
