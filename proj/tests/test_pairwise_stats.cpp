#include "regerr/pairwise_stats.hpp"
#include "regerr/synth.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

namespace regerr {
namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

// Entries on a dyadic grid small enough that adding a dyadic shift is exact.
Matrix dyadic_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::uniform_int_distribution<long> k(-(1L << 24), 1L << 24);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = std::ldexp(static_cast<double>(k(rng)), -16);
  return m;
}

TEST(PairwiseStats, TwoPointArithmetic) {
  Matrix m(2, 2);
  m << 1, 1, 3, 1;
  const auto s = compute_pairwise_stats(PredictionMatrix(m));
  EXPECT_EQ(s.delta(0), 1.0);
  EXPECT_EQ(s.delta_sq(0), 2.0);
  EXPECT_EQ(s.mean_difference(1, 0), -1.0);
}

TEST(PairwiseStats, IdenticalColumnsGiveZero) {
  std::mt19937_64 rng(1);
  Matrix m = random_matrix(rng, 50, 3, 2.0);
  m.col(2) = m.col(0);
  const auto s = compute_pairwise_stats(PredictionMatrix(m));
  const auto k = static_cast<Index>(pair_index(3, 0, 2, PairMode::kStrict));
  EXPECT_EQ(s.delta(k), 0.0);
  EXPECT_EQ(s.delta_sq(k), 0.0);
}

TEST(PairwiseStats, IndependentVariancesAdd) {
  NoiseSpec spec;
  for (double sd : {1.0, 2.0, 3.0}) spec.regressors.push_back({NoiseKind::kGaussian, sd, 0.0});
  const auto sim = generate(TruthSource::ramp(-1.0, 1.0), spec, 100000, 11);
  const auto s = compute_pairwise_stats(sim.predictions);
  const Vector expected = (Vector(3) << 5.0, 10.0, 13.0).finished();
  const auto& d = sim.bundle.deltas;
  for (Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(s.delta_sq(k), expected(k), 0.05 * expected(k));
    // Against the realized errors directly.
    const auto [a, b] = PairIndexMap(3, PairMode::kStrict).pair(static_cast<std::size_t>(k));
    const double from_deltas = (d.col(a) - d.col(b)).squaredNorm() / static_cast<double>(d.rows());
    EXPECT_NEAR(s.delta_sq(k), from_deltas, 1e-9 * from_deltas);
  }
}

TEST(PairwiseStats, InvalidMatrixThrows) {
  Matrix m = Matrix::Zero(3, 2);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(compute_pairwise_stats(PredictionMatrix(m)), ValidationError);
  EXPECT_THROW(compute_pairwise_stats(PredictionMatrix(Matrix::Zero(3, 1))), ValidationError);
}

TEST(PairwiseStats, MeanSquareDominatesSquaredMean) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> rows(1, 40);
  std::uniform_int_distribution<int> cols(2, 6);
  std::uniform_real_distribution<double> offset(-100, 100);
  for (int trial = 0; trial < 2000; ++trial) {
    Matrix m = random_matrix(rng, rows(rng), cols(rng), 3.0);
    m.col(0).array() += offset(rng);
    const auto s = compute_pairwise_stats(PredictionMatrix(m));
    for (Index k = 0; k < s.delta.size(); ++k) {
      ASSERT_GE(s.delta_sq(k), 0.0);
      ASSERT_LE(s.delta(k) * s.delta(k), s.delta_sq(k) * (1 + 1e-15) + 1e-300);
    }
  }
}

TEST(PairwiseStats, PermutationEquivariant) {
  std::mt19937_64 rng(5);
  const int n = 5;
  const Matrix m = random_matrix(rng, 30, n, 1.0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix permuted(m.rows(), n);
  for (int c = 0; c < n; ++c) permuted.col(c) = m.col(perm[static_cast<std::size_t>(c)]);

  const auto s = compute_pairwise_stats(PredictionMatrix(m));
  const auto p = compute_pairwise_stats(PredictionMatrix(permuted));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int pa = perm[static_cast<std::size_t>(a)];
      const int pb = perm[static_cast<std::size_t>(b)];
      EXPECT_DOUBLE_EQ(p.mean_square_difference(a, b), s.mean_square_difference(pa, pb));
      EXPECT_NEAR(p.mean_difference(a, b), s.mean_difference(pa, pb), 1e-15);
    }
  }
}

TEST(PairwiseStats, GlobalShiftLeavesStatsBitIdentical) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> k(-(1L << 20), 1L << 20);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = dyadic_matrix(rng, 64, 4);
    Vector shift(m.rows());
    for (auto& x : shift) x = std::ldexp(static_cast<double>(k(rng)), -8);
    const Matrix shifted = m.colwise() + shift;
    const auto a = compute_pairwise_stats(PredictionMatrix(m));
    const auto b = compute_pairwise_stats(PredictionMatrix(shifted));
    ASSERT_TRUE((a.delta.array() == b.delta.array()).all());
    ASSERT_TRUE((a.delta_sq.array() == b.delta_sq.array()).all());
  }
}

TEST(PairwiseStats, GeneralShiftIsInvariantToRounding) {
  std::mt19937_64 rng(10);
  const Matrix m = random_matrix(rng, 500, 4, 1.0);
  const auto a = compute_pairwise_stats(PredictionMatrix(m));
  const auto b = compute_pairwise_stats(PredictionMatrix(m.array() + 3.7));
  EXPECT_TRUE(a.delta.isApprox(b.delta, 1e-12) || (a.delta - b.delta).norm() < 1e-13);
  EXPECT_TRUE(a.delta_sq.isApprox(b.delta_sq, 1e-12));
}

TEST(PairwiseStats, ThreadCountDoesNotChangeBits) {
  std::mt19937_64 rng(4);
  const PredictionMatrix m(random_matrix(rng, 10000, 9, 2.0));
  const auto one = compute_pairwise_stats(m, 1);
  for (unsigned threads : {2u, 3u, 8u, 64u}) {
    const auto many = compute_pairwise_stats(m, threads);
    ASSERT_TRUE((one.delta.array() == many.delta.array()).all());
    ASSERT_TRUE((one.delta_sq.array() == many.delta_sq.array()).all());
  }
}

}  // namespace
}  // namespace regerr
