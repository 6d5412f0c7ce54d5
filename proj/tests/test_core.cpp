#include "regerr/core.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace regerr {
namespace {

TEST(PairIndex, FirstDiagonalPairIsZero) {
  EXPECT_EQ(pair_index(3, 0, 0, PairMode::kDiagonalInclusive), 0u);
}

TEST(PairIndex, StrictIsSymmetric) {
  EXPECT_EQ(pair_index(3, 2, 1, PairMode::kStrict), 2u);
  EXPECT_EQ(pair_index(3, 1, 2, PairMode::kStrict), 2u);
}

TEST(PairIndex, LastPairOfTenMatchesEnumeration) {
  // Brute-force enumeration of all 55 diagonal-inclusive pairs.
  std::size_t k = 0;
  std::size_t found = 0;
  for (int a = 0; a < 10; ++a)
    for (int b = a; b < 10; ++b, ++k)
      if (a == 9 && b == 9) found = k;
  EXPECT_EQ(found, 54u);
  EXPECT_EQ(pair_index(10, 9, 9, PairMode::kDiagonalInclusive), 54u);
}

TEST(PairIndex, RejectsBadIds) {
  EXPECT_THROW(pair_index(3, 3, 0, PairMode::kDiagonalInclusive), ArgumentError);
  EXPECT_THROW(pair_index(3, -1, 0, PairMode::kStrict), ArgumentError);
  EXPECT_THROW(pair_index(3, 1, 1, PairMode::kStrict), ArgumentError);
}

TEST(PairIndexMap, BijectiveForAllSizesUpTo32) {
  for (int n = 1; n <= 32; ++n) {
    for (auto mode : {PairMode::kDiagonalInclusive, PairMode::kStrict}) {
      const PairIndexMap map(n, mode);
      const std::size_t expected =
          mode == PairMode::kStrict ? strict_pair_count(n) : diagonal_pair_count(n);
      ASSERT_EQ(map.size(), expected);
      std::set<std::pair<int, int>> seen;
      std::size_t k = 0;
      const int offset = mode == PairMode::kStrict ? 1 : 0;
      for (int a = 0; a < n; ++a) {
        for (int b = a + offset; b < n; ++b, ++k) {
          ASSERT_EQ(map.index(a, b), k);
          ASSERT_EQ(map.index(b, a), k);
          ASSERT_EQ(map.pair(k), std::make_pair(a, b));
          seen.emplace(a, b);
        }
      }
      ASSERT_EQ(seen.size(), map.size());
    }
  }
}

TEST(PairIndexMap, StrictAndDiagonalMapsAgreeOnPairs) {
  const PairIndexMap strict(7, PairMode::kStrict);
  const PairIndexMap full(7, PairMode::kDiagonalInclusive);
  for (const auto& [a, b] : strict.pairs())
    EXPECT_EQ(full.pair(full.index(a, b)), strict.pair(strict.index(a, b)));
  EXPECT_THROW(full.pair(full.size()), ArgumentError);
}

TEST(Validate, FiniteMatrixIsOk) {
  EXPECT_TRUE(validate(PredictionMatrix(Matrix::Random(4, 3))).empty());
}

TEST(Validate, NamesNonFiniteCoordinates) {
  Matrix m = Matrix::Zero(4, 3);
  m(2, 1) = std::numeric_limits<double>::quiet_NaN();
  const auto v = validate(PredictionMatrix(m));
  ASSERT_EQ(v.size(), 1u);
  ASSERT_TRUE(v[0].where.has_value());
  EXPECT_EQ(*v[0].where, std::make_pair(Index{2}, Index{1}));
  EXPECT_NE(v[0].message.find("(2, 1)"), std::string::npos);
}

TEST(Validate, SingleRegressorIsAViolation) {
  const auto v = validate(PredictionMatrix(Matrix::Zero(5, 1)));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("R < 2"), std::string::npos);
  EXPECT_THROW(require_valid(PredictionMatrix(Matrix::Zero(5, 1))), ValidationError);
}

TEST(Validate, ReportsEveryViolation) {
  Matrix m = Matrix::Zero(3, 1);
  m(0, 0) = std::numeric_limits<double>::infinity();
  m(2, 0) = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(validate(PredictionMatrix(m)).size(), 3u);
}

TEST(PredictionMatrix, NameCountMustMatch) {
  EXPECT_THROW(PredictionMatrix(Matrix::Zero(2, 3), {"a", "b"}), ArgumentError);
  EXPECT_EQ(PredictionMatrix(Matrix::Zero(2, 2)).name(1), "r1");
}

TEST(MomentVector, MatrixRoundTrip) {
  Matrix m(3, 3);
  m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const auto v = MomentVector::from_matrix(m);
  EXPECT_EQ(v.values(), (Vector(6) << 1, 2, 3, 4, 5, 6).finished());
  EXPECT_EQ(v.to_matrix(), m);
  EXPECT_EQ(v.diagonal(), (Vector(3) << 1, 4, 6).finished());
  EXPECT_THROW(MomentVector(3, Vector::Zero(5)), ArgumentError);
}

TEST(Covariance, ZeroBiasGivesMomentMatrix) {
  const auto m = MomentVector(3, (Vector(6) << 1, 0.5, 0, 4, 0.25, 9).finished());
  EXPECT_EQ(assemble_covariance(m, {Vector::Zero(3)}).values, m.to_matrix());
}

TEST(Covariance, SubtractsBiasProduct) {
  // Moment (1,2) = 6 with biases 2 and 3.
  Matrix mm = Matrix::Identity(3, 3);
  mm(1, 2) = mm(2, 1) = 6.0;
  const auto cov = assemble_covariance(MomentVector::from_matrix(mm), {(Vector(3) << 0, 2, 3).finished()});
  EXPECT_EQ(cov.values(1, 2), 0.0);
}

TEST(Covariance, DimensionMismatchThrows) {
  EXPECT_THROW(assemble_covariance(MomentVector::zeros(3), {Vector::Zero(2)}), ArgumentError);
}

TEST(Covariance, AlwaysExactlySymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 9;
    Vector values(static_cast<Index>(diagonal_pair_count(n)));
    for (auto& x : values) x = u(rng);
    Vector bias(n);
    for (auto& x : bias) x = u(rng);
    const auto cov = assemble_covariance(MomentVector(n, values), {bias}).values;
    ASSERT_TRUE((cov.array() == cov.transpose().array()).all());
  }
}

}  // namespace
}  // namespace regerr
