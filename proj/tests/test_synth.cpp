#include "regerr/pairwise_stats.hpp"
#include "regerr/synth.hpp"

#include <gtest/gtest.h>

namespace regerr {
namespace {

NoiseSpec gaussian_spec(std::initializer_list<double> sds) {
  NoiseSpec spec;
  for (double sd : sds) spec.regressors.push_back({NoiseKind::kGaussian, sd, 0.0});
  return spec;
}

TEST(SplitMix64, MatchesReferenceSequence) {
  // First two outputs of the reference generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(RandomStream, EngineIsStandardMersenneTwister) {
  // The 10000th draw of a default-constructed mt19937_64 is fixed by the standard.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ULL);

  RandomStream stream(3, 1);
  std::mt19937_64 engine(splitmix64(3 + 2 * 0x9E3779B97F4A7C15ULL));
  for (int i = 0; i < 100; ++i) ASSERT_EQ(stream.next(), engine());
}

TEST(RandomStream, UniformUsesTopBits) {
  RandomStream a(11, 0);
  RandomStream b(11, 0);
  for (int i = 0; i < 100; ++i) {
    const double expected = std::ldexp(static_cast<double>(b.next() >> 11), -53);
    const double u = a.uniform();
    ASSERT_EQ(u, expected);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, StreamsDiffer) {
  RandomStream a(5, 0);
  RandomStream b(5, 1);
  RandomStream c(6, 0);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_NE(x, c.next());
}

TEST(RandomStream, GaussianMoments) {
  RandomStream rng(9, 0);
  double s1 = 0.0;
  double s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian(2.0);
    s1 += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.03);
  EXPECT_NEAR(s2 / n, 4.0, 0.08);
}

TEST(Generate, ZeroNoiseReproducesTruth) {
  const auto sim = generate(TruthSource::ramp(-1, 3), gaussian_spec({0, 0, 0}), 50, 1);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(sim.predictions.data().col(r), sim.bundle.truth);
  EXPECT_EQ(sim.bundle.true_moments.values(), Vector::Zero(6));
  EXPECT_EQ(sim.bundle.true_biases.values, Vector::Zero(3));
}

TEST(Generate, SampleMomentsNearVariances) {
  const auto sim = generate(TruthSource::ramp(0, 1), gaussian_spec({1, 2, 3}), 100000, 4);
  const Vector d = sim.bundle.true_moments.diagonal();
  EXPECT_NEAR(d(0), 1.0, 0.05);
  EXPECT_NEAR(d(1), 4.0, 0.2);
  EXPECT_NEAR(d(2), 9.0, 0.45);
}

TEST(Generate, BiasesShiftDifferencesExactly) {
  NoiseSpec spec;
  const double v = 0.625;
  spec.regressors = {{NoiseKind::kGaussian, 0.0, 0.0},
                     {NoiseKind::kGaussian, 0.0, v},
                     {NoiseKind::kGaussian, 0.0, v}};
  const auto sim = generate(TruthSource::constant(2.0), spec, 100, 0);
  const auto stats = compute_pairwise_stats(sim.predictions);
  EXPECT_EQ(stats.delta(0), -v);
  EXPECT_EQ(stats.delta(1), -v);
  EXPECT_EQ(stats.delta(2), 0.0);
}

TEST(Generate, PredictionIsTruthPlusError) {
  NoiseSpec spec = gaussian_spec({0.5, 1.0, 1.5, 2.0});
  spec.regressors[2].bias = 0.3;
  spec.correlated_pairs.push_back({0, 3, 0.7, NoiseKind::kUniform});
  const auto sim = generate(TruthSource::ramp(0, 5), spec, 1000, 12);
  const Matrix rebuilt = sim.bundle.deltas.colwise() + sim.bundle.truth;
  EXPECT_LT((sim.predictions.data() - rebuilt).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generate, SameSeedSameBits) {
  NoiseSpec spec = gaussian_spec({1, 2, 3});
  spec.correlated_pairs.push_back({0, 1, 0.5, NoiseKind::kGaussian});
  const auto a = generate(TruthSource::ramp(0, 1), spec, 500, 99);
  const auto b = generate(TruthSource::ramp(0, 1), spec, 500, 99);
  const auto c = generate(TruthSource::ramp(0, 1), spec, 500, 100);
  EXPECT_TRUE((a.predictions.data().array() == b.predictions.data().array()).all());
  EXPECT_FALSE((a.predictions.data().array() == c.predictions.data().array()).all());
}

TEST(Generate, FrozenDrawsAcrossBuilds) {
  NoiseSpec spec;
  spec.regressors = {{NoiseKind::kGaussian, 1.0, 0.0}, {NoiseKind::kUniform, 1.0, 0.0}};
  const auto sim = generate(TruthSource::constant(0.0), spec, 3, 42);
  const Matrix& p = sim.predictions.data();
  // Recorded once from this generator; any change to the stream layout breaks them.
  const double expected[3][2] = {{0x1.63bfba218da4fp-1, -0x1.c0bf44173ffbp-1},
                                 {0x1.4a9de7e4d2dd3p-1, -0x1.4eddf452caa9ep-1},
                                 {0x1.8d1a2b5cf5b8ep-2, 0x1.49681f041013p-2}};
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 2; ++r) EXPECT_EQ(p(i, r), expected[i][r]) << i << "," << r;
}

TEST(Generate, BundleMomentsMatchDeltas) {
  NoiseSpec spec = gaussian_spec({1, 2, 3});
  spec.regressors[1].bias = -0.5;
  const auto sim = generate(TruthSource::ramp(0, 1), spec, 5000, 8);
  const Matrix& d = sim.bundle.deltas;
  const Matrix direct = d.transpose() * d / static_cast<double>(d.rows());
  const Matrix stored = sim.bundle.true_moments.to_matrix();
  EXPECT_LT(((direct - stored).array() / direct.array().abs().max(1e-300)).abs().maxCoeff(), 1e-12);
  const Vector means = d.colwise().mean();
  EXPECT_LT((means - sim.bundle.true_biases.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generate, UniformVarianceIsWidthSquaredOverThree) {
  NoiseSpec spec;
  spec.regressors = {{NoiseKind::kUniform, 0.6, 0.0}};
  const auto sim = generate(TruthSource::constant(0), spec, 200000, 3);
  EXPECT_NEAR(sim.bundle.true_moments.at(0, 0), 0.12, 0.12 * 0.02);
  EXPECT_DOUBLE_EQ(expected_moments(spec).at(0, 0), 0.12);
}

TEST(Generate, SharedNoiseCorrelatesPair) {
  NoiseSpec spec = gaussian_spec({1, 1, 1});
  spec.correlated_pairs.push_back({0, 2, 1.5, NoiseKind::kGaussian});
  const auto sim = generate(TruthSource::constant(0), spec, 200000, 5);
  EXPECT_NEAR(sim.bundle.true_moments.at(0, 2), 2.25, 0.1);
  EXPECT_NEAR(sim.bundle.true_moments.at(0, 1), 0.0, 0.02);
  const auto expected = expected_moments(spec);
  EXPECT_DOUBLE_EQ(expected.at(0, 2), 2.25);
  EXPECT_DOUBLE_EQ(expected.at(0, 0), 3.25);
  EXPECT_DOUBLE_EQ(expected.at(1, 2), 0.0);
}

TEST(ExpectedMoments, IncludeBiasProducts) {
  NoiseSpec spec = gaussian_spec({1, 2});
  spec.regressors[0].bias = 2.0;
  spec.regressors[1].bias = -1.0;
  const auto m = expected_moments(spec);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(m.at(0, 1), -2.0);
  EXPECT_DOUBLE_EQ(m.at(1, 1), 5.0);
}

TEST(NoiseSpec, ValidationErrors) {
  EXPECT_THROW(NoiseSpec{}.validate(), ArgumentError);
  NoiseSpec spec = gaussian_spec({1, -1});
  EXPECT_THROW(spec.validate(), ArgumentError);
  spec = gaussian_spec({1, 1});
  spec.correlated_pairs.push_back({0, 0, 1.0, NoiseKind::kGaussian});
  EXPECT_THROW(spec.validate(), ArgumentError);
  spec.correlated_pairs = {{0, 5, 1.0, NoiseKind::kGaussian}};
  EXPECT_THROW(spec.validate(), ArgumentError);
  EXPECT_THROW(generate(TruthSource::constant(0), gaussian_spec({1}), 0, 1), ArgumentError);
  EXPECT_THROW(generate(TruthSource::user(Vector::Zero(3)), gaussian_spec({1}), 4, 1), ArgumentError);
  EXPECT_THROW(noise_kind_from_string("cauchy"), ArgumentError);
}

TEST(Score, PerfectRecoveryScoresPerfectly) {
  NoiseSpec spec = gaussian_spec({1, 2, 3});
  const auto sim = generate(TruthSource::ramp(0, 1), spec, 1000, 2);
  RecoveryReport report;
  report.mode = RecoveryMode::kFullBasisPursuit;
  report.regressors = 3;
  report.estimate = sim.bundle.true_moments.values();
  const Score s = score(report, sim.bundle);
  EXPECT_EQ(s.max_abs_error, 0.0);
  EXPECT_EQ(s.rmse, 0.0);
  EXPECT_EQ(s.true_support, 3);
  // Sample cross-moments are small but nonzero, so they count as recovered.
  EXPECT_LT(s.precision, 1.0);
  EXPECT_EQ(s.recall, 1.0);
}

TEST(Score, SupportAgainstExpectedMoments) {
  NoiseSpec spec = gaussian_spec({1, 2, 3});
  const auto sim = generate(TruthSource::ramp(0, 1), spec, 1000, 2);
  RecoveryReport report;
  report.mode = RecoveryMode::kFullBasisPursuit;
  report.regressors = 3;
  report.estimate = MomentVector::from_diagonal(sim.bundle.true_moments.diagonal()).values();
  const Score s = score(report, sim.bundle);
  EXPECT_EQ(s.precision, 1.0);
  EXPECT_EQ(s.recall, 1.0);
  // Dropping one diagonal entry only lowers recall.
  report.estimate(5) = 0.0;
  const Score missing = score(report, sim.bundle);
  EXPECT_EQ(missing.precision, 1.0);
  EXPECT_NEAR(missing.recall, 2.0 / 3.0, 1e-15);
}

TEST(Score, DiagonalReportsAndBiasReports) {
  NoiseSpec spec = gaussian_spec({1, 1, 1});
  spec.regressors[0].bias = 1.0;
  const auto sim = generate(TruthSource::ramp(0, 1), spec, 1000, 2);
  RecoveryReport diag;
  diag.mode = RecoveryMode::kDiagonalLeastSquares;
  diag.regressors = 3;
  diag.estimate = sim.bundle.true_moments.diagonal();
  EXPECT_GT(score(diag, sim.bundle).max_abs_error, 0.0);  // cross moments are scored as zeros

  RecoveryReport bias;
  bias.mode = RecoveryMode::kBiasL1;
  bias.regressors = 3;
  bias.estimate = sim.bundle.true_biases.values;
  const Score s = score(bias, sim.bundle);
  EXPECT_EQ(s.max_abs_error, 0.0);
  EXPECT_EQ(s.recall, 1.0);

  bias.estimate = Vector::Zero(2);
  EXPECT_THROW(score(bias, sim.bundle), ArgumentError);
}

}  // namespace
}  // namespace regerr
