#pragma once

#include "regerr/core.hpp"
#include "regerr/recovery.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace regerr {

/// Per-stream random source. Stream s of seed k runs std::mt19937_64 seeded
/// with one SplitMix64 step from state k + (s + 1) * 0x9E3779B97F4A7C15.
/// Uniforms take the top 53 bits; normals use the cosine branch of Box-Muller,
/// consuming two uniforms each. Nothing here depends on the standard library's
/// implementation-defined distributions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// [0, 1)
  double uniform();
  /// [-half_width, half_width)
  double uniform_symmetric(double half_width);
  double gaussian(double stddev);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t state);

enum class NoiseKind { kUniform, kGaussian };

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

/// Variance of one draw: half_width^2 / 3 for uniform, stddev^2 for gaussian.
double noise_variance(NoiseKind kind, double scale);

struct RegressorNoise {
  NoiseKind kind = NoiseKind::kGaussian;
  // Uniform half-width or gaussian standard deviation.
  double scale = 0.0;
  double bias = 0.0;
};

/// A noise component added to both regressors of a pair.
struct SharedNoise {
  int first = 0;
  int second = 1;
  double scale = 0.0;
  NoiseKind kind = NoiseKind::kGaussian;
};

struct NoiseSpec {
  std::vector<RegressorNoise> regressors;
  std::vector<SharedNoise> correlated_pairs;

  int size() const { return static_cast<int>(regressors.size()); }
  /// Throws ArgumentError on negative or non-finite scales, bad pair ids.
  void validate() const;
};

/// Population second moments E[d_r1 d_r2] implied by the spec (bias products included).
MomentVector expected_moments(const NoiseSpec& spec);

class TruthSource {
 public:
  enum class Kind { kConstant, kRamp, kImageChannel, kUser };

  static TruthSource constant(double value);
  /// Linear from `first` (item 0) to `last` (item D-1).
  static TruthSource ramp(double first, double last);
  static TruthSource image_channel(Vector pixels);
  static TruthSource user(Vector values);

  Kind kind() const { return kind_; }
  /// Truth values for `items` items. Vector-backed sources must match in length.
  Vector materialize(Index items) const;

 private:
  Kind kind_ = Kind::kConstant;
  double first_ = 0.0;
  double last_ = 0.0;
  Vector values_;
};

/// Hidden truth behind a synthetic ensemble.
struct GroundTruthBundle {
  Vector truth;
  // Realized errors, defined as prediction - truth so the decomposition is exact.
  Matrix deltas;
  // 1/D sample moments of `deltas`.
  MomentVector true_moments;
  BiasVector true_biases;
  // Distribution-level moments of the spec; they define which moments are
  // nonzero by construction.
  MomentVector expected_moments;
};

struct Simulation {
  PredictionMatrix predictions;
  GroundTruthBundle bundle;
};

/// Deterministic for a fixed (truth, spec, items, seed). Regressor r draws from
/// stream r; correlated pair k draws from stream R + k.
Simulation generate(const TruthSource& truth, const NoiseSpec& spec, Index items,
                    std::uint64_t seed);

/// Sample moments of an error matrix: (1/D) sum_i d_{i,r1} d_{i,r2} and (1/D) sum_i d_{i,r}.
MomentVector sample_moments(const Matrix& deltas);
BiasVector sample_biases(const Matrix& deltas);

struct Score {
  double max_abs_error = 0.0;
  double rmse = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  double threshold = 0.0;
  int true_support = 0;
  int recovered_support = 0;
};

/// Compares a report with the bundle. Errors are measured against the sample
/// moments (or sample biases). Support compares |estimate| > threshold with
/// the nonzeros of the expected moments (or of the sample biases). The default
/// threshold is 1e-3 times the largest true diagonal moment (largest |bias|).
Score score(const RecoveryReport& report, const GroundTruthBundle& bundle,
            std::optional<double> threshold = std::nullopt);

}  // namespace regerr
