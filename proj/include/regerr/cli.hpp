#pragma once

#include "regerr/ppm.hpp"
#include "regerr/recovery.hpp"
#include "regerr/synth.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace regerr::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsageError = 2,
  kSolverFailure = 3,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless an output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Configuration consumed by `simulate`.
struct SimulationConfig {
  Index items = 100000;
  std::uint64_t seed = 42;
  TruthSource truth = TruthSource::ramp(0.0, 1.0);
  NoiseSpec noise;
  MomentMode mode = MomentMode::kDiagonal;
  L1SolverConfig solver;
  bool auto_noise_budget = true;
};

SimulationConfig load_simulation_config(const std::string& path);

/// Configuration consumed by `image-demo`: one noise spec per color channel,
/// all over the same regressors.
struct ImageDemoConfig {
  std::array<NoiseSpec, 3> channels;
  MomentMode mode = MomentMode::kDiagonal;
  L1SolverConfig solver;
  bool auto_noise_budget = true;
  int width = 64;
  int height = 64;
};

/// Uniform noise: regressor r has half-width `high` in channel r mod 3 and
/// `low` in the other channels.
ImageDemoConfig default_image_demo_config(int regressors = 3, double low = 0.05,
                                          double high = 0.4);
ImageDemoConfig load_image_demo_config(const std::string& path);

struct ImageDemoResult {
  Image clean;
  std::vector<Image> noisy;
  Image fused;
  Image averaged;
  std::array<RecoveryReport, 3> reports;
  std::array<Vector, 3> weights;
  std::vector<double> noisy_mse;
  double fused_mse = 0.0;
  double average_mse = 0.0;
};

/// Each channel is an independent recovery problem over all pixels:
/// regressors see clean + noise, moments are recovered from pairwise
/// differences, and the channel is fused with inverse-variance weights.
/// Channel c draws with seed splitmix64(seed + c). MSEs use unclamped values.
ImageDemoResult run_image_demo(const Image& clean, const ImageDemoConfig& cfg, std::uint64_t seed);

}  // namespace regerr::cli
