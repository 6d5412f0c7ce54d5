#pragma once

#include "regerr/core.hpp"

namespace regerr {

/// Observable pairwise difference statistics over the strict pairs r1 < r2:
///   delta(k)    = (1/D) sum_i (y_{i,r1} - y_{i,r2})
///   delta_sq(k) = (1/D) sum_i (y_{i,r1} - y_{i,r2})^2
/// with k the strict pair index of (r1, r2).
struct PairwiseStats {
  int regressors = 0;
  Index items = 0;
  Vector delta;
  Vector delta_sq;

  double mean_difference(int r1, int r2) const;
  double mean_square_difference(int r1, int r2) const;
};

/// Computes both statistics for every strict pair. Sums are compensated and run
/// over items in a fixed order, so the result is bit-identical for any `threads`.
/// Throws ValidationError when `m` is invalid.
PairwiseStats compute_pairwise_stats(const PredictionMatrix& m, unsigned threads = 1);

}  // namespace regerr
