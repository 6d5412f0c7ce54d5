#include "regerr/pairwise_stats.hpp"

#include "compensated_sum.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace regerr {

namespace {

using detail::CompensatedSum;

void accumulate_pair(const Matrix& data, int r1, int r2, double& mean, double& mean_sq) {
  const auto a = data.col(r1);
  const auto b = data.col(r2);
  CompensatedSum s;
  CompensatedSum s2;
  for (Index i = 0; i < data.rows(); ++i) {
    const double d = a(i) - b(i);
    s.add(d);
    s2.add(d * d);
  }
  const auto n = static_cast<double>(data.rows());
  mean = s.value() / n;
  mean_sq = s2.value() / n;
}

}  // namespace

double PairwiseStats::mean_difference(int r1, int r2) const {
  const double v = delta(static_cast<Index>(pair_index(regressors, r1, r2, PairMode::kStrict)));
  return r1 < r2 ? v : -v;
}

double PairwiseStats::mean_square_difference(int r1, int r2) const {
  return delta_sq(static_cast<Index>(pair_index(regressors, r1, r2, PairMode::kStrict)));
}

PairwiseStats compute_pairwise_stats(const PredictionMatrix& m, unsigned threads) {
  require_valid(m);
  const PairIndexMap pairs(m.regressors(), PairMode::kStrict);
  const auto count = static_cast<Index>(pairs.size());

  PairwiseStats out;
  out.regressors = m.regressors();
  out.items = m.items();
  out.delta.resize(count);
  out.delta_sq.resize(count);

  auto work = [&](Index begin, Index end) {
    for (Index k = begin; k < end; ++k) {
      const auto [r1, r2] = pairs.pair(static_cast<std::size_t>(k));
      accumulate_pair(m.data(), r1, r2, out.delta(k), out.delta_sq(k));
    }
  };

  const Index workers = std::clamp<Index>(static_cast<Index>(threads), 1, count);
  if (workers == 1) {
    work(0, count);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w)
      pool.emplace_back(work, count * w / workers, count * (w + 1) / workers);
  }
  return out;
}

}  // namespace regerr
