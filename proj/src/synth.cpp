#include "regerr/synth.hpp"

#include "compensated_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace regerr {

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_symmetric(double half_width) {
  return half_width * (2.0 * uniform() - 1.0);
}

double RandomStream::gaussian(double stddev) {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(NoiseKind kind) {
  return kind == NoiseKind::kUniform ? "uniform" : "gaussian";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  if (name == "uniform") return NoiseKind::kUniform;
  if (name == "gaussian") return NoiseKind::kGaussian;
  throw ArgumentError("unknown noise distribution '" + std::string(name) +
                      "' (expected uniform or gaussian)");
}

double noise_variance(NoiseKind kind, double scale) {
  return kind == NoiseKind::kUniform ? scale * scale / 3.0 : scale * scale;
}

namespace {

double draw(RandomStream& rng, NoiseKind kind, double scale) {
  return kind == NoiseKind::kUniform ? rng.uniform_symmetric(scale) : rng.gaussian(scale);
}

void check_scale(double scale, const std::string& what) {
  if (!std::isfinite(scale) || scale < 0.0)
    throw ArgumentError(what + " must be finite and non-negative");
}

}  // namespace

void NoiseSpec::validate() const {
  const int n = size();
  if (n < 1) throw ArgumentError("noise spec needs at least one regressor");
  for (int r = 0; r < n; ++r) {
    const auto& noise = regressors[static_cast<std::size_t>(r)];
    check_scale(noise.scale, "noise scale of regressor " + std::to_string(r));
    if (!std::isfinite(noise.bias))
      throw ArgumentError("bias of regressor " + std::to_string(r) + " must be finite");
  }
  for (const auto& pair : correlated_pairs) {
    if (pair.first < 0 || pair.first >= n || pair.second < 0 || pair.second >= n ||
        pair.first == pair.second) {
      std::ostringstream os;
      os << "correlated pair (" << pair.first << ", " << pair.second
         << ") must name two distinct regressors in [0, " << n << ")";
      throw ArgumentError(os.str());
    }
    check_scale(pair.scale, "shared noise scale");
  }
}

MomentVector expected_moments(const NoiseSpec& spec) {
  spec.validate();
  const int n = spec.size();
  Matrix m = Matrix::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& noise = spec.regressors[static_cast<std::size_t>(r)];
    m(r, r) += noise_variance(noise.kind, noise.scale);
  }
  for (const auto& pair : spec.correlated_pairs) {
    const double v = noise_variance(pair.kind, pair.scale);
    m(pair.first, pair.first) += v;
    m(pair.second, pair.second) += v;
    m(pair.first, pair.second) += v;
    m(pair.second, pair.first) += v;
  }
  for (int r1 = 0; r1 < n; ++r1)
    for (int r2 = 0; r2 < n; ++r2)
      m(r1, r2) += spec.regressors[static_cast<std::size_t>(r1)].bias *
                   spec.regressors[static_cast<std::size_t>(r2)].bias;
  return MomentVector::from_matrix(m);
}

TruthSource TruthSource::constant(double value) {
  TruthSource t;
  t.kind_ = Kind::kConstant;
  t.first_ = value;
  t.last_ = value;
  return t;
}

TruthSource TruthSource::ramp(double first, double last) {
  TruthSource t;
  t.kind_ = Kind::kRamp;
  t.first_ = first;
  t.last_ = last;
  return t;
}

TruthSource TruthSource::image_channel(Vector pixels) {
  TruthSource t;
  t.kind_ = Kind::kImageChannel;
  t.values_ = std::move(pixels);
  return t;
}

TruthSource TruthSource::user(Vector values) {
  TruthSource t;
  t.kind_ = Kind::kUser;
  t.values_ = std::move(values);
  return t;
}

Vector TruthSource::materialize(Index items) const {
  switch (kind_) {
    case Kind::kConstant:
      return Vector::Constant(items, first_);
    case Kind::kRamp: {
      Vector v(items);
      for (Index i = 0; i < items; ++i)
        v(i) = items == 1 ? first_
                          : first_ + (last_ - first_) * static_cast<double>(i) /
                                         static_cast<double>(items - 1);
      return v;
    }
    case Kind::kImageChannel:
    case Kind::kUser:
      if (values_.size() != items) {
        std::ostringstream os;
        os << "truth vector has " << values_.size() << " values but " << items
           << " items were requested";
        throw ArgumentError(os.str());
      }
      return values_;
  }
  return {};
}

MomentVector sample_moments(const Matrix& deltas) {
  const int n = static_cast<int>(deltas.cols());
  const auto items = static_cast<double>(deltas.rows());
  Vector values(static_cast<Index>(diagonal_pair_count(n)));
  Index k = 0;
  for (int r1 = 0; r1 < n; ++r1) {
    for (int r2 = r1; r2 < n; ++r2) {
      detail::CompensatedSum s;
      for (Index i = 0; i < deltas.rows(); ++i) s.add(deltas(i, r1) * deltas(i, r2));
      values(k++) = s.value() / items;
    }
  }
  return {n, std::move(values)};
}

BiasVector sample_biases(const Matrix& deltas) {
  Vector b(deltas.cols());
  for (Index r = 0; r < deltas.cols(); ++r) {
    detail::CompensatedSum s;
    for (Index i = 0; i < deltas.rows(); ++i) s.add(deltas(i, r));
    b(r) = s.value() / static_cast<double>(deltas.rows());
  }
  return {std::move(b)};
}

Simulation generate(const TruthSource& truth_source, const NoiseSpec& spec, Index items,
                    std::uint64_t seed) {
  if (items < 1) throw ArgumentError("need at least one item");
  spec.validate();
  const int n = spec.size();

  Vector truth = truth_source.materialize(items);
  Matrix noise(items, n);
  for (int r = 0; r < n; ++r) {
    const auto& cfg = spec.regressors[static_cast<std::size_t>(r)];
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    for (Index i = 0; i < items; ++i) noise(i, r) = cfg.bias + draw(rng, cfg.kind, cfg.scale);
  }
  for (std::size_t k = 0; k < spec.correlated_pairs.size(); ++k) {
    const auto& pair = spec.correlated_pairs[k];
    RandomStream rng(seed, static_cast<std::uint64_t>(n) + k);
    for (Index i = 0; i < items; ++i) {
      const double shared = draw(rng, pair.kind, pair.scale);
      noise(i, pair.first) += shared;
      noise(i, pair.second) += shared;
    }
  }

  Matrix predictions(items, n);
  Matrix deltas(items, n);
  for (int r = 0; r < n; ++r) {
    for (Index i = 0; i < items; ++i) {
      predictions(i, r) = truth(i) + noise(i, r);
      deltas(i, r) = predictions(i, r) - truth(i);
    }
  }

  GroundTruthBundle bundle;
  bundle.true_moments = sample_moments(deltas);
  bundle.true_biases = sample_biases(deltas);
  bundle.expected_moments = expected_moments(spec);
  bundle.truth = std::move(truth);
  bundle.deltas = std::move(deltas);
  return {PredictionMatrix(std::move(predictions)), std::move(bundle)};
}

namespace {

struct Support {
  int truth = 0;
  int recovered = 0;
  int both = 0;
};

Support compare_support(const Vector& truth, const Vector& estimate, double threshold) {
  Support s;
  for (Index k = 0; k < truth.size(); ++k) {
    const bool t = std::abs(truth(k)) > threshold;
    const bool e = std::abs(estimate(k)) > threshold;
    s.truth += t;
    s.recovered += e;
    s.both += t && e;
  }
  return s;
}

}  // namespace

Score score(const RecoveryReport& report, const GroundTruthBundle& bundle,
            std::optional<double> threshold) {
  Vector estimate;
  Vector truth;
  Vector support_truth;
  double default_threshold = 0.0;
  if (report.mode == RecoveryMode::kBiasL1) {
    estimate = report.bias().values;
    truth = bundle.true_biases.values;
    support_truth = truth;
    default_threshold = 1e-3 * (truth.size() ? truth.cwiseAbs().maxCoeff() : 0.0);
  } else {
    estimate = report.moments().values();
    truth = bundle.true_moments.values();
    support_truth = bundle.expected_moments.values();
    default_threshold = 1e-3 * bundle.true_moments.diagonal().maxCoeff();
  }
  if (estimate.size() != truth.size() || support_truth.size() != truth.size()) {
    std::ostringstream os;
    os << "report has " << estimate.size() << " components, ground truth has " << truth.size();
    throw ArgumentError(os.str());
  }

  Score out;
  out.threshold = threshold.value_or(std::max(default_threshold, 0.0));
  const Vector err = estimate - truth;
  out.max_abs_error = err.size() ? err.cwiseAbs().maxCoeff() : 0.0;
  out.rmse = err.size() ? std::sqrt(err.squaredNorm() / static_cast<double>(err.size())) : 0.0;
  const Support s = compare_support(support_truth, estimate, out.threshold);
  out.true_support = s.truth;
  out.recovered_support = s.recovered;
  out.precision = s.recovered ? static_cast<double>(s.both) / s.recovered : 1.0;
  out.recall = s.truth ? static_cast<double>(s.both) / s.truth : 1.0;
  return out;
}

}  // namespace regerr
