#include "regerr/fusion.hpp"

#include "compensated_sum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace regerr {

FusionWeights inverse_variance_weights(const MomentVector& moments) {
  const Vector diag = moments.diagonal();
  const Index n = diag.size();
  if (n < 1) throw ArgumentError("fusion needs at least one regressor");
  const double top = diag.maxCoeff();
  const double floor = 1e-12 * top;

  FusionWeights out;
  if (!(top > 0.0)) {
    out.weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
    return out;
  }
  Vector w(n);
  for (Index r = 0; r < n; ++r) w(r) = 1.0 / std::max(diag(r), floor);
  out.weights = w / w.sum();
  return out;
}

FusionWeights moment_matrix_weights(const MomentVector& moments) {
  const Matrix m = moments.to_matrix();
  const Index n = m.rows();
  if (n < 1) throw ArgumentError("fusion needs at least one regressor");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const double top = eig.eigenvalues().maxCoeff();
  FusionWeights out;
  if (!(top > 0.0)) {
    out.weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
    return out;
  }
  const Vector clipped = eig.eigenvalues().cwiseMax(1e-12 * top);
  const Matrix& v = eig.eigenvectors();
  const Vector w = v * (v.transpose() * Vector::Ones(n)).cwiseQuotient(clipped);
  out.weights = w / w.sum();
  return out;
}

Vector fuse(const PredictionMatrix& m, const FusionWeights& w) {
  if (w.weights.size() != m.regressors()) {
    std::ostringstream os;
    os << "fusion weights have " << w.weights.size() << " entries for " << m.regressors()
       << " regressors";
    throw ArgumentError(os.str());
  }
  return m.data() * w.weights;
}

Vector average(const PredictionMatrix& m) {
  return fuse(m, {Vector::Constant(m.regressors(), 1.0 / m.regressors())});
}

double mean_squared_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ArgumentError("MSE needs vectors of equal length");
  if (a.size() == 0) return 0.0;
  detail::CompensatedSum s;
  for (Index i = 0; i < a.size(); ++i) {
    const double d = a(i) - b(i);
    s.add(d * d);
  }
  return s.value() / static_cast<double>(a.size());
}

FusionEvaluation evaluate_fusion(const Vector& fused, const GroundTruthBundle& bundle) {
  if (fused.size() != bundle.truth.size()) {
    std::ostringstream os;
    os << "fused vector has " << fused.size() << " items, truth has " << bundle.truth.size();
    throw ArgumentError(os.str());
  }
  const Vector avg_error = bundle.deltas.rowwise().mean();
  FusionEvaluation out;
  out.mse = mean_squared_error(fused, bundle.truth);
  out.average_mse = mean_squared_error(avg_error, Vector::Zero(avg_error.size()));
  return out;
}

}  // namespace regerr
