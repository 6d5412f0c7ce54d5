#include "regerr/core.hpp"

#include <cmath>
#include <sstream>

namespace regerr {

namespace {

void check_regressor(int regressors, int r) {
  if (r < 0 || r >= regressors) {
    std::ostringstream os;
    os << "regressor id " << r << " out of range [0, " << regressors << ")";
    throw ArgumentError(os.str());
  }
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid prediction matrix:";
  for (const auto& v : violations) os << "\n  " << v.message;
  return os.str();
}

std::string where(const std::string& message, std::size_t row, std::size_t column) {
  if (row == 0) return message;
  std::ostringstream os;
  os << message << " (row " << row;
  if (column) os << ", column " << column;
  os << ")";
  return os.str();
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t row, std::size_t column)
    : std::runtime_error(where(message, row, column)), row_(row), column_(column) {}

std::size_t pair_index(int regressors, int r1, int r2, PairMode mode) {
  check_regressor(regressors, r1);
  check_regressor(regressors, r2);
  if (r1 > r2) std::swap(r1, r2);
  const auto n = static_cast<std::size_t>(regressors);
  const auto a = static_cast<std::size_t>(r1);
  const auto b = static_cast<std::size_t>(r2);
  if (mode == PairMode::kDiagonalInclusive) {
    // Rows 0..a-1 hold n, n-1, ..., n-a+1 entries.
    return a * n - a * (a - 1) / 2 + (b - a);
  }
  if (r1 == r2) throw ArgumentError("strict pair index requires distinct regressors");
  return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

PairIndexMap::PairIndexMap(int regressors, PairMode mode) : regressors_(regressors), mode_(mode) {
  if (regressors < 1) throw ArgumentError("pair map needs at least one regressor");
  const int offset = mode == PairMode::kStrict ? 1 : 0;
  for (int r1 = 0; r1 < regressors; ++r1)
    for (int r2 = r1 + offset; r2 < regressors; ++r2) pairs_.emplace_back(r1, r2);
}

std::pair<int, int> PairIndexMap::pair(std::size_t index) const {
  if (index >= pairs_.size()) {
    std::ostringstream os;
    os << "pair index " << index << " out of range [0, " << pairs_.size() << ")";
    throw ArgumentError(os.str());
  }
  return pairs_[index];
}

PredictionMatrix::PredictionMatrix(Matrix data, std::vector<std::string> names)
    : data_(std::move(data)), names_(std::move(names)) {
  if (!names_.empty() && static_cast<Index>(names_.size()) != data_.cols())
    throw ArgumentError("number of regressor names does not match column count");
}

std::string PredictionMatrix::name(int r) const {
  check_regressor(regressors(), r);
  if (!names_.empty()) return names_[static_cast<std::size_t>(r)];
  return "r" + std::to_string(r);
}

std::vector<Violation> validate(const PredictionMatrix& m) {
  std::vector<Violation> out;
  if (m.regressors() < 2) out.push_back({"R < 2: need at least two regressors", std::nullopt});
  if (m.items() < 1) out.push_back({"D < 1: need at least one item", std::nullopt});
  const Matrix& data = m.data();
  for (Index c = 0; c < data.cols(); ++c) {
    for (Index r = 0; r < data.rows(); ++r) {
      if (!std::isfinite(data(r, c))) {
        std::ostringstream os;
        os << "non-finite value at (" << r << ", " << c << ")";
        out.push_back({os.str(), std::make_pair(r, c)});
      }
    }
  }
  return out;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : ArgumentError(describe(violations)), violations_(std::move(violations)) {}

void require_valid(const PredictionMatrix& m) {
  auto violations = validate(m);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

MomentVector::MomentVector(int regressors, Vector values)
    : regressors_(regressors), values_(std::move(values)) {
  if (regressors < 1) throw ArgumentError("moment vector needs at least one regressor");
  if (static_cast<std::size_t>(values_.size()) != diagonal_pair_count(regressors)) {
    std::ostringstream os;
    os << "moment vector for R=" << regressors << " needs " << diagonal_pair_count(regressors)
       << " values, got " << values_.size();
    throw ArgumentError(os.str());
  }
}

MomentVector MomentVector::zeros(int regressors) {
  return {regressors, Vector::Zero(static_cast<Index>(diagonal_pair_count(regressors)))};
}

MomentVector MomentVector::from_diagonal(const Vector& diagonal) {
  const int n = static_cast<int>(diagonal.size());
  Vector values = Vector::Zero(static_cast<Index>(diagonal_pair_count(n)));
  for (int r = 0; r < n; ++r)
    values(static_cast<Index>(pair_index(n, r, r, PairMode::kDiagonalInclusive))) = diagonal(r);
  return {n, std::move(values)};
}

MomentVector MomentVector::from_matrix(const Matrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw ArgumentError("moment matrix must be square");
  const int n = static_cast<int>(symmetric.rows());
  Vector values(static_cast<Index>(diagonal_pair_count(n)));
  Index k = 0;
  for (int r1 = 0; r1 < n; ++r1)
    for (int r2 = r1; r2 < n; ++r2) values(k++) = symmetric(r1, r2);
  return {n, std::move(values)};
}

double MomentVector::at(int r1, int r2) const {
  return values_(static_cast<Index>(pair_index(regressors_, r1, r2, PairMode::kDiagonalInclusive)));
}

Vector MomentVector::diagonal() const {
  Vector d(regressors_);
  for (int r = 0; r < regressors_; ++r) d(r) = at(r, r);
  return d;
}

Matrix MomentVector::to_matrix() const {
  Matrix m(regressors_, regressors_);
  Index k = 0;
  for (int r1 = 0; r1 < regressors_; ++r1) {
    for (int r2 = r1; r2 < regressors_; ++r2) {
      m(r1, r2) = values_(k);
      m(r2, r1) = values_(k);
      ++k;
    }
  }
  return m;
}

bool operator==(const MomentVector& a, const MomentVector& b) {
  return a.regressors_ == b.regressors_ && a.values_.size() == b.values_.size() &&
         a.values_ == b.values_;
}

bool operator==(const BiasVector& a, const BiasVector& b) {
  return a.values.size() == b.values.size() && a.values == b.values;
}

CovarianceMatrix assemble_covariance(const MomentVector& moments, const BiasVector& bias) {
  const int n = moments.regressors();
  if (bias.regressors() != n) {
    std::ostringstream os;
    os << "covariance needs matching sizes: moments for R=" << n << ", bias of length "
       << bias.regressors();
    throw ArgumentError(os.str());
  }
  Matrix cov(n, n);
  for (int r1 = 0; r1 < n; ++r1) {
    for (int r2 = r1; r2 < n; ++r2) {
      const double v = moments.at(r1, r2) - bias.values(r1) * bias.values(r2);
      cov(r1, r2) = v;
      cov(r2, r1) = v;
    }
  }
  return {std::move(cov)};
}

}  // namespace regerr
