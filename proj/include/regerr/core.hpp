#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regerr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised for malformed arguments: out-of-range ids, size mismatches, too few regressors.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t row = 0, std::size_t column = 0);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Which unordered pairs (r1, r2) an enumeration covers.
enum class PairMode {
  kDiagonalInclusive,  // r1 <= r2, length R(R+1)/2
  kStrict,             // r1 <  r2, length R(R-1)/2
};

constexpr std::size_t diagonal_pair_count(int regressors) {
  return static_cast<std::size_t>(regressors) * static_cast<std::size_t>(regressors + 1) / 2;
}

constexpr std::size_t strict_pair_count(int regressors) {
  return regressors < 1 ? 0
                        : static_cast<std::size_t>(regressors) *
                              static_cast<std::size_t>(regressors - 1) / 2;
}

/// Canonical row-major lexicographic index of the unordered pair {r1, r2}.
/// Symmetric in its arguments. Throws ArgumentError for ids outside [0, R) or
/// for r1 == r2 in strict mode.
std::size_t pair_index(int regressors, int r1, int r2, PairMode mode);

/// Enumeration of regressor pairs in canonical order, with the inverse lookup.
class PairIndexMap {
 public:
  PairIndexMap(int regressors, PairMode mode);

  int regressors() const { return regressors_; }
  PairMode mode() const { return mode_; }
  std::size_t size() const { return pairs_.size(); }

  std::size_t index(int r1, int r2) const { return pair_index(regressors_, r1, r2, mode_); }
  std::pair<int, int> pair(std::size_t index) const;
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

 private:
  int regressors_;
  PairMode mode_;
  std::vector<std::pair<int, int>> pairs_;
};

/// D x R aligned regressor outputs: row i is item i, column r is regressor r.
/// Column names are metadata only; regressors are identified by column order.
class PredictionMatrix {
 public:
  PredictionMatrix() = default;
  explicit PredictionMatrix(Matrix data, std::vector<std::string> names = {});

  const Matrix& data() const { return data_; }
  Index items() const { return data_.rows(); }
  int regressors() const { return static_cast<int>(data_.cols()); }
  const std::vector<std::string>& names() const { return names_; }
  std::string name(int r) const;

 private:
  Matrix data_;
  std::vector<std::string> names_;
};

struct Violation {
  std::string message;
  // Set for non-finite entries.
  std::optional<std::pair<Index, Index>> where;
};

/// Every invariant violation of `m`. An empty result means the matrix is valid.
std::vector<Violation> validate(const PredictionMatrix& m);

class ValidationError : public ArgumentError {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError listing every violation, if any.
void require_valid(const PredictionMatrix& m);

/// The R(R+1)/2 second error moments <d_r1 d_r2>, indexed by the
/// diagonal-inclusive pair map.
class MomentVector {
 public:
  MomentVector() = default;
  MomentVector(int regressors, Vector values);

  static MomentVector zeros(int regressors);
  static MomentVector from_diagonal(const Vector& diagonal);
  static MomentVector from_matrix(const Matrix& symmetric);

  int regressors() const { return regressors_; }
  const Vector& values() const { return values_; }

  double at(int r1, int r2) const;
  Vector diagonal() const;
  Matrix to_matrix() const;

  friend bool operator==(const MomentVector& a, const MomentVector& b);

 private:
  int regressors_ = 0;
  Vector values_;
};

/// The R first error moments <d_r>. Only defined modulo a constant shift;
/// each producer documents which representative it stores.
struct BiasVector {
  Vector values;

  int regressors() const { return static_cast<int>(values.size()); }
  friend bool operator==(const BiasVector& a, const BiasVector& b);
};

struct CovarianceMatrix {
  Matrix values;
};

/// cov(r1, r2) = <d_r1 d_r2> - <d_r1><d_r2>.
CovarianceMatrix assemble_covariance(const MomentVector& moments, const BiasVector& bias);

}  // namespace regerr
