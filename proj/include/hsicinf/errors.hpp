#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace hsicinf {

/// Malformed or inconsistent input data (CSV parse failures, ragged rows,
/// labels out of range, dimension mismatches in user-supplied tables).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: singular or degenerate covariance, underflowing
/// interval probabilities, infeasible selection constraints.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance estimation found features whose within-block statistics carry
/// no variance at all, so no shrinkage weight can make the matrix positive
/// definite. Carries the offending feature indices (0-based).
class DegenerateFeatureError : public NumericError {
 public:
  DegenerateFeatureError(std::string message, std::vector<Eigen::Index> features)
      : NumericError(std::move(message)), features_(std::move(features)) {}

  const std::vector<Eigen::Index>& features() const { return features_; }

 private:
  std::vector<Eigen::Index> features_;
};

}  // namespace hsicinf
