#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace hsicinf {

/// Class labels in 1..num_classes.
struct ClassLabels {
  Eigen::VectorXi labels;
  int num_classes = 0;
};

/// Response of a dataset: univariate regression, multivariate regression,
/// or classification.
using Response = std::variant<Eigen::VectorXd, Eigen::MatrixXd, ClassLabels>;

/// A feature matrix with its response. feature_names may be empty, in which
/// case features are addressed as x1..xd.
struct Dataset {
  Eigen::MatrixXd x;
  Response y;
  std::vector<std::string> feature_names;
};

Eigen::Index response_sample_count(const Response& y);

/// Response as the point matrix fed to the response kernel: one row per
/// sample. Labels become a single numeric column (paired with the delta
/// kernel); numeric responses pass through.
Eigen::MatrixXd response_points(const Response& y);

/// Throws DataError on shape mismatch, non-finite values, empty data,
/// out-of-range labels, or a feature-name list of the wrong length.
void validate(const Dataset& data);

/// Declared name of feature m (0-based), or "x<m+1>" when names are absent.
std::string feature_name(const Dataset& data, Eigen::Index m);

}  // namespace hsicinf
