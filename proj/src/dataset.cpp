#include "hsicinf/dataset.hpp"

#include "hsicinf/errors.hpp"

#include <string>

namespace hsicinf {

Eigen::Index response_sample_count(const Response& y) {
  return std::visit(
      [](const auto& value) -> Eigen::Index {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, ClassLabels>) {
          return value.labels.size();
        } else {
          return value.rows();
        }
      },
      y);
}

Eigen::MatrixXd response_points(const Response& y) {
  return std::visit(
      [](const auto& value) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, Eigen::VectorXd>) {
          return value;
        } else if constexpr (std::is_same_v<T, Eigen::MatrixXd>) {
          return value;
        } else {
          return value.labels.template cast<double>();
        }
      },
      y);
}

void validate(const Dataset& data) {
  const Eigen::Index n = data.x.rows();
  const Eigen::Index d = data.x.cols();
  if (n < 1 || d < 1) throw DataError("dataset: empty feature matrix");
  if (!data.x.allFinite()) throw DataError("dataset: non-finite feature value");
  if (response_sample_count(data.y) != n) {
    throw DataError("dataset: response has " + std::to_string(response_sample_count(data.y)) +
                    " samples but the feature matrix has " + std::to_string(n));
  }
  if (const auto* labels = std::get_if<ClassLabels>(&data.y)) {
    if (labels->num_classes < 2) {
      throw DataError("dataset: classification needs at least 2 classes");
    }
    for (Eigen::Index i = 0; i < labels->labels.size(); ++i) {
      const int c = labels->labels[i];
      if (c < 1 || c > labels->num_classes) {
        throw DataError("dataset: label " + std::to_string(c) + " at sample " +
                        std::to_string(i) + " outside 1.." +
                        std::to_string(labels->num_classes));
      }
    }
  } else if (const auto* mat = std::get_if<Eigen::MatrixXd>(&data.y)) {
    if (mat->cols() < 1) throw DataError("dataset: response matrix has no columns");
    if (!mat->allFinite()) throw DataError("dataset: non-finite response value");
  } else {
    if (!std::get<Eigen::VectorXd>(data.y).allFinite()) {
      throw DataError("dataset: non-finite response value");
    }
  }
  if (!data.feature_names.empty() &&
      static_cast<Eigen::Index>(data.feature_names.size()) != d) {
    throw DataError("dataset: " + std::to_string(data.feature_names.size()) +
                    " feature names for " + std::to_string(d) + " features");
  }
}

std::string feature_name(const Dataset& data, Eigen::Index m) {
  if (m < 0 || m >= data.x.cols()) {
    throw DataError("feature_name: index " + std::to_string(m) + " out of range");
  }
  if (!data.feature_names.empty()) return data.feature_names[static_cast<std::size_t>(m)];
  return "x" + std::to_string(m + 1);
}

}  // namespace hsicinf
