#include "hsicinf/kernel.hpp"

#include "hsicinf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsicinf {

namespace {

// Delta kernels accept labels (one column) or one-hot rows (num_classes
// columns); either way every row is reduced to an integer class id.
Eigen::VectorXi delta_labels(const Eigen::Ref<const Eigen::MatrixXd>& points,
                             const DeltaKernel& spec) {
  const Eigen::Index n = points.rows();
  Eigen::VectorXi labels(n);
  if (points.cols() == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = points(i, 0);
      if (!std::isfinite(v) || v != std::floor(v) || v < 1.0 || v > spec.num_classes) {
        throw DataError("delta kernel label out of {1,..," +
                                    std::to_string(spec.num_classes) + "} at row " +
                                    std::to_string(i) + ": " + std::to_string(v));
      }
      labels[i] = static_cast<int>(v);
    }
    return labels;
  }
  if (points.cols() == spec.num_classes) {
    for (Eigen::Index i = 0; i < n; ++i) {
      int hot = -1;
      for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double v = points(i, j);
        if (v == 1.0 && hot < 0) {
          hot = static_cast<int>(j);
        } else if (v != 0.0) {
          hot = -2;
          break;
        }
      }
      if (hot < 0) {
        throw DataError("delta kernel row " + std::to_string(i) +
                                    " is not a one-hot vector");
      }
      labels[i] = hot + 1;
    }
    return labels;
  }
  throw DataError("delta kernel expects 1 label column or num_classes one-hot columns, got " +
                              std::to_string(points.cols()));
}

}  // namespace

void validate(const KernelSpec& spec) {
  if (const auto* g = std::get_if<GaussianKernel>(&spec)) {
    if (!std::isfinite(g->bandwidth) || g->bandwidth <= 0.0) {
      throw DataError("Gaussian bandwidth must be finite and positive, got " +
                                  std::to_string(g->bandwidth));
    }
  } else if (const auto* d = std::get_if<DeltaKernel>(&spec)) {
    if (d->num_classes < 2) {
      throw DataError("delta kernel needs at least 2 classes, got " +
                                  std::to_string(d->num_classes));
    }
  }
}

Eigen::MatrixXd gram_matrix(const Eigen::Ref<const Eigen::MatrixXd>& points,
                            const KernelSpec& spec) {
  validate(spec);
  const Eigen::Index n = points.rows();
  if (n < 1) throw DataError("gram_matrix needs at least one point");

  Eigen::MatrixXd gram(n, n);
  if (const auto* g = std::get_if<GaussianKernel>(&spec)) {
    const double inv_two_tau_sq = 1.0 / (2.0 * g->bandwidth * g->bandwidth);
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(j, j) = 1.0;
      for (Eigen::Index i = 0; i < j; ++i) {
        const double d2 = (points.row(i) - points.row(j)).squaredNorm();
        const double v = std::exp(-d2 * inv_two_tau_sq);
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
  } else if (std::holds_alternative<LinearKernel>(spec)) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(j, j) = points.row(j).squaredNorm();
      for (Eigen::Index i = 0; i < j; ++i) {
        const double v = points.row(i).dot(points.row(j));
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
  } else {
    const auto labels = delta_labels(points, std::get<DeltaKernel>(spec));
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(j, j) = 1.0;
      for (Eigen::Index i = 0; i < j; ++i) {
        const double v = labels[i] == labels[j] ? 1.0 : 0.0;
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
  }
  return gram;
}

double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw DataError("median_heuristic needs at least two points");

  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      dists.push_back((points.row(i) - points.row(j)).norm());

  const std::size_t m = dists.size();
  const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double median = *mid;
  if (m % 2 == 0) {
    // mean of the two central order statistics
    const double upper = *mid;
    const double lower = *std::max_element(dists.begin(), mid);
    median = 0.5 * (lower + upper);
  }
  if (median <= 0.0) {
    throw NumericError("median pairwise distance is zero; bandwidth would be zero");
  }
  return median;
}

Eigen::MatrixXd one_hot_encode(const Eigen::Ref<const Eigen::VectorXi>& labels,
                               int num_classes) {
  if (num_classes < 2) {
    throw DataError("one_hot_encode needs at least 2 classes, got " +
                                std::to_string(num_classes));
  }
  Eigen::MatrixXd encoded = Eigen::MatrixXd::Zero(labels.size(), num_classes);
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label < 1 || label > num_classes) {
      throw DataError("label " + std::to_string(label) + " outside {1,..," +
                                  std::to_string(num_classes) + "} at row " + std::to_string(i));
    }
    encoded(i, label - 1) = 1.0;
  }
  return encoded;
}

}  // namespace hsicinf
