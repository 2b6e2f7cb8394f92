#pragma once

#include <Eigen/Core>

#include <variant>

namespace hsicinf {

/// Gaussian (RBF) kernel exp(-||a-b||^2 / (2 tau^2)).
struct GaussianKernel {
  double bandwidth = 1.0;
};

/// Plain inner-product kernel.
struct LinearKernel {};

/// Kernel on class labels: 1 when labels match, 0 otherwise. Accepts either
/// a single column of integer labels in {1,..,num_classes} or rows that are
/// already one-hot encoded with num_classes columns.
struct DeltaKernel {
  int num_classes = 2;
};

using KernelSpec = std::variant<GaussianKernel, LinearKernel, DeltaKernel>;

/// Throws DataError when the spec parameters are out of range
/// (non-positive or non-finite bandwidth, num_classes < 2).
void validate(const KernelSpec& spec);

/// Gram matrix of the given points (one point per row) under `spec`.
/// The upper triangle is computed and mirrored, so the result is exactly
/// symmetric. Gaussian diagonals are exactly 1.
Eigen::MatrixXd gram_matrix(const Eigen::Ref<const Eigen::MatrixXd>& points,
                            const KernelSpec& spec);

/// Median of the pairwise Euclidean distances ||p_i - p_j|| over i < j.
/// Even pair counts average the two central order statistics. Throws
/// NumericError when the median is zero (the bandwidth would be zero).
double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Labels in {1,..,num_classes} to one-hot rows. The linear kernel on the
/// encoded rows reproduces the delta kernel on the labels.
Eigen::MatrixXd one_hot_encode(const Eigen::Ref<const Eigen::VectorXi>& labels,
                               int num_classes);

}  // namespace hsicinf
