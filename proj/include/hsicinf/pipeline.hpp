#pragma once

#include "hsicinf/dataset.hpp"
#include "hsicinf/kernel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsicinf {

enum class Method { HsicInf, HsicNaive, Split };

/// Accepts "hsicInf", "hsicNaive" (alias "hsic"), "split"; case-insensitive.
Method parse_method(std::string_view name);
std::string method_name(Method method);

struct PipelineConfig {
  Eigen::Index k = 10;
  Eigen::Index block_size = 10;
  double alpha = 0.05;
  /// Weight pulling the estimated score covariance toward its diagonal.
  /// Truncation bounds divide by differences of off-diagonal entries, so
  /// sampling noise there creates spuriously tight intervals; a strong
  /// default keeps the selection-event geometry stable while leaving the
  /// per-feature variances (the diagonal) untouched.
  double shrinkage = 0.9;
  /// Kernel on (standardized) features.
  KernelSpec feature_kernel = GaussianKernel{1.0};
  /// Kernel on the response. Empty means: Gaussian with bandwidth 1 for a
  /// univariate response, Gaussian with the median pairwise-distance
  /// bandwidth for a multivariate response, delta kernel for class labels.
  std::optional<KernelSpec> response_kernel;
  Method method = Method::HsicInf;
  std::uint64_t seed = 0;
};

/// One tested feature. feature_index is 1-based (the dataset's original
/// column position); hsic is the block-averaged score the p-value refers to,
/// variance its estimated sampling variance, [v_lower, v_upper] the interval
/// the score was conditioned into (infinite for unconditioned methods).
struct FeatureInference {
  Eigen::Index feature_index = 0;
  std::string feature_name;
  double hsic = 0.0;
  double variance = 0.0;
  double v_lower = 0.0;
  double v_upper = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

struct InferenceReport {
  Method method = Method::HsicInf;
  std::uint64_t seed = 0;
  Eigen::Index k = 0;
  Eigen::Index block_size = 0;
  double alpha = 0.0;
  double shrinkage = 0.0;
  /// Samples and blocks actually used per split, in protocol order
  /// (covariance split first, test split last).
  std::vector<Eigen::Index> split_samples;
  std::vector<Eigen::Index> split_blocks;
  /// Exactly k rows, in decreasing selection-score order.
  std::vector<FeatureInference> features;
  std::vector<std::string> warnings;
};

struct StandardizeResult {
  Eigen::MatrixXd x;
  /// Columns left untouched because their sample variance is zero.
  std::vector<Eigen::Index> constant_columns;
};

/// Center each column and scale it to sample standard deviation 1
/// (denominator n-1). Constant columns are flagged and passed through.
StandardizeResult standardize_features(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Seeded permutation of 0..n-1 used to form the protocol splits.
std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed);

/// Response kernel actually used for a dataset under a config: the
/// explicitly configured kernel, or the per-response-type default.
KernelSpec resolve_response_kernel(const Response& y, const PipelineConfig& cfg);

/// Selective (or, for HsicNaive, unadjusted) inference: one third of the
/// samples estimates the score covariance, the remaining two thirds compute
/// the scores, select the top k, and test them.
InferenceReport run_hsic_inf(const Dataset& data, const PipelineConfig& cfg);

/// Data-splitting baseline: thirds for covariance, selection, and testing;
/// the test third is independent of selection, so p-values are untruncated.
InferenceReport run_split(const Dataset& data, const PipelineConfig& cfg);

/// Dispatch on cfg.method.
InferenceReport run_inference(const Dataset& data, const PipelineConfig& cfg);

struct RateSummary {
  double tpr = 0.0;
  double fpr = 0.0;
};

/// True/false positive rates of a report against the truly relevant
/// features (1-based indices): tpr = rejected relevant / |relevant| (0 when
/// no feature is relevant), fpr = rejected irrelevant / k.
RateSummary evaluate_report(const InferenceReport& report,
                            const std::vector<Eigen::Index>& true_relevant);

}  // namespace hsicinf
