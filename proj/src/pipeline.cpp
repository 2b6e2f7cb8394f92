#include "hsicinf/pipeline.hpp"

#include "hsicinf/block_hsic.hpp"
#include "hsicinf/errors.hpp"
#include "hsicinf/seed.hpp"
#include "hsicinf/selection.hpp"
#include "hsicinf/truncated_normal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace hsicinf {

namespace {

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void validate_config(const PipelineConfig& cfg, Eigen::Index n, Eigen::Index d) {
  if (cfg.k < 1 || cfg.k >= d) {
    throw DataError("pipeline: k must satisfy 1 <= k < d, got k=" + std::to_string(cfg.k) +
                    " with d=" + std::to_string(d));
  }
  if (cfg.block_size < 4) {
    throw DataError("pipeline: block size must be at least 4, got " +
                    std::to_string(cfg.block_size));
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw DataError("pipeline: alpha must lie in (0,1), got " + std::to_string(cfg.alpha));
  }
  if (!(cfg.shrinkage >= 0.0 && cfg.shrinkage < 1.0)) {
    throw DataError("pipeline: shrinkage must lie in [0,1), got " +
                    std::to_string(cfg.shrinkage));
  }
  if (n < 3 * cfg.block_size) {
    throw DataError("pipeline: need n >= 3*block_size samples, got n=" + std::to_string(n) +
                    " with block_size=" + std::to_string(cfg.block_size));
  }
  validate(cfg.feature_kernel);
}

Eigen::MatrixXd take_rows(const Eigen::Ref<const Eigen::MatrixXd>& m,
                          std::span<const Eigen::Index> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  }
  return out;
}

void require_covariance_blocks(Eigen::Index split_samples, Eigen::Index block_size) {
  if (split_samples / block_size < 2) {
    throw DataError(
        "pipeline: the covariance split holds " + std::to_string(split_samples) +
        " samples, fewer than the 2 blocks of size " + std::to_string(block_size) +
        " needed to estimate a covariance; provide at least 6*block_size samples");
  }
}

FeatureInference make_row(const Dataset& data, Eigen::Index m, double score, double variance,
                          const TruncationInterval& interval, double alpha) {
  FeatureInference row;
  row.feature_index = m + 1;
  row.feature_name = feature_name(data, m);
  row.hsic = score;
  row.variance = variance;
  row.v_lower = interval.lower;
  row.v_upper = interval.upper;
  row.p_value = selective_p_value(score, variance, interval);
  row.reject = row.p_value < alpha;
  return row;
}

InferenceReport report_skeleton(const PipelineConfig& cfg) {
  InferenceReport report;
  report.method = cfg.method;
  report.seed = cfg.seed;
  report.k = cfg.k;
  report.block_size = cfg.block_size;
  report.alpha = cfg.alpha;
  report.shrinkage = cfg.shrinkage;
  return report;
}

void warn_constant_columns(const Dataset& data, const StandardizeResult& standardized,
                           InferenceReport& report) {
  for (Eigen::Index col : standardized.constant_columns) {
    report.warnings.push_back("feature " + feature_name(data, col) +
                              " is constant; left unstandardized");
  }
}

}  // namespace

Method parse_method(std::string_view name) {
  const std::string lowered = to_lower(name);
  if (lowered == "hsicinf") return Method::HsicInf;
  if (lowered == "hsic" || lowered == "hsicnaive") return Method::HsicNaive;
  if (lowered == "split") return Method::Split;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected hsicInf, hsicNaive/hsic, or split)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::HsicInf: return "hsicInf";
    case Method::HsicNaive: return "hsicNaive";
    case Method::Split: return "split";
  }
  throw std::invalid_argument("unknown method enum value");
}

StandardizeResult standardize_features(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 1 || d < 1) throw DataError("standardize_features: empty matrix");

  StandardizeResult result;
  result.x = x;
  for (Eigen::Index col = 0; col < d; ++col) {
    const double mean = x.col(col).mean();
    const double ss = (x.col(col).array() - mean).square().sum();
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd > 0.0) {
      result.x.col(col) = (x.col(col).array() - mean) / sd;
    } else {
      result.constant_columns.push_back(col);
    }
  }
  return result;
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw DataError("shuffled_indices: n must be positive");
  std::vector<Eigen::Index> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), Eigen::Index{0});
  std::mt19937_64 rng(splitmix64(seed));
  std::shuffle(indices.begin(), indices.end(), rng);
  return indices;
}

KernelSpec resolve_response_kernel(const Response& y, const PipelineConfig& cfg) {
  if (cfg.response_kernel) return *cfg.response_kernel;
  if (std::holds_alternative<ClassLabels>(y)) {
    return DeltaKernel{std::get<ClassLabels>(y).num_classes};
  }
  if (std::holds_alternative<Eigen::MatrixXd>(y)) {
    return GaussianKernel{median_heuristic(std::get<Eigen::MatrixXd>(y))};
  }
  return GaussianKernel{1.0};
}

InferenceReport run_hsic_inf(const Dataset& data, const PipelineConfig& cfg) {
  validate(data);
  const Eigen::Index n = data.x.rows();
  validate_config(cfg, n, data.x.cols());
  if (cfg.method == Method::Split) {
    throw DataError("run_hsic_inf: method 'split' must go through run_split");
  }

  const KernelSpec response_kernel = resolve_response_kernel(data.y, cfg);
  validate(response_kernel);

  InferenceReport report = report_skeleton(cfg);
  const StandardizeResult standardized = standardize_features(data.x);
  warn_constant_columns(data, standardized, report);

  const Eigen::MatrixXd y_points = response_points(data.y);
  const std::vector<Eigen::Index> perm = shuffled_indices(n, cfg.seed);
  const Eigen::Index n_cov = n / 3;
  require_covariance_blocks(n_cov, cfg.block_size);
  const std::span<const Eigen::Index> cov_rows(perm.data(), static_cast<std::size_t>(n_cov));
  const std::span<const Eigen::Index> test_rows(perm.data() + n_cov,
                                                static_cast<std::size_t>(n - n_cov));

  const BlockPartition cov_part =
      sequential_partition(static_cast<Eigen::Index>(cov_rows.size()), cfg.block_size);
  const HsicScores cov_scores =
      hsic_vector(take_rows(standardized.x, cov_rows), take_rows(y_points, cov_rows),
                  cfg.feature_kernel, response_kernel, cov_part);
  const ScoreDistribution held_out = estimate_covariance(cov_scores.stats, cfg.shrinkage);

  const BlockPartition test_part =
      sequential_partition(static_cast<Eigen::Index>(test_rows.size()), cfg.block_size);
  const HsicScores scores =
      hsic_vector(take_rows(standardized.x, test_rows), take_rows(y_points, test_rows),
                  cfg.feature_kernel, response_kernel, test_part);
  const ScoreDistribution dist = rescale_to_blocks(held_out, test_part.block_count());

  const ScreeningResult screening = select_top_k(scores.z, cfg.k);
  for (Eigen::Index m : screening.selected) {
    const TruncationInterval interval = cfg.method == Method::HsicInf
                                            ? truncation_interval(m, screening, dist)
                                            : TruncationInterval{};
    report.features.push_back(
        make_row(data, m, scores.z[m], dist.sigma(m, m), interval, cfg.alpha));
  }
  report.split_samples = {cov_part.block_count() * cfg.block_size,
                          test_part.block_count() * cfg.block_size};
  report.split_blocks = {cov_part.block_count(), test_part.block_count()};
  return report;
}

InferenceReport run_split(const Dataset& data, const PipelineConfig& cfg) {
  validate(data);
  const Eigen::Index n = data.x.rows();
  validate_config(cfg, n, data.x.cols());

  const KernelSpec response_kernel = resolve_response_kernel(data.y, cfg);
  validate(response_kernel);

  InferenceReport report = report_skeleton(cfg);
  report.method = Method::Split;
  const StandardizeResult standardized = standardize_features(data.x);
  warn_constant_columns(data, standardized, report);

  const Eigen::MatrixXd y_points = response_points(data.y);
  const std::vector<Eigen::Index> perm = shuffled_indices(n, cfg.seed);
  const Eigen::Index third = n / 3;
  require_covariance_blocks(third, cfg.block_size);
  const std::span<const Eigen::Index> cov_rows(perm.data(), static_cast<std::size_t>(third));
  const std::span<const Eigen::Index> select_rows(perm.data() + third,
                                                  static_cast<std::size_t>(third));
  const std::span<const Eigen::Index> test_rows(perm.data() + 2 * third,
                                                static_cast<std::size_t>(third));

  const BlockPartition part = sequential_partition(third, cfg.block_size);
  const HsicScores cov_scores =
      hsic_vector(take_rows(standardized.x, cov_rows), take_rows(y_points, cov_rows),
                  cfg.feature_kernel, response_kernel, part);
  const ScoreDistribution held_out = estimate_covariance(cov_scores.stats, cfg.shrinkage);
  const ScoreDistribution dist = rescale_to_blocks(held_out, part.block_count());

  const HsicScores select_scores =
      hsic_vector(take_rows(standardized.x, select_rows), take_rows(y_points, select_rows),
                  cfg.feature_kernel, response_kernel, part);
  const ScreeningResult screening = select_top_k(select_scores.z, cfg.k);

  const HsicScores test_scores =
      hsic_vector(take_rows(standardized.x, test_rows), take_rows(y_points, test_rows),
                  cfg.feature_kernel, response_kernel, part);

  // The test split never entered selection, so the score needs no
  // truncation: the p-value is the plain one-sided normal tail.
  for (Eigen::Index m : screening.selected) {
    report.features.push_back(make_row(data, m, test_scores.z[m], dist.sigma(m, m),
                                       TruncationInterval{}, cfg.alpha));
  }
  const Eigen::Index used = part.block_count() * cfg.block_size;
  report.split_samples = {used, used, used};
  report.split_blocks = {part.block_count(), part.block_count(), part.block_count()};
  return report;
}

InferenceReport run_inference(const Dataset& data, const PipelineConfig& cfg) {
  if (cfg.method == Method::Split) return run_split(data, cfg);
  return run_hsic_inf(data, cfg);
}

RateSummary evaluate_report(const InferenceReport& report,
                            const std::vector<Eigen::Index>& true_relevant) {
  RateSummary rates;
  if (report.features.empty()) return rates;
  Eigen::Index relevant_rejected = 0;
  Eigen::Index irrelevant_rejected = 0;
  for (const FeatureInference& row : report.features) {
    const bool relevant = std::find(true_relevant.begin(), true_relevant.end(),
                                    row.feature_index) != true_relevant.end();
    if (!row.reject) continue;
    if (relevant) {
      ++relevant_rejected;
    } else {
      ++irrelevant_rejected;
    }
  }
  if (!true_relevant.empty()) {
    rates.tpr = static_cast<double>(relevant_rejected) /
                static_cast<double>(true_relevant.size());
  }
  rates.fpr = static_cast<double>(irrelevant_rejected) /
              static_cast<double>(report.features.size());
  return rates;
}

}  // namespace hsicinf
