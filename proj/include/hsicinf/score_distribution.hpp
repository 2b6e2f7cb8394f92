#pragma once

#include "hsicinf/block_hsic.hpp"

#include <Eigen/Core>

namespace hsicinf {

/// Gaussian model of the block-averaged score vector z: mean, covariance on
/// the scale of the block average (per-block covariance / nblocks), and the
/// block count the scaling refers to.
struct ScoreDistribution {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::Index nblocks = 0;
};

/// Mean and covariance of the score vector from within-block statistics.
///
/// S is the sample covariance (denominator nblocks-1) of the eta rows;
/// the returned sigma is ((1-shrinkage) S + shrinkage diag(S)) / nblocks,
/// which has the off-diagonals damped and the diagonal of S intact. The
/// division by nblocks converts per-block dispersion to the dispersion of
/// the block average.
///
/// Shrinkage in (0, 1) makes sigma positive definite whenever every feature
/// has positive within-block variance; features with zero variance are
/// reported through DegenerateFeatureError since no shrinkage weight can
/// repair them. At shrinkage 0 a rank-deficient S is returned as-is.
ScoreDistribution estimate_covariance(const BlockStatistics& stats, double shrinkage);

/// Same per-block covariance re-expressed for a block average over a
/// different number of blocks (e.g. covariance learned on a held-out split,
/// applied to the score of the inference split).
ScoreDistribution rescale_to_blocks(const ScoreDistribution& dist, Eigen::Index nblocks);

}  // namespace hsicinf
