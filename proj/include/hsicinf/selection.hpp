#pragma once

#include "hsicinf/score_distribution.hpp"

#include <Eigen/Core>

#include <vector>

namespace hsicinf {

/// Outcome of top-k marginal screening. Both index lists are in decreasing
/// score order (ties broken by smaller index) and partition 0..d-1.
struct ScreeningResult {
  std::vector<Eigen::Index> selected;
  std::vector<Eigen::Index> unselected;
  Eigen::VectorXd z;
};

/// Pick the k features with the largest scores. Ties are resolved in favour
/// of the smaller index, so the result is deterministic.
ScreeningResult select_top_k(const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::Index k);

/// Position pair addressed by one screening constraint: constraint theta
/// (0-based, theta in [0, k*kbar)) compares selected[sel_pos] against
/// unselected[unsel_pos]. Enumerating theta visits every such pair once.
struct ConstraintPair {
  Eigen::Index sel_pos = 0;
  Eigen::Index unsel_pos = 0;
};

ConstraintPair constraint_index_maps(Eigen::Index theta, Eigen::Index k, Eigen::Index kbar);

/// Truncation of the score of one selected feature induced by conditioning
/// on the screening outcome. Endpoints are extended reals: -inf / +inf mean
/// the corresponding side is not truncated.
struct TruncationInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Closed-form truncation interval for the score z[feature] of a selected
/// feature, conditioning on "these k features beat the other kbar".
///
/// Each of the k*kbar constraints z[sel] >= z[unsel] is turned into a bound
/// on z[feature] along the direction sigma.col(feature): constraints whose
/// projection is negative tighten the lower endpoint, positive ones tighten
/// the upper endpoint, and zero-projection constraints impose no bound but
/// must already hold at the observed z (otherwise screening and sigma are
/// inconsistent and a NumericError is raised).
TruncationInterval truncation_interval(Eigen::Index feature, const ScreeningResult& screening,
                                       const ScoreDistribution& dist);

}  // namespace hsicinf
