#pragma once

#include "hsicinf/selection.hpp"

#include <limits>

namespace hsicinf {

/// Standard normal CDF. Accurate in both tails (no 1 - Phi(-x) subtraction).
double normal_cdf(double x);

/// log of the standard normal CDF, finite for every finite x. Far left-tail
/// values (x < -37, where erfc underflows) come from the asymptotic
/// expansion of Mills' ratio.
double normal_logcdf(double x);

/// Normal distribution truncated to [lower, upper]. Infinite endpoints mean
/// the corresponding side is untruncated.
struct TruncatedNormalParams {
  double mean = 0.0;
  double variance = 1.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// CDF of the truncated normal at x in [lower, upper].
///
/// Evaluated in log space on whichever normal tail (CDF or survival) keeps
/// the interval probability representable, so intervals sitting far out in
/// a tail do not collapse to 0/0. Returns exactly 0 at x == lower and
/// exactly 1 at x == upper. If the interval probability still underflows,
/// throws NumericError rather than returning NaN.
double trunc_norm_cdf(double x, const TruncatedNormalParams& params);

/// Survival function 1 - CDF, computed by reflection so the upper tail keeps
/// full relative precision.
double trunc_norm_sf(double x, const TruncatedNormalParams& params);

/// One-sided selective p-value for a score with null mean 0 and the given
/// variance, conditioned on the score falling in the truncation interval:
/// the upper-tail probability of the truncated normal at the observed score.
/// Large positive scores are the only alternative direction because the
/// population dependence measure is nonnegative for the kernels used here.
double selective_p_value(double score, double variance, const TruncationInterval& interval);

}  // namespace hsicinf
