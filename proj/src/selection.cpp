#include "hsicinf/selection.hpp"

#include "hsicinf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hsicinf {

ScreeningResult select_top_k(const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::Index k) {
  const Eigen::Index d = z.size();
  if (k < 1 || k >= d) {
    throw DataError("select_top_k: k must satisfy 1 <= k < d, got k=" + std::to_string(k) +
                    " with d=" + std::to_string(d));
  }
  for (Eigen::Index m = 0; m < d; ++m) {
    if (std::isnan(z[m])) {
      throw NumericError("select_top_k: score " + std::to_string(m) + " is NaN");
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&z](Eigen::Index a, Eigen::Index b) { return z[a] > z[b]; });

  ScreeningResult result;
  result.z = z;
  result.selected.assign(order.begin(), order.begin() + k);
  result.unselected.assign(order.begin() + k, order.end());
  return result;
}

ConstraintPair constraint_index_maps(Eigen::Index theta, Eigen::Index k, Eigen::Index kbar) {
  if (k < 1 || kbar < 1) {
    throw DataError("constraint_index_maps: k and kbar must be positive");
  }
  if (theta < 0 || theta >= k * kbar) {
    throw DataError("constraint_index_maps: theta=" + std::to_string(theta) +
                    " outside [0, " + std::to_string(k * kbar) + ")");
  }
  return ConstraintPair{theta / kbar, theta % kbar};
}

TruncationInterval truncation_interval(Eigen::Index feature, const ScreeningResult& screening,
                                       const ScoreDistribution& dist) {
  const Eigen::VectorXd& z = screening.z;
  const Eigen::MatrixXd& sigma = dist.sigma;
  const Eigen::Index d = z.size();
  const Eigen::Index k = static_cast<Eigen::Index>(screening.selected.size());
  const Eigen::Index kbar = static_cast<Eigen::Index>(screening.unselected.size());
  if (k + kbar != d || k < 1 || kbar < 1) {
    throw DataError("truncation_interval: screening does not partition the feature set");
  }
  if (sigma.rows() != d || sigma.cols() != d) {
    throw DataError("truncation_interval: sigma is " + std::to_string(sigma.rows()) + "x" +
                    std::to_string(sigma.cols()) + " but there are " + std::to_string(d) +
                    " features");
  }
  const bool in_s = std::find(screening.selected.begin(), screening.selected.end(), feature) !=
                    screening.selected.end();
  if (!in_s) {
    throw DataError("truncation_interval: feature " + std::to_string(feature) +
                    " is not in the selected set");
  }
  const double var_m = sigma(feature, feature);
  if (!(var_m > 0.0) || !std::isfinite(var_m)) {
    throw NumericError("truncation_interval: sigma[" + std::to_string(feature) + "," +
                       std::to_string(feature) + "] must be positive and finite");
  }

  TruncationInterval interval;
  interval.lower = -std::numeric_limits<double>::infinity();
  interval.upper = std::numeric_limits<double>::infinity();
  const double zm = z[feature];

  for (Eigen::Index theta = 0; theta < k * kbar; ++theta) {
    const ConstraintPair pair = constraint_index_maps(theta, k, kbar);
    const Eigen::Index sel = screening.selected[static_cast<std::size_t>(pair.sel_pos)];
    const Eigen::Index unsel = screening.unselected[static_cast<std::size_t>(pair.unsel_pos)];
    const double cov_unsel = sigma(unsel, feature);
    const double cov_sel = sigma(sel, feature);
    if (cov_unsel < cov_sel) {
      const double candidate = var_m * (z[sel] - z[unsel]) / (cov_unsel - cov_sel) + zm;
      interval.lower = std::max(interval.lower, candidate);
    } else if (cov_unsel > cov_sel) {
      const double candidate = var_m * (z[sel] - z[unsel]) / (cov_unsel - cov_sel) + zm;
      interval.upper = std::min(interval.upper, candidate);
    } else if (!(z[sel] >= z[unsel])) {
      throw NumericError(
          "truncation_interval: constraint " + std::to_string(theta) +
          " has zero projection but is violated at the observed scores; "
          "screening result and covariance are inconsistent");
    }
  }

  if (!(interval.lower < interval.upper)) {
    throw NumericError("truncation_interval: degenerate interval [" +
                       std::to_string(interval.lower) + ", " + std::to_string(interval.upper) +
                       "] for feature " + std::to_string(feature));
  }
  return interval;
}

}  // namespace hsicinf
