#include "hsicinf/score_distribution.hpp"

#include "hsicinf/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>
#include <vector>

namespace hsicinf {

ScoreDistribution estimate_covariance(const BlockStatistics& stats, double shrinkage) {
  const Eigen::MatrixXd& eta = stats.eta;
  const Eigen::Index nb = eta.rows();
  const Eigen::Index d = eta.cols();
  if (nb < 2) {
    throw DataError("estimate_covariance: need at least 2 blocks to estimate a covariance, got " +
                    std::to_string(nb));
  }
  if (d < 1) throw DataError("estimate_covariance: no features");
  if (!(shrinkage >= 0.0 && shrinkage < 1.0)) {
    throw DataError("estimate_covariance: shrinkage must lie in [0, 1), got " +
                    std::to_string(shrinkage));
  }
  if (!eta.allFinite()) throw NumericError("estimate_covariance: non-finite block statistics");

  ScoreDistribution dist;
  dist.nblocks = nb;
  dist.mu = eta.colwise().mean();

  Eigen::MatrixXd centered = eta.rowwise() - dist.mu.transpose();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  s.selfadjointView<Eigen::Lower>().rankUpdate(centered.adjoint(),
                                               1.0 / static_cast<double>(nb - 1));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();

  std::vector<Eigen::Index> degenerate;
  for (Eigen::Index m = 0; m < d; ++m) {
    if (!(s(m, m) > 0.0)) degenerate.push_back(m);
  }
  if (!degenerate.empty()) {
    std::ostringstream msg;
    msg << "estimate_covariance: zero within-block variance for feature(s)";
    for (Eigen::Index m : degenerate) msg << ' ' << m;
    msg << "; constant or duplicated features cannot be tested";
    throw DegenerateFeatureError(msg.str(), std::move(degenerate));
  }

  Eigen::MatrixXd shrunk = (1.0 - shrinkage) * s;
  shrunk.diagonal() = s.diagonal();

  if (shrinkage > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(shrunk);
    if (llt.info() != Eigen::Success) {
      throw NumericError(
          "estimate_covariance: shrunk covariance is not positive definite; "
          "increase the shrinkage weight or the number of blocks");
    }
  }

  dist.sigma = shrunk / static_cast<double>(nb);
  return dist;
}

ScoreDistribution rescale_to_blocks(const ScoreDistribution& dist, Eigen::Index nblocks) {
  if (nblocks < 1) {
    throw DataError("rescale_to_blocks: block count must be positive, got " +
                    std::to_string(nblocks));
  }
  if (dist.nblocks < 1) throw DataError("rescale_to_blocks: source distribution has no blocks");
  ScoreDistribution out = dist;
  out.sigma *= static_cast<double>(dist.nblocks) / static_cast<double>(nblocks);
  out.nblocks = nblocks;
  return out;
}

}  // namespace hsicinf
