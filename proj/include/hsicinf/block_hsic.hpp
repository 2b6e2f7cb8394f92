#pragma once

#include "hsicinf/kernel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace hsicinf {

/// Disjoint division of the first B*floor(n/B) samples (after an optional
/// shuffle) into blocks of exactly B indices. Trailing n mod B samples are
/// discarded; the per-block estimator is specific to a common block size.
class BlockPartition {
 public:
  /// `order` must hold block_count * block_size distinct indices in [0, n).
  BlockPartition(Eigen::Index sample_count, Eigen::Index block_size,
                 std::vector<Eigen::Index> order);

  Eigen::Index sample_count() const { return sample_count_; }
  Eigen::Index block_size() const { return block_size_; }
  Eigen::Index block_count() const {
    return static_cast<Eigen::Index>(order_.size()) / block_size_;
  }
  std::span<const Eigen::Index> block(Eigen::Index b) const {
    return {order_.data() + b * block_size_, static_cast<std::size_t>(block_size_)};
  }

 private:
  Eigen::Index sample_count_;
  Eigen::Index block_size_;
  std::vector<Eigen::Index> order_;
};

/// Blocks {0..B-1}, {B..2B-1}, ... in sample order.
BlockPartition sequential_partition(Eigen::Index n, Eigen::Index block_size);

/// Seeded uniform shuffle of [0, n) followed by sequential chunking.
/// Guards against sorted input files; this is the default assignment.
BlockPartition shuffled_partition(Eigen::Index n, Eigen::Index block_size,
                                  std::uint64_t seed);

/// Unbiased HSIC estimate from one block's Gram matrices (both B x B,
/// symmetric, B >= 4). With zero-diagonal Kb, Lb this is
///   [tr(Kb Lb) + (1'Kb1)(1'Lb1)/((B-1)(B-2)) - 2/(B-2) 1'Kb Lb 1] / (B(B-3)).
double within_block_hsic(const Eigen::Ref<const Eigen::MatrixXd>& k_gram,
                         const Eigen::Ref<const Eigen::MatrixXd>& l_gram);

/// Per-block estimates for every feature, sharing one partition.
/// eta(b, m) is the within-block estimate for feature m on block b.
struct BlockStatistics {
  Eigen::MatrixXd eta;
  BlockPartition partition;
};

struct HsicScores {
  Eigen::VectorXd z;      ///< per-feature score: column means of eta
  BlockStatistics stats;
};

/// Block-averaged HSIC score for every feature column of `features` against
/// the shared response rows. The response Gram of each block is computed
/// once and reused across features; feature Grams use a single column.
HsicScores hsic_vector(const Eigen::Ref<const Eigen::MatrixXd>& features,
                       const Eigen::Ref<const Eigen::MatrixXd>& responses,
                       const KernelSpec& feature_kernel,
                       const KernelSpec& response_kernel,
                       const BlockPartition& partition);

}  // namespace hsicinf
