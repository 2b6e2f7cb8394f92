#include "hsicinf/block_hsic.hpp"

#include "hsicinf/errors.hpp"
#include "hsicinf/seed.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace hsicinf {

namespace {

void check_block_size(Eigen::Index n, Eigen::Index block_size) {
  if (block_size < 4) {
    // the estimator divides by B(B-3), (B-1), (B-2)
    throw DataError("block size must be >= 4, got " + std::to_string(block_size));
  }
  if (n < block_size) {
    throw DataError("need at least one full block: n=" + std::to_string(n) +
                                ", B=" + std::to_string(block_size));
  }
}

}  // namespace

BlockPartition::BlockPartition(Eigen::Index sample_count, Eigen::Index block_size,
                               std::vector<Eigen::Index> order)
    : sample_count_(sample_count), block_size_(block_size), order_(std::move(order)) {
  check_block_size(sample_count, block_size);
  const Eigen::Index used = block_size * (sample_count / block_size);
  if (static_cast<Eigen::Index>(order_.size()) != used) {
    throw DataError("partition order must cover exactly " + std::to_string(used) +
                                " samples, got " + std::to_string(order_.size()));
  }
  std::vector<bool> seen(static_cast<std::size_t>(sample_count), false);
  for (Eigen::Index idx : order_) {
    if (idx < 0 || idx >= sample_count || seen[static_cast<std::size_t>(idx)]) {
      throw DataError("partition indices must be distinct and in [0, n)");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
}

BlockPartition sequential_partition(Eigen::Index n, Eigen::Index block_size) {
  check_block_size(n, block_size);
  const Eigen::Index used = block_size * (n / block_size);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(used));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  return BlockPartition(n, block_size, std::move(order));
}

BlockPartition shuffled_partition(Eigen::Index n, Eigen::Index block_size, std::uint64_t seed) {
  check_block_size(n, block_size);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(splitmix64(seed));
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(block_size * (n / block_size)));
  return BlockPartition(n, block_size, std::move(order));
}

double within_block_hsic(const Eigen::Ref<const Eigen::MatrixXd>& k_gram,
                         const Eigen::Ref<const Eigen::MatrixXd>& l_gram) {
  const Eigen::Index b = k_gram.rows();
  if (k_gram.cols() != b || l_gram.rows() != b || l_gram.cols() != b) {
    throw DataError("within_block_hsic needs two square Grams of equal size");
  }
  if (b < 4) {
    throw DataError("within_block_hsic needs block size >= 4, got " + std::to_string(b));
  }

  Eigen::MatrixXd kb = k_gram;
  Eigen::MatrixXd lb = l_gram;
  kb.diagonal().setZero();
  lb.diagonal().setZero();

  const Eigen::VectorXd k_row = kb.rowwise().sum();
  const Eigen::VectorXd l_row = lb.rowwise().sum();
  const double trace_kl = kb.cwiseProduct(lb).sum();
  const double sum_k = k_row.sum();
  const double sum_l = l_row.sum();
  const double quad = k_row.dot(l_row);  // 1'Kb Lb 1, by symmetry of Kb

  const double bd = static_cast<double>(b);
  return (trace_kl + sum_k * sum_l / ((bd - 1.0) * (bd - 2.0)) - 2.0 / (bd - 2.0) * quad) /
         (bd * (bd - 3.0));
}

HsicScores hsic_vector(const Eigen::Ref<const Eigen::MatrixXd>& features,
                       const Eigen::Ref<const Eigen::MatrixXd>& responses,
                       const KernelSpec& feature_kernel,
                       const KernelSpec& response_kernel,
                       const BlockPartition& partition) {
  const Eigen::Index d = features.cols();
  const Eigen::Index nblocks = partition.block_count();
  const Eigen::Index bsize = partition.block_size();
  if (features.rows() < partition.sample_count() || responses.rows() < partition.sample_count()) {
    throw DataError("partition refers to samples beyond the data");
  }

  Eigen::MatrixXd eta(nblocks, d);
  Eigen::MatrixXd block_y(bsize, responses.cols());
  Eigen::MatrixXd block_x(bsize, 1);
  for (Eigen::Index b = 0; b < nblocks; ++b) {
    const auto idx = partition.block(b);
    for (Eigen::Index i = 0; i < bsize; ++i) block_y.row(i) = responses.row(idx[i]);
    const Eigen::MatrixXd l_gram = gram_matrix(block_y, response_kernel);
    for (Eigen::Index m = 0; m < d; ++m) {
      for (Eigen::Index i = 0; i < bsize; ++i) block_x(i, 0) = features(idx[i], m);
      eta(b, m) = within_block_hsic(gram_matrix(block_x, feature_kernel), l_gram);
    }
  }

  return HsicScores{eta.colwise().mean(), BlockStatistics{std::move(eta), partition}};
}

}  // namespace hsicinf
