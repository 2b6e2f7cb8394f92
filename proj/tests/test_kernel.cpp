#include "hsicinf/errors.hpp"
#include "hsicinf/kernel.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace hsicinf;

namespace {

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd points(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) points(i, j) = normal(rng);
  return points;
}

}  // namespace

TEST_CASE("gaussian gram: single point is [1]") {
  Eigen::MatrixXd p(1, 1);
  p << 3.7;
  const Eigen::MatrixXd k = gram_matrix(p, GaussianKernel{1.0});
  REQUIRE(k.rows() == 1);
  CHECK(k(0, 0) == 1.0);
}

TEST_CASE("gaussian gram: off-diagonal matches exp(-dist^2/(2 tau^2))") {
  Eigen::MatrixXd p(2, 1);
  p << 0.0, 2.0;
  const Eigen::MatrixXd k = gram_matrix(p, GaussianKernel{1.0});
  CHECK(k(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(k(1, 0) == k(0, 1));
  CHECK(k(0, 0) == 1.0);
  CHECK(k(1, 1) == 1.0);

  const Eigen::MatrixXd k2 = gram_matrix(p, GaussianKernel{2.0});
  CHECK(k2(0, 1) == doctest::Approx(std::exp(-4.0 / 8.0)).epsilon(1e-15));
}

TEST_CASE("delta gram on labels {1,2,1}") {
  Eigen::MatrixXd labels(3, 1);
  labels << 1.0, 2.0, 1.0;
  const Eigen::MatrixXd k = gram_matrix(labels, DeltaKernel{3});
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0, 1, 0, 1, 0, 1, 0, 1;
  CHECK(k == expected);
}

TEST_CASE("delta gram rejects out-of-range and fractional labels") {
  Eigen::MatrixXd labels(2, 1);
  labels << 1.0, 4.0;
  CHECK_THROWS_AS(gram_matrix(labels, DeltaKernel{3}), DataError);
  labels << 1.0, 1.5;
  CHECK_THROWS_AS(gram_matrix(labels, DeltaKernel{3}), DataError);
}

TEST_CASE("gaussian gram validates bandwidth") {
  Eigen::MatrixXd p(2, 1);
  p << 0.0, 1.0;
  CHECK_THROWS_AS(gram_matrix(p, GaussianKernel{0.0}), DataError);
  CHECK_THROWS_AS(gram_matrix(p, GaussianKernel{-1.0}), DataError);
  CHECK_THROWS_AS(validate(KernelSpec{GaussianKernel{
                      std::numeric_limits<double>::infinity()}}),
                  DataError);
}

TEST_CASE("gram matrices are bitwise symmetric and near-PSD") {
  const Eigen::MatrixXd p = random_points(25, 3, 11);
  for (const KernelSpec& spec :
       {KernelSpec{GaussianKernel{0.7}}, KernelSpec{LinearKernel{}}}) {
    const Eigen::MatrixXd k = gram_matrix(p, spec);
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) REQUIRE(k(i, j) == k(j, i));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("gaussian gram entries lie in (0,1] with unit diagonal") {
  const Eigen::MatrixXd p = random_points(30, 2, 12);
  const Eigen::MatrixXd k = gram_matrix(p, GaussianKernel{0.5});
  CHECK((k.diagonal().array() == 1.0).all());
  CHECK((k.array() > 0.0).all());
  CHECK((k.array() <= 1.0).all());
}

TEST_CASE("gaussian gram commutes with point permutation") {
  const Eigen::MatrixXd p = random_points(8, 2, 13);
  const Eigen::MatrixXd k = gram_matrix(p, GaussianKernel{1.3});
  std::vector<Eigen::Index> perm = {3, 1, 7, 0, 2, 6, 4, 5};
  Eigen::MatrixXd shuffled(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) shuffled.row(i) = p.row(perm[i]);
  const Eigen::MatrixXd ks = gram_matrix(shuffled, GaussianKernel{1.3});
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.rows(); ++j)
      CHECK(ks(i, j) == k(perm[i], perm[j]));
}

TEST_CASE("delta gram equals linear gram on one-hot encodings") {
  Eigen::VectorXi labels(6);
  labels << 1, 3, 2, 3, 1, 2;
  const Eigen::MatrixXd onehot = one_hot_encode(labels, 3);
  const Eigen::MatrixXd lin = gram_matrix(onehot, LinearKernel{});
  const Eigen::MatrixXd del = gram_matrix(labels.cast<double>(), DeltaKernel{3});
  CHECK(lin == del);

  // The delta kernel also accepts the one-hot representation directly.
  const Eigen::MatrixXd del2 = gram_matrix(onehot, DeltaKernel{3});
  CHECK(del2 == del);
}

TEST_CASE("one_hot_encode basics") {
  Eigen::VectorXi labels(1);
  labels << 2;
  const Eigen::MatrixXd row = one_hot_encode(labels, 3);
  CHECK(row(0, 0) == 0.0);
  CHECK(row(0, 1) == 1.0);
  CHECK(row(0, 2) == 0.0);

  Eigen::VectorXi two(2);
  two << 2, 3;
  const Eigen::MatrixXd enc = one_hot_encode(two, 3);
  CHECK(enc.row(0).dot(enc.row(1)) == 0.0);

  Eigen::VectorXi one(1);
  one << 1;
  CHECK_THROWS_AS(one_hot_encode(one, 1), DataError);
  Eigen::VectorXi bad(1);
  bad << 4;
  CHECK_THROWS_AS(one_hot_encode(bad, 3), DataError);
}

TEST_CASE("median_heuristic on small hand cases") {
  Eigen::MatrixXd two(2, 1);
  two << 0.0, 1.0;
  CHECK(median_heuristic(two) == 1.0);

  Eigen::MatrixXd three(3, 1);
  three << 0.0, 1.0, 3.0;
  CHECK(median_heuristic(three) == 2.0);  // distances {1,2,3}

  Eigen::MatrixXd four(4, 1);
  four << 0.0, 1.0, 3.0, 6.0;  // distances {1,2,3,3,5,6}; central pair (3,3)
  CHECK(median_heuristic(four) == 3.0);

  Eigen::MatrixXd constant(3, 1);
  constant << 5.0, 5.0, 5.0;
  CHECK_THROWS_AS(median_heuristic(constant), NumericError);

  Eigen::MatrixXd single(1, 1);
  single << 0.0;
  CHECK_THROWS_AS(median_heuristic(single), DataError);
}

TEST_CASE("median_heuristic: mostly duplicated points still yield zero median") {
  // 4 identical + 1 distinct point: distances {0,0,0,0,0,0,d,d,d,d};
  // the median is 0, which cannot serve as a bandwidth.
  Eigen::MatrixXd p(5, 1);
  p << 1.0, 1.0, 1.0, 1.0, 9.0;
  CHECK_THROWS_AS(median_heuristic(p), NumericError);
}

TEST_CASE("gram_matrix rejects empty input") {
  Eigen::MatrixXd empty(0, 1);
  CHECK_THROWS_AS(gram_matrix(empty, GaussianKernel{1.0}), DataError);
}
