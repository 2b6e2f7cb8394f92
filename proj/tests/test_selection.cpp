#include "hsicinf/errors.hpp"
#include "hsicinf/selection.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

using namespace hsicinf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

// Random covariance matrix with unit-scale diagonal: A A^T + small ridge.
Eigen::MatrixXd random_covariance(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = normal(rng);
  Eigen::MatrixXd sigma = a * a.transpose() / static_cast<double>(d);
  sigma.diagonal().array() += 0.05;
  // Mirror to kill asymmetry from the matrix product's rounding.
  Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  return sym;
}

ScoreDistribution dist_from(Eigen::MatrixXd sigma) {
  ScoreDistribution dist;
  dist.mu = Eigen::VectorXd::Zero(sigma.rows());
  dist.sigma = std::move(sigma);
  dist.nblocks = 10;
  return dist;
}

}  // namespace

TEST_CASE("select_top_k basics") {
  const ScreeningResult a = select_top_k(vec({3, 1, 2}), 1);
  CHECK(a.selected == std::vector<Eigen::Index>{0});
  CHECK(a.unselected == std::vector<Eigen::Index>{2, 1});

  const ScreeningResult tie = select_top_k(vec({2, 2, 1}), 1);
  CHECK(tie.selected == std::vector<Eigen::Index>{0});  // smaller index wins

  const ScreeningResult b = select_top_k(vec({0.5, 0.1, 0.9, 0.3}), 2);
  CHECK(b.selected == std::vector<Eigen::Index>{2, 0});
  CHECK(b.unselected == std::vector<Eigen::Index>{3, 1});
}

TEST_CASE("select_top_k orders both lists by decreasing score") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(9);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  const ScreeningResult result = select_top_k(z, 4);
  for (std::size_t i = 1; i < result.selected.size(); ++i) {
    CHECK(z[result.selected[i - 1]] >= z[result.selected[i]]);
  }
  for (std::size_t i = 1; i < result.unselected.size(); ++i) {
    CHECK(z[result.unselected[i - 1]] >= z[result.unselected[i]]);
  }
  CHECK(z[result.selected.back()] >= z[result.unselected.front()]);
  std::set<Eigen::Index> all(result.selected.begin(), result.selected.end());
  all.insert(result.unselected.begin(), result.unselected.end());
  CHECK(all.size() == 9);
}

TEST_CASE("select_top_k validates inputs") {
  CHECK_THROWS_AS(select_top_k(vec({1, 2}), 0), DataError);
  CHECK_THROWS_AS(select_top_k(vec({1, 2}), 2), DataError);
  CHECK_THROWS_AS(select_top_k(vec({1, std::nan("")}), 1), NumericError);
}

TEST_CASE("constraint_index_maps is the expected bijection") {
  // (theta=1,k=2,kbar=3) -> (1,1) in 1-based terms, i.e. (0,0) here.
  CHECK(constraint_index_maps(0, 2, 3).sel_pos == 0);
  CHECK(constraint_index_maps(0, 2, 3).unsel_pos == 0);
  // 1-based theta=3 -> (1,3); theta=6 -> (2,3).
  CHECK(constraint_index_maps(2, 2, 3).sel_pos == 0);
  CHECK(constraint_index_maps(2, 2, 3).unsel_pos == 2);
  CHECK(constraint_index_maps(5, 2, 3).sel_pos == 1);
  CHECK(constraint_index_maps(5, 2, 3).unsel_pos == 2);
  CHECK_THROWS_AS(constraint_index_maps(6, 2, 3), DataError);
  CHECK_THROWS_AS(constraint_index_maps(-1, 2, 3), DataError);
}

TEST_CASE("constraint_index_maps covers every pair exactly once (exhaustive)") {
  for (Eigen::Index k = 1; k <= 12; ++k) {
    for (Eigen::Index kbar = 1; kbar <= 12; ++kbar) {
      std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
      for (Eigen::Index theta = 0; theta < k * kbar; ++theta) {
        const ConstraintPair pair = constraint_index_maps(theta, k, kbar);
        REQUIRE(pair.sel_pos >= 0);
        REQUIRE(pair.sel_pos < k);
        REQUIRE(pair.unsel_pos >= 0);
        REQUIRE(pair.unsel_pos < kbar);
        seen.insert({pair.sel_pos, pair.unsel_pos});
      }
      REQUIRE(seen.size() == static_cast<std::size_t>(k * kbar));
    }
  }
}

TEST_CASE("d=2 identity-covariance case: V- = z2, V+ = +inf") {
  // Binary-exact scores and unit variance keep the closed form exact.
  const Eigen::VectorXd z = vec({1.5, 0.25});
  const ScreeningResult screening = select_top_k(z, 1);
  const ScoreDistribution dist = dist_from(Eigen::MatrixXd::Identity(2, 2));
  const TruncationInterval interval = truncation_interval(0, screening, dist);
  CHECK(interval.lower == 0.25);
  CHECK(interval.upper == kInf);
}

TEST_CASE("diagonal covariance: V- is the max unselected score, V+ infinite") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index d = 6;
    Eigen::VectorXd z(d);
    for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) sigma(i, i) = 0.5 + i * 0.1;
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % 4);
    const ScreeningResult screening = select_top_k(z, k);
    double max_unselected = -kInf;
    for (Eigen::Index u : screening.unselected) max_unselected = std::max(max_unselected, z[u]);
    for (Eigen::Index m : screening.selected) {
      const TruncationInterval interval = truncation_interval(m, screening, dist_from(sigma));
      CHECK(std::abs(interval.lower - max_unselected) <= 1e-13);
      CHECK(interval.upper == kInf);
    }
  }
}

TEST_CASE("closed form equals the generic polyhedral scan on random instances") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index d = 3 + static_cast<Eigen::Index>(rng() % 8);  // up to 10
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng() % std::min<Eigen::Index>(5, d - 1));
    Eigen::VectorXd z(d);
    for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);
    const Eigen::MatrixXd sigma = random_covariance(d, rng);
    const ScreeningResult screening = select_top_k(z, k);
    for (Eigen::Index m : screening.selected) {
      const TruncationInterval fast = truncation_interval(m, screening, dist_from(sigma));
      const oracles::Interval slow =
          oracles::polyhedral_scan(m, screening.selected, screening.unselected, z, sigma);
      // The scan divides covariances by the variance before differencing, so
      // near-parallel constraints cost a few digits; compare with a mixed
      // absolute/relative tolerance.
      if (std::isfinite(slow.lower)) {
        CHECK(std::abs(fast.lower - slow.lower) <= 1e-9 * std::max(1.0, std::abs(slow.lower)));
      } else {
        CHECK(fast.lower == slow.lower);
      }
      if (std::isfinite(slow.upper)) {
        CHECK(std::abs(fast.upper - slow.upper) <= 1e-9 * std::max(1.0, std::abs(slow.upper)));
      } else {
        CHECK(fast.upper == slow.upper);
      }
      // The observed score always satisfies its own selection event.
      CHECK(fast.lower <= z[m]);
      CHECK(z[m] <= fast.upper);
      CHECK(fast.lower < fast.upper);
    }
  }
}

TEST_CASE("truncation_interval validates its inputs") {
  const Eigen::VectorXd z = vec({2, 1, 0});
  const ScreeningResult screening = select_top_k(z, 1);
  const ScoreDistribution dist = dist_from(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(truncation_interval(1, screening, dist), DataError);  // not selected
  ScoreDistribution bad = dist;
  bad.sigma(0, 0) = 0.0;
  CHECK_THROWS_AS(truncation_interval(0, screening, bad), NumericError);
  ScoreDistribution wrong_shape = dist;
  wrong_shape.sigma = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(truncation_interval(0, screening, wrong_shape), DataError);
}

TEST_CASE("infeasible zero-denominator constraint is an error") {
  // Equal covariance columns make the constraint projection zero; pair that
  // with scores violating the screening inequality.
  ScreeningResult screening;
  screening.z = vec({1.0, 2.0});
  screening.selected = {0};
  screening.unselected = {1};
  // sigma(0,0) == sigma(1,0) == 1 -> zero projection; z violates z0 >= z1.
  const ScoreDistribution dist = dist_from(Eigen::MatrixXd::Ones(2, 2));
  CHECK_THROWS_AS(truncation_interval(0, screening, dist), NumericError);

  // With consistent scores the same constraint is skipped quietly.
  screening.z = vec({2.0, 1.0});
  const TruncationInterval interval = truncation_interval(0, screening, dist);
  CHECK(interval.lower == -kInf);
  CHECK(interval.upper == kInf);
}
