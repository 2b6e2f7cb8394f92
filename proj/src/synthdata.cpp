#include "hsicinf/synthdata.hpp"

#include "hsicinf/errors.hpp"
#include "hsicinf/seed.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>

namespace hsicinf {

namespace {

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Eigen::VectorXd normal_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = normal(rng);
  return out;
}

/// Feature block of one ThreeClass sample given its label: classes 1 and 2
/// are unit Gaussians at (-3,0) and (3,0); class 3 is an even mixture of
/// Gaussians at (0,3) and (0,-3) with variances (1, 2.25).
std::pair<double, double> three_class_features(int label, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  switch (label) {
    case 1: return {-3.0 + normal(rng), 0.0 + normal(rng)};
    case 2: return {3.0 + normal(rng), 0.0 + normal(rng)};
    default: {
      const double center = coin(rng) ? 3.0 : -3.0;
      return {normal(rng), center + 1.5 * normal(rng)};
    }
  }
}

Dataset make_three_class(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<int> label_dist(1, 3);
  std::normal_distribution<double> normal;

  Dataset data;
  data.x.resize(n, kScenarioFeatures);
  ClassLabels labels;
  labels.labels.resize(n);
  labels.num_classes = 3;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = label_dist(rng);
    labels.labels[i] = label;
    const auto [f1, f2] = three_class_features(label, rng);
    data.x(i, 0) = f1;
    data.x(i, 1) = f2;
    for (Eigen::Index j = 2; j < kScenarioFeatures; ++j) data.x(i, j) = normal(rng);
  }
  data.y = std::move(labels);
  return data;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  const std::string lowered = to_lower(name);
  if (lowered == "null") return Scenario::Null;
  if (lowered == "linear") return Scenario::Linear;
  if (lowered == "additive") return Scenario::AdditiveNonlinear;
  if (lowered == "nonadditive") return Scenario::NonAdditiveNonlinear;
  if (lowered == "multivariate") return Scenario::MultivariateRegression;
  if (lowered == "threeclass") return Scenario::ThreeClass;
  throw std::invalid_argument(
      "unknown scenario '" + std::string(name) +
      "' (expected null, linear, additive, nonadditive, multivariate, or threeclass)");
}

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::Null: return "null";
    case Scenario::Linear: return "linear";
    case Scenario::AdditiveNonlinear: return "additive";
    case Scenario::NonAdditiveNonlinear: return "nonadditive";
    case Scenario::MultivariateRegression: return "multivariate";
    case Scenario::ThreeClass: return "threeclass";
  }
  throw std::invalid_argument("unknown scenario enum value");
}

std::vector<Scenario> all_scenarios() {
  return {Scenario::Null,
          Scenario::Linear,
          Scenario::AdditiveNonlinear,
          Scenario::NonAdditiveNonlinear,
          Scenario::MultivariateRegression,
          Scenario::ThreeClass};
}

std::vector<Eigen::Index> input_corr_block(Scenario scenario) {
  switch (scenario) {
    case Scenario::NonAdditiveNonlinear: return {1, 2, 3, 4, 5};
    case Scenario::MultivariateRegression: return {1, 2, 3, 4};
    default: return {};
  }
}

std::vector<Eigen::Index> ground_truth(Scenario scenario) {
  switch (scenario) {
    case Scenario::Null: return {};
    case Scenario::Linear:
    case Scenario::AdditiveNonlinear:
    case Scenario::NonAdditiveNonlinear: return {1, 2, 3, 4, 5};
    case Scenario::MultivariateRegression: return {1, 2, 3, 4};
    case Scenario::ThreeClass: return {1, 2};
  }
  throw std::invalid_argument("unknown scenario enum value");
}

Eigen::MatrixXd gen_input(Eigen::Index n, Eigen::Index d,
                          const std::vector<Eigen::Index>& corr_block, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DataError("gen_input: n and d must be positive");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index a : corr_block) {
    if (a < 1 || a > d) {
      throw DataError("gen_input: correlated feature " + std::to_string(a) +
                      " outside 1.." + std::to_string(d));
    }
    for (Eigen::Index b : corr_block) {
      if (a != b) cov(a - 1, b - 1) = 0.05;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("gen_input: input covariance is not positive definite");
  }
  const Eigen::MatrixXd chol = llt.matrixL();

  std::mt19937_64 rng(splitmix64(seed));
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = (chol * normal_vector(d, rng)).transpose();
  }
  return x;
}

Response gen_response(Scenario scenario, const Eigen::Ref<const Eigen::MatrixXd>& x,
                      std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  if (n < 1) throw DataError("gen_response: empty input matrix");
  const Eigen::Index min_features = scenario == Scenario::MultivariateRegression ? 4 : 5;
  if (scenario != Scenario::Null && x.cols() < min_features) {
    throw DataError("gen_response: scenario needs at least " + std::to_string(min_features) +
                    " features, got " + std::to_string(x.cols()));
  }

  std::mt19937_64 rng(splitmix64(seed));
  switch (scenario) {
    case Scenario::Null:
      return Eigen::VectorXd(normal_vector(n, rng));
    case Scenario::Linear:
      return Eigen::VectorXd(x.leftCols(5).rowwise().sum() + 0.1 * normal_vector(n, rng));
    case Scenario::AdditiveNonlinear:
      return Eigen::VectorXd(x.leftCols(5).array().square().matrix().rowwise().sum() +
                             0.1 * normal_vector(n, rng));
    case Scenario::NonAdditiveNonlinear:
      return Eigen::VectorXd((x.col(0).array() * x.col(1).array().exp() * x.col(2).array() *
                              x.col(3).array().exp() * x.col(4).array())
                                 .matrix() +
                             0.1 * normal_vector(n, rng));
    case Scenario::MultivariateRegression: {
      Eigen::MatrixXd y(n, 3);
      // Noise is drawn independently for each output coordinate, sample by
      // sample, so the draw order is fixed regardless of how y is assembled.
      for (Eigen::Index i = 0; i < n; ++i) {
        std::normal_distribution<double> normal;
        y(i, 0) = x(i, 0) + 2.0 * x(i, 1) + 0.1 * normal(rng);
        y(i, 1) = 2.0 * x(i, 0) + x(i, 1) * x(i, 1) + 0.1 * normal(rng);
        y(i, 2) = x(i, 2) * std::exp(2.0 * x(i, 3)) + 0.1 * normal(rng);
      }
      return y;
    }
    case Scenario::ThreeClass:
      throw std::invalid_argument(
          "gen_response: ThreeClass draws features conditionally on the label and cannot "
          "take x as given; use make_dataset");
  }
  throw std::invalid_argument("unknown scenario enum value");
}

Dataset make_dataset(Scenario scenario, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw DataError("make_dataset: n must be positive");
  if (scenario == Scenario::ThreeClass) {
    return make_three_class(n, mix_seed(seed, 3));
  }
  Dataset data;
  data.x = gen_input(n, kScenarioFeatures, input_corr_block(scenario), mix_seed(seed, 1));
  data.y = gen_response(scenario, data.x, mix_seed(seed, 2));
  return data;
}

}  // namespace hsicinf
