#pragma once

#include "hsicinf/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hsicinf {

/// Data-generating processes used by the Monte-Carlo experiments. All
/// scenarios emit d = 20 features; relevance is fixed per scenario.
enum class Scenario {
  Null,                    // y ~ N(0,1) independent of x
  Linear,                  // y = x1+...+x5 + 0.1 e
  AdditiveNonlinear,       // y = x1^2+...+x5^2 + 0.1 e
  NonAdditiveNonlinear,    // y = x1 e^{x2} x3 e^{x4} x5 + 0.1 e
  MultivariateRegression,  // y in R^3 driven by x1..x4
  ThreeClass,              // labels 1..3, features 1-2 class-conditional
};

/// Accepts null, linear, additive, nonadditive, multivariate, threeclass
/// (case-insensitive).
Scenario parse_scenario(std::string_view name);
std::string scenario_name(Scenario scenario);
std::vector<Scenario> all_scenarios();

/// Number of features every scenario emits.
inline constexpr Eigen::Index kScenarioFeatures = 20;

/// 1-based features whose pairwise correlation is 0.05 in the input
/// distribution of the scenario (empty when inputs are i.i.d.).
std::vector<Eigen::Index> input_corr_block(Scenario scenario);

/// 1-based indices of the truly relevant features.
std::vector<Eigen::Index> ground_truth(Scenario scenario);

/// n rows from N(0, C) where C is the identity except that the (1-based)
/// corr_block features have off-diagonal entries 0.05.
Eigen::MatrixXd gen_input(Eigen::Index n, Eigen::Index d,
                          const std::vector<Eigen::Index>& corr_block, std::uint64_t seed);

/// Response for given inputs. ThreeClass is not supported here (its features
/// are drawn conditionally on the label, so it cannot take x as given);
/// use make_dataset for it.
Response gen_response(Scenario scenario, const Eigen::Ref<const Eigen::MatrixXd>& x,
                      std::uint64_t seed);

/// Complete seeded dataset for a scenario, including the joint
/// label-then-features draw of ThreeClass.
Dataset make_dataset(Scenario scenario, Eigen::Index n, std::uint64_t seed);

}  // namespace hsicinf
