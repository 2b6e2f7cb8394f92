#pragma once

#include "hsicinf/pipeline.hpp"
#include "hsicinf/synthdata.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hsicinf {

/// Monte-Carlo experiment over the cross product scenario x n x block size
/// x method. Each cell runs `trials` independent trials (`null_trials` for
/// the null scenario, whose rates need more resolution).
struct ExperimentGrid {
  std::vector<Scenario> scenarios;
  std::vector<Eigen::Index> sample_sizes = {300,  600,  900,  1200, 1500,
                                            1800, 2100, 2400, 2700, 3000};
  std::vector<Eigen::Index> block_sizes = {5, 10};
  std::vector<Method> methods = {Method::HsicInf, Method::HsicNaive, Method::Split};
  int trials = 100;
  int null_trials = 300;
  std::uint64_t base_seed = 1;
  Eigen::Index k = 10;
  double alpha = 0.05;
  double shrinkage = 0.9;  // see PipelineConfig::shrinkage
  int threads = 1;
};

struct TrialRecord {
  Scenario scenario = Scenario::Null;
  Eigen::Index n = 0;
  Eigen::Index block_size = 0;
  Method method = Method::HsicInf;
  int trial = 0;
  std::uint64_t seed = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  bool failed = false;
  std::string error;
};

struct CurvePoint {
  Scenario scenario = Scenario::Null;
  Eigen::Index n = 0;
  Eigen::Index block_size = 0;
  Method method = Method::HsicInf;
  int trials = 0;    // scheduled trials
  int failures = 0;  // excluded from the means
  double mean_tpr = 0.0;
  double se_tpr = 0.0;
  double mean_fpr = 0.0;
  double se_fpr = 0.0;
  bool flagged = false;  // more than 10% of the trials failed
};

struct GridResult {
  std::vector<TrialRecord> trials;
  std::vector<CurvePoint> curves;
};

/// Deterministic per-trial seed: base_seed folded with the cell coordinates
/// and the trial index (see README for the exact mixing chain). Identical
/// regardless of scheduling, so parallel runs reproduce serial ones.
std::uint64_t trial_seed(std::uint64_t base_seed, Scenario scenario, Eigen::Index n,
                         Eigen::Index block_size, Method method, int trial);

/// Sub-seeds derived from a trial seed: one for the dataset draw, one for
/// the pipeline's split shuffle.
struct TrialSeeds {
  std::uint64_t dataset = 0;
  std::uint64_t pipeline = 0;
};
TrialSeeds trial_seeds(std::uint64_t trial_seed_value);

/// One dataset draw + pipeline run + evaluation. Exceptions from degenerate
/// draws are captured in the record, not thrown.
TrialRecord run_trial(const ExperimentGrid& grid, Scenario scenario, Eigen::Index n,
                      Eigen::Index block_size, Method method, int trial);

/// Aggregate one cell's records (means/standard errors over the non-failed
/// trials; se = sample sd / sqrt(count)).
CurvePoint aggregate_cell(const std::vector<TrialRecord>& cell);

/// Run every cell of the grid. If out_dir is non-empty, trials.csv is
/// rewritten after each finished cell (so an interrupted run resumes
/// cell-by-cell: persisted cells whose coordinates, trial count, and seeds
/// match are reused instead of re-run) and curves.csv is written at the
/// end.
GridResult run_grid(const ExperimentGrid& grid, const std::filesystem::path& out_dir = {});

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path);
void write_curves_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curves);

/// Tidy per-figure data: fig_fpr_null.csv (false positive rate vs n under
/// the null), fig_tpr.csv (power vs n per scenario), fig_b_sweep.csv
/// (both rates keyed by block size).
void write_figure_csvs(const std::filesystem::path& out_dir,
                       const std::vector<CurvePoint>& curves);

}  // namespace hsicinf
