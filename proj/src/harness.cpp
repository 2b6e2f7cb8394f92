#include "hsicinf/harness.hpp"

#include "hsicinf/errors.hpp"
#include "hsicinf/io.hpp"
#include "hsicinf/seed.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>
#include <tuple>

namespace hsicinf {

namespace {

using CellKey = std::tuple<Scenario, Eigen::Index, Eigen::Index, Method>;

CellKey key_of(const TrialRecord& rec) {
  return {rec.scenario, rec.n, rec.block_size, rec.method};
}

void validate_grid(const ExperimentGrid& grid) {
  if (grid.scenarios.empty()) throw DataError("run_grid: no scenarios");
  if (grid.sample_sizes.empty()) throw DataError("run_grid: no sample sizes");
  if (grid.block_sizes.empty()) throw DataError("run_grid: no block sizes");
  if (grid.methods.empty()) throw DataError("run_grid: no methods");
  if (grid.trials < 1 || grid.null_trials < 1) throw DataError("run_grid: trials must be >= 1");
  if (grid.threads < 1) throw DataError("run_grid: threads must be >= 1");
}

/// Runs body(t) for t in [0, count) on up to `threads` workers. Results go
/// into slots indexed by t, so the outcome is independent of scheduling.
template <typename Body>
void parallel_for(int threads, int count, const Body& body) {
  const int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1)) body(t);
    });
  }
  for (std::thread& worker : pool) worker.join();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <typename Getter>
MeanSe mean_and_se(const std::vector<TrialRecord>& cell, const Getter& get) {
  double sum = 0.0;
  int count = 0;
  for (const TrialRecord& rec : cell) {
    if (rec.failed) continue;
    sum += get(rec);
    ++count;
  }
  MeanSe out;
  if (count == 0) return out;
  out.mean = sum / count;
  if (count < 2) return out;
  double ss = 0.0;
  for (const TrialRecord& rec : cell) {
    if (rec.failed) continue;
    const double delta = get(rec) - out.mean;
    ss += delta * delta;
  }
  out.se = std::sqrt(ss / (count - 1)) / std::sqrt(static_cast<double>(count));
  return out;
}

bool parse_bool_field(const std::string& field, const std::string& context) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw DataError(context + ": expected 0 or 1, got '" + field + "'");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, Scenario scenario, Eigen::Index n,
                         Eigen::Index block_size, Method method, int trial) {
  return mix_seed(base_seed, {static_cast<std::uint64_t>(scenario),
                              static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(block_size),
                              static_cast<std::uint64_t>(method),
                              static_cast<std::uint64_t>(trial)});
}

TrialSeeds trial_seeds(std::uint64_t trial_seed_value) {
  return TrialSeeds{mix_seed(trial_seed_value, 1), mix_seed(trial_seed_value, 2)};
}

TrialRecord run_trial(const ExperimentGrid& grid, Scenario scenario, Eigen::Index n,
                      Eigen::Index block_size, Method method, int trial) {
  TrialRecord rec;
  rec.scenario = scenario;
  rec.n = n;
  rec.block_size = block_size;
  rec.method = method;
  rec.trial = trial;
  rec.seed = trial_seed(grid.base_seed, scenario, n, block_size, method, trial);
  try {
    const TrialSeeds seeds = trial_seeds(rec.seed);
    const Dataset data = make_dataset(scenario, n, seeds.dataset);
    PipelineConfig cfg;
    cfg.k = grid.k;
    cfg.block_size = block_size;
    cfg.alpha = grid.alpha;
    cfg.shrinkage = grid.shrinkage;
    cfg.method = method;
    cfg.seed = seeds.pipeline;
    const InferenceReport report = run_inference(data, cfg);
    const RateSummary rates = evaluate_report(report, ground_truth(scenario));
    rec.tpr = rates.tpr;
    rec.fpr = rates.fpr;
  } catch (const std::exception& error) {
    rec.failed = true;
    rec.error = error.what();
  }
  return rec;
}

CurvePoint aggregate_cell(const std::vector<TrialRecord>& cell) {
  if (cell.empty()) throw DataError("aggregate_cell: empty cell");
  CurvePoint point;
  point.scenario = cell.front().scenario;
  point.n = cell.front().n;
  point.block_size = cell.front().block_size;
  point.method = cell.front().method;
  point.trials = static_cast<int>(cell.size());
  for (const TrialRecord& rec : cell) {
    if (key_of(rec) != key_of(cell.front())) {
      throw DataError("aggregate_cell: records from different cells");
    }
    if (rec.failed) ++point.failures;
  }
  const MeanSe tpr = mean_and_se(cell, [](const TrialRecord& r) { return r.tpr; });
  const MeanSe fpr = mean_and_se(cell, [](const TrialRecord& r) { return r.fpr; });
  point.mean_tpr = tpr.mean;
  point.se_tpr = tpr.se;
  point.mean_fpr = fpr.mean;
  point.se_fpr = fpr.se;
  point.flagged = 10 * point.failures > point.trials;
  return point;
}

GridResult run_grid(const ExperimentGrid& grid, const std::filesystem::path& out_dir) {
  validate_grid(grid);
  const bool persist = !out_dir.empty();
  std::map<CellKey, std::map<int, TrialRecord>> persisted;
  std::filesystem::path trials_path;
  if (persist) {
    std::filesystem::create_directories(out_dir);
    trials_path = out_dir / "trials.csv";
    if (std::filesystem::exists(trials_path)) {
      for (const TrialRecord& rec : read_trials_csv(trials_path)) {
        persisted[key_of(rec)].emplace(rec.trial, rec);
      }
    }
  }

  GridResult result;
  for (Scenario scenario : grid.scenarios) {
    for (Eigen::Index n : grid.sample_sizes) {
      for (Eigen::Index block_size : grid.block_sizes) {
        for (Method method : grid.methods) {
          const int cell_trials =
              scenario == Scenario::Null ? grid.null_trials : grid.trials;
          std::vector<TrialRecord> cell(static_cast<std::size_t>(cell_trials));

          bool reused = false;
          const auto found = persisted.find(CellKey{scenario, n, block_size, method});
          if (found != persisted.end() &&
              static_cast<int>(found->second.size()) == cell_trials) {
            reused = true;
            for (int t = 0; t < cell_trials; ++t) {
              const auto rec = found->second.find(t);
              if (rec == found->second.end() ||
                  rec->second.seed !=
                      trial_seed(grid.base_seed, scenario, n, block_size, method, t)) {
                reused = false;
                break;
              }
              cell[static_cast<std::size_t>(t)] = rec->second;
            }
          }
          if (!reused) {
            parallel_for(grid.threads, cell_trials, [&](int t) {
              cell[static_cast<std::size_t>(t)] =
                  run_trial(grid, scenario, n, block_size, method, t);
            });
          }

          result.trials.insert(result.trials.end(), cell.begin(), cell.end());
          result.curves.push_back(aggregate_cell(cell));
          if (persist && !reused) write_trials_csv(trials_path, result.trials);
        }
      }
    }
  }
  if (persist) {
    write_trials_csv(trials_path, result.trials);
    write_curves_csv(out_dir / "curves.csv", result.curves);
  }
  return result;
}

void write_trials_csv(const std::filesystem::path& path,
                      const std::vector<TrialRecord>& records) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot open '" + tmp.string() + "' for writing");
    out << "scenario,n,block_size,method,trial,seed,tpr,fpr,failed,error\n";
    for (const TrialRecord& rec : records) {
      out << scenario_name(rec.scenario) << ',' << rec.n << ',' << rec.block_size << ','
          << method_name(rec.method) << ',' << rec.trial << ',' << rec.seed << ','
          << format_g17(rec.tpr) << ',' << format_g17(rec.fpr) << ',' << (rec.failed ? 1 : 0)
          << ',' << csv_escape(rec.error) << '\n';
    }
    if (!out) throw DataError("failed while writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  const std::vector<std::vector<std::string>> rows = parse_csv(in);
  if (rows.empty() || rows.front() !=
                          std::vector<std::string>{"scenario", "n", "block_size", "method",
                                                   "trial", "seed", "tpr", "fpr", "failed",
                                                   "error"}) {
    throw DataError("'" + path.string() + "' is not a trials file");
  }
  std::vector<TrialRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& cells = rows[r];
    const std::string context = "'" + path.string() + "' row " + std::to_string(r + 1);
    if (cells.size() != 10) throw DataError(context + ": expected 10 cells");
    TrialRecord rec;
    rec.scenario = parse_scenario(cells[0]);
    rec.n = static_cast<Eigen::Index>(std::stoll(cells[1]));
    rec.block_size = static_cast<Eigen::Index>(std::stoll(cells[2]));
    rec.method = parse_method(cells[3]);
    rec.trial = std::stoi(cells[4]);
    rec.seed = std::stoull(cells[5]);
    rec.tpr = parse_double_field(cells[6], context);
    rec.fpr = parse_double_field(cells[7], context);
    rec.failed = parse_bool_field(cells[8], context);
    rec.error = cells[9];
    records.push_back(std::move(rec));
  }
  return records;
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curves) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << "scenario,n,block_size,method,trials,failures,mean_tpr,se_tpr,mean_fpr,se_fpr,"
         "flagged\n";
  for (const CurvePoint& point : curves) {
    out << scenario_name(point.scenario) << ',' << point.n << ',' << point.block_size << ','
        << method_name(point.method) << ',' << point.trials << ',' << point.failures << ','
        << format_g17(point.mean_tpr) << ',' << format_g17(point.se_tpr) << ','
        << format_g17(point.mean_fpr) << ',' << format_g17(point.se_fpr) << ','
        << (point.flagged ? 1 : 0) << '\n';
  }
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

void write_figure_csvs(const std::filesystem::path& out_dir,
                       const std::vector<CurvePoint>& curves) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "fig_fpr_null.csv", std::ios::binary);
    out << "method,n,block_size,fpr,se\n";
    for (const CurvePoint& point : curves) {
      if (point.scenario != Scenario::Null) continue;
      out << method_name(point.method) << ',' << point.n << ',' << point.block_size << ','
          << format_g17(point.mean_fpr) << ',' << format_g17(point.se_fpr) << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "fig_tpr.csv", std::ios::binary);
    out << "scenario,method,n,block_size,tpr,se\n";
    for (const CurvePoint& point : curves) {
      if (point.scenario == Scenario::Null) continue;
      out << scenario_name(point.scenario) << ',' << method_name(point.method) << ','
          << point.n << ',' << point.block_size << ',' << format_g17(point.mean_tpr) << ','
          << format_g17(point.se_tpr) << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "fig_b_sweep.csv", std::ios::binary);
    out << "scenario,method,block_size,n,tpr,se_tpr,fpr,se_fpr\n";
    for (const CurvePoint& point : curves) {
      out << scenario_name(point.scenario) << ',' << method_name(point.method) << ','
          << point.block_size << ',' << point.n << ',' << format_g17(point.mean_tpr) << ','
          << format_g17(point.se_tpr) << ',' << format_g17(point.mean_fpr) << ','
          << format_g17(point.se_fpr) << '\n';
    }
  }
}

}  // namespace hsicinf
