#include "hsicinf/errors.hpp"
#include "hsicinf/harness.hpp"
#include "hsicinf/io.hpp"
#include "hsicinf/kernel.hpp"
#include "hsicinf/pipeline.hpp"
#include "hsicinf/synthdata.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using hsicinf::Dataset;
using hsicinf::ExperimentGrid;
using hsicinf::GaussianKernel;
using hsicinf::IngestSpec;
using hsicinf::PipelineConfig;

std::string env_name(std::string flag) {
  for (char& c : flag) {
    if (c == '-') c = '_';
    else c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return "HSICINF_" + flag;
}

/// Adds the option and wires up its environment-variable override
/// (HSICINF_<FLAG> with dashes as underscores).
template <typename App, typename... Args>
CLI::Option* add_opt(App& app, const std::string& flag, Args&&... args) {
  CLI::Option* opt = app.add_option(flag, std::forward<Args>(args)...);
  opt->envname(env_name(flag.substr(2)));
  return opt;
}

struct InferArgs {
  std::string data_path;
  std::vector<std::string> response_columns;
  int classes = -1;  // -1: regression; 0: classification, infer L; >0: classification
  std::vector<std::string> drop_columns;
  std::string method = "hsicInf";
  std::string tau_y;  // empty: per-response default; "median" or a number
  double tau_x = 1.0;
  std::string out_dir = ".";
  PipelineConfig cfg;
};

int run_infer(const InferArgs& args) {
  IngestSpec spec;
  spec.response_columns = args.response_columns;
  if (args.classes >= 0) {
    spec.classification = true;
    spec.num_classes = args.classes;
  }
  spec.drop_columns = args.drop_columns;
  const Dataset data = hsicinf::ingest_csv(args.data_path, spec);

  PipelineConfig cfg = args.cfg;
  cfg.method = hsicinf::parse_method(args.method);
  cfg.feature_kernel = GaussianKernel{args.tau_x};
  if (!args.tau_y.empty() && !spec.classification) {
    if (args.tau_y == "median") {
      cfg.response_kernel =
          GaussianKernel{hsicinf::median_heuristic(hsicinf::response_points(data.y))};
    } else {
      cfg.response_kernel = GaussianKernel{
          hsicinf::parse_double_field(args.tau_y, "--tau-y")};
    }
  }

  const hsicinf::InferenceReport report = hsicinf::run_inference(data, cfg);
  const std::filesystem::path out_dir(args.out_dir);
  std::filesystem::create_directories(out_dir);
  hsicinf::write_report_csv(out_dir / "report.csv", report);
  hsicinf::write_report_json(out_dir / "report.json", report);
  const std::string table = hsicinf::format_report_table(report);
  {
    std::ofstream out(out_dir / "report.txt", std::ios::binary);
    out << table;
  }
  std::cout << table;
  return 0;
}

struct SimulateArgs {
  std::vector<std::string> scenarios;
  std::vector<std::string> methods = {"hsicInf", "hsicNaive", "split"};
  std::string out_dir = ".";
  ExperimentGrid grid;
};

int run_simulate(const SimulateArgs& args) {
  ExperimentGrid grid = args.grid;
  grid.scenarios.clear();
  for (const std::string& name : args.scenarios) {
    grid.scenarios.push_back(hsicinf::parse_scenario(name));
  }
  grid.methods.clear();
  for (const std::string& name : args.methods) {
    grid.methods.push_back(hsicinf::parse_method(name));
  }

  const hsicinf::GridResult result = hsicinf::run_grid(grid, args.out_dir);
  hsicinf::write_figure_csvs(args.out_dir, result.curves);

  int flagged = 0;
  for (const hsicinf::CurvePoint& point : result.curves) flagged += point.flagged ? 1 : 0;
  std::cout << result.curves.size() << " cells, " << result.trials.size() << " trials ("
            << flagged << " cells flagged for >10% failures)\n"
            << "wrote trials.csv, curves.csv, fig_fpr_null.csv, fig_tpr.csv, "
               "fig_b_sweep.csv under "
            << args.out_dir << '\n';
  return 0;
}

struct GenArgs {
  std::string scenario;
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  std::string out = "dataset.csv";
};

int run_gen(const GenArgs& args) {
  const Dataset data =
      hsicinf::make_dataset(hsicinf::parse_scenario(args.scenario), args.n, args.seed);
  hsicinf::write_dataset_csv(args.out, data);
  std::cout << "wrote " << data.x.rows() << " samples x " << data.x.cols() << " features to "
            << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-based feature screening with valid post-selection p-values"};
  app.require_subcommand(1);

  InferArgs infer;
  CLI::App* cmd_infer = app.add_subcommand(
      "infer", "Select top-k features from a CSV and test them");
  add_opt(*cmd_infer, "--data", infer.data_path, "input CSV with a header row")->required();
  add_opt(*cmd_infer, "--response", infer.response_columns,
          "response column name(s); several names mean a multivariate response")
      ->required()
      ->delimiter(',');
  add_opt(*cmd_infer, "--classes", infer.classes,
          "treat the response as class labels 1..L (0 infers L from the data)");
  add_opt(*cmd_infer, "--drop", infer.drop_columns, "columns to ignore")->delimiter(',');
  add_opt(*cmd_infer, "--k", infer.cfg.k, "number of features to select");
  add_opt(*cmd_infer, "--block-size", infer.cfg.block_size, "samples per block (>= 4)");
  add_opt(*cmd_infer, "--alpha", infer.cfg.alpha, "significance level");
  add_opt(*cmd_infer, "--shrinkage", infer.cfg.shrinkage,
          "covariance shrinkage weight in [0,1)");
  add_opt(*cmd_infer, "--method", infer.method, "hsicInf | hsicNaive | split");
  add_opt(*cmd_infer, "--seed", infer.cfg.seed, "seed for the split shuffle");
  add_opt(*cmd_infer, "--tau-x", infer.tau_x, "Gaussian bandwidth on features")
      ->check(CLI::PositiveNumber);
  add_opt(*cmd_infer, "--tau-y", infer.tau_y,
          "Gaussian bandwidth on the response: a number or 'median'");
  add_opt(*cmd_infer, "--out-dir", infer.out_dir, "where report.{csv,json,txt} go");

  SimulateArgs simulate;
  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "Monte-Carlo TPR/FPR experiments on synthetic scenarios");
  add_opt(*cmd_simulate, "--scenario", simulate.scenarios,
          "null | linear | additive | nonadditive | multivariate | threeclass")
      ->required()
      ->delimiter(',');
  add_opt(*cmd_simulate, "--methods", simulate.methods, "methods to compare")->delimiter(',');
  add_opt(*cmd_simulate, "--n", simulate.grid.sample_sizes, "sample sizes")->delimiter(',');
  add_opt(*cmd_simulate, "--block-sizes", simulate.grid.block_sizes, "block sizes to sweep")
      ->delimiter(',');
  add_opt(*cmd_simulate, "--trials", simulate.grid.trials, "trials per cell");
  add_opt(*cmd_simulate, "--null-trials", simulate.grid.null_trials,
          "trials per null-scenario cell");
  add_opt(*cmd_simulate, "--k", simulate.grid.k, "number of features to select");
  add_opt(*cmd_simulate, "--alpha", simulate.grid.alpha, "significance level");
  add_opt(*cmd_simulate, "--shrinkage", simulate.grid.shrinkage,
          "covariance shrinkage weight in [0,1)");
  add_opt(*cmd_simulate, "--seed", simulate.grid.base_seed, "base seed of the grid");
  add_opt(*cmd_simulate, "--threads", simulate.grid.threads, "worker threads for trials")
      ->check(CLI::PositiveNumber);
  add_opt(*cmd_simulate, "--out-dir", simulate.out_dir, "where the CSV outputs go");

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Write one synthetic dataset as CSV");
  add_opt(*cmd_gen, "--scenario", gen.scenario, "scenario name")->required();
  add_opt(*cmd_gen, "--n", gen.n, "sample count")->required()->check(CLI::PositiveNumber);
  add_opt(*cmd_gen, "--seed", gen.seed, "dataset seed");
  add_opt(*cmd_gen, "--out", gen.out, "output CSV path");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(cmd_infer)) return run_infer(infer);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(simulate);
    return run_gen(gen);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hsicinf::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hsicinf::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
