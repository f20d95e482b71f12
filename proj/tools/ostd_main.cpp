// Benchmark CLI: runs (environment x estimator) experiments from a config
// file, regret sweeps, and per-slot runtime measurements. Exit codes:
// 0 ok, 2 config error, 3 numeric failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ostd/config.hpp"
#include "ostd/errors.hpp"
#include "ostd/runner.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
};

ostd::ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  ostd::ExperimentConfig cfg = ostd::load_config_file(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.workers > 0) cfg.workers = opts.workers;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("config", opts.config_path, "experiment config file")
      ->required();
  cmd->add_option("--out-dir", opts.out_dir, "override output directory");
  cmd->add_option("--seed", opts.seed, "override master seed");
  cmd->add_option("--workers", opts.workers, "override worker count");
}

void print_run_summary(const ostd::ExperimentConfig& cfg,
                       const ostd::ExperimentResult& result) {
  const std::size_t last = result.curves.count.size() - 1;
  std::printf("environment      : %s\n", ostd::to_string(cfg.environment).c_str());
  std::printf("estimator        : %s\n", ostd::to_string(cfg.estimator).c_str());
  std::printf("trajectories     : %ld x horizon %ld\n", cfg.num_trajectories,
              cfg.horizon);
  std::printf("final slot       : %zu (%ld trajectories alive)\n", last + 1,
              result.curves.count[last]);
  std::printf("avg pred error   : %.6f\n",
              result.curves.avg_prediction_error[last]);
  std::printf("avg bellman error: %.6f\n", result.curves.avg_bellman_error[last]);
  if (cfg.estimator == ostd::EstimatorKind::kOsGptd) {
    double max_regret = 0.0, min_slack = 1e300;
    for (const auto& run : result.trajectories) {
      if (!run.regret) continue;
      max_regret = std::max(max_regret, run.regret->regret);
      min_slack = std::min(min_slack, run.regret->bound - run.regret->regret);
    }
    std::printf("max regret       : %.6g (min bound slack %.6g)\n", max_regret,
                min_slack);
  }
  std::printf("outputs          : %s/curves.csv", cfg.output_dir.c_str());
  if (cfg.estimator == ostd::EstimatorKind::kOsGptd)
    std::printf(" stability.csv");
  if (cfg.estimator == ostd::EstimatorKind::kOsEgptd)
    std::printf(" weights.csv");
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online GP temporal-difference benchmark harness"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd, run_opts);

  CommonOptions regret_opts;
  std::vector<long> horizons;
  CLI::App* regret_cmd =
      app.add_subcommand("regret", "regret sweep over horizons");
  add_common(regret_cmd, regret_opts);
  regret_cmd
      ->add_option("--horizons", horizons, "ascending horizon list")
      ->required();

  CommonOptions bench_opts;
  std::vector<std::string> method_names = {"os_gptd", "os_egptd",
                                           "batch_oracle"};
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "per-slot runtime measurements");
  add_common(bench_cmd, bench_opts);
  bench_cmd->add_option("--methods", method_names, "methods to time");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ostd::ExperimentConfig cfg = load_with_overrides(run_opts);
      const ostd::ExperimentResult result = ostd::run_experiment(cfg);
      print_run_summary(cfg, result);
    } else if (regret_cmd->parsed()) {
      const ostd::ExperimentConfig cfg = load_with_overrides(regret_opts);
      const auto rows = ostd::run_regret_sweep(cfg, horizons);
      std::printf("T,R1,bound,Be\n");
      for (const auto& row : rows)
        std::printf("%ld,%.6g,%.6g,%.6g\n", row.horizon, row.regret, row.bound,
                    row.max_bellman_residual);
      std::printf("wrote %s/regret.csv\n", cfg.output_dir.c_str());
    } else if (bench_cmd->parsed()) {
      const ostd::ExperimentConfig cfg = load_with_overrides(bench_opts);
      std::vector<ostd::EstimatorKind> methods;
      for (const std::string& name : method_names) {
        if (name == "os_gptd")
          methods.push_back(ostd::EstimatorKind::kOsGptd);
        else if (name == "os_egptd")
          methods.push_back(ostd::EstimatorKind::kOsEgptd);
        else if (name == "batch_oracle")
          methods.push_back(ostd::EstimatorKind::kBatchOracle);
        else
          throw ostd::ConfigError("unknown method: " + name);
      }
      const auto rows = ostd::runtime_bench(cfg, methods);
      std::printf("method,t,median_update_us\n");
      for (const auto& row : rows)
        std::printf("%s,%ld,%.3f\n", ostd::to_string(row.method).c_str(), row.t,
                    row.median_us);
      std::printf("wrote %s/timing.csv\n", cfg.output_dir.c_str());
    }
  } catch (const ostd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ostd::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s (trajectory %ld, slot %ld)\n",
                 e.what(), e.trajectory(), e.slot());
    return 3;
  } catch (const ostd::IllConditionedError& e) {
    std::fprintf(stderr, "numeric error: %s (condition estimate %.3g)\n",
                 e.what(), e.condition_estimate());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
