#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ostd/config.hpp"
#include "ostd/environments.hpp"
#include "ostd/metrics.hpp"

namespace ostd {

// Per-trajectory outcome. Regret and stability are filled for os_gptd runs
// (where the single-posterior analysis applies); the weight path for
// ensemble runs.
struct TrajectoryRunResult {
  std::vector<SlotRecord> records;
  bool terminated = false;
  std::optional<RegretReport> regret;
  std::optional<StabilityReport> stability;
  // Monitored online-vs-hindsight long-term prediction error ratio
  // (os_gptd runs only).
  std::optional<double> prediction_error_ratio;
  Eigen::MatrixXd weight_path;  // slots x M (ensemble only, else 0x0)
};

struct ExperimentResult {
  ErrorCurves curves;
  std::vector<TrajectoryRunResult> trajectories;
  // Per slot: 1 when the tail-zero truncation bias of the empirical values
  // is negligible for every trajectory still alive at that slot.
  std::vector<unsigned char> truncation_safe;
  Eigen::MatrixXd mean_weights;  // slots x M for ensemble runs, else 0x0
};

// Environment trajectory for one run index; its seed is derived from
// (master_seed, index) so adding trajectories never reshuffles earlier ones.
Trajectory make_trajectory(const ExperimentConfig& cfg, long index);

// One slot-by-slot online run: predict at s_t strictly before consuming
// (r_t, s_{t+1}). Throws NumericError (with the trajectory/slot) on any
// invariant violation.
TrajectoryRunResult run_single_trajectory(const ExperimentConfig& cfg,
                                          const Trajectory& traj, long index);

// Full experiment: all trajectories (parallel up to cfg.workers, reduced in
// index order), aggregated curves, and CSV artifacts in cfg.output_dir when
// `write_csv` is set (curves.csv always; stability.csv for os_gptd;
// weights.csv for os_egptd).
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool write_csv = true);

struct RegretSweepRow {
  long horizon = 0;
  double regret = 0.0;
  double bound = 0.0;
  double max_bellman_residual = 0.0;
  double theta_star_sq_norm = 0.0;
  double online_loss = 0.0;
  double hindsight_loss = 0.0;
};

// One row per horizon, fields averaged over the config's trajectories
// (max_bellman_residual takes the max). Writes regret.csv when requested.
// Requires estimator=os_gptd.
std::vector<RegretSweepRow> run_regret_sweep(const ExperimentConfig& cfg,
                                             const std::vector<long>& horizons,
                                             bool write_csv = true);

struct BenchRow {
  EstimatorKind method;
  long t = 0;  // slot bucket end (online) or prefix length (batch oracle)
  double median_us = 0.0;
};

// Median wall-clock per-slot update cost. Online estimators report medians
// over 100-slot buckets; the batch oracle reports single-prediction medians
// at doubling prefix lengths. Writes timing.csv when requested.
std::vector<BenchRow> runtime_bench(const ExperimentConfig& cfg,
                                    const std::vector<EstimatorKind>& methods,
                                    bool write_csv = true);

}  // namespace ostd
