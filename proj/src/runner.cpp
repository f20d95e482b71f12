#include "ostd/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

#include "ostd/batch_gptd.hpp"
#include "ostd/ensemble.hpp"
#include "ostd/errors.hpp"
#include "ostd/io.hpp"
#include "ostd/posterior.hpp"
#include "ostd/random_features.hpp"
#include "ostd/rng.hpp"

namespace ostd {

namespace {

class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual ValueEstimate predict(const Eigen::VectorXd& s) const = 0;
  virtual void observe(const Eigen::VectorXd& s_t, double reward,
                       const Eigen::VectorXd& s_next) = 0;
};

class SingleGptdEstimator : public Estimator {
 public:
  SingleGptdEstimator(const KernelSpec& spec, int num_features, int state_dim,
                      double noise_var, double gamma, std::uint64_t seed)
      : map_(RFMap::sample(
            spec, num_features, state_dim,
            derive_stream(seed, StreamPurpose::kRfFrequencies, 0))),
        posterior_(spec.magnitude, num_features, noise_var),
        gamma_(gamma) {}

  ValueEstimate predict(const Eigen::VectorXd& s) const override {
    return posterior_.predict(map_.feature_map(s));
  }

  void observe(const Eigen::VectorXd& s_t, double reward,
               const Eigen::VectorXd& s_next) override {
    TransitionFeatures tf;
    tf.h = transition_vector(map_.feature_map(s_t), map_.feature_map(s_next),
                             gamma_);
    tf.reward = reward;
    posterior_.update(tf);
  }

  const RFMap& map() const { return map_; }
  const PosteriorState& posterior() const { return posterior_; }

 private:
  RFMap map_;
  PosteriorState posterior_;
  double gamma_;
};

class EnsembleEstimator : public Estimator {
 public:
  EnsembleEstimator(const std::vector<KernelSpec>& dictionary,
                    int num_features, int state_dim, double noise_var,
                    double gamma, std::uint64_t seed)
      : state_(EnsembleState::init(dictionary, num_features, state_dim,
                                   noise_var, seed)),
        gamma_(gamma) {}

  ValueEstimate predict(const Eigen::VectorXd& s) const override {
    const EnsemblePrediction p = state_.predict(s);
    return ValueEstimate{p.mean, p.variance};
  }

  void observe(const Eigen::VectorXd& s_t, double reward,
               const Eigen::VectorXd& s_next) override {
    state_.step(s_t, reward, s_next, gamma_);
  }

  const EnsembleState& state() const { return state_; }

 private:
  EnsembleState state_;
  double gamma_;
};

class BatchOracleEstimator : public Estimator {
 public:
  BatchOracleEstimator(const KernelSpec& spec, double noise_var, double gamma,
                       long max_transitions)
      : spec_(spec),
        noise_var_(noise_var),
        gamma_(gamma),
        max_transitions_(max_transitions) {}

  ValueEstimate predict(const Eigen::VectorXd& s) const override {
    TrajectoryBatch batch;
    const long t = static_cast<long>(rewards_.size());
    batch.states.resize(t + 1, s.size());
    if (t == 0) {
      // Prior prediction; no states observed yet.
      batch.states.row(0) = s.transpose();
    } else {
      for (long i = 0; i <= t; ++i) batch.states.row(i) = states_[i].transpose();
    }
    batch.rewards = t == 0 ? Eigen::VectorXd()
                           : Eigen::Map<const Eigen::VectorXd>(
                                 rewards_.data(), t);
    batch.discount = gamma_;
    return batch_predict(spec_, batch, s, noise_var_, max_transitions_);
  }

  void observe(const Eigen::VectorXd& s_t, double reward,
               const Eigen::VectorXd& s_next) override {
    if (states_.empty()) states_.push_back(s_t);
    states_.push_back(s_next);
    rewards_.push_back(reward);
  }

 private:
  KernelSpec spec_;
  double noise_var_;
  double gamma_;
  long max_transitions_;
  std::vector<Eigen::VectorXd> states_;
  std::vector<double> rewards_;
};

struct EstimatorBundle {
  std::unique_ptr<Estimator> estimator;
  SingleGptdEstimator* single = nullptr;
  EnsembleEstimator* ensemble = nullptr;
};

EstimatorBundle make_estimator(const ExperimentConfig& cfg, int state_dim,
                               std::uint64_t seed) {
  EstimatorBundle bundle;
  switch (cfg.estimator) {
    case EstimatorKind::kOsGptd: {
      auto est = std::make_unique<SingleGptdEstimator>(
          cfg.dictionary.front(), cfg.num_features, state_dim, cfg.noise_var,
          cfg.gamma, seed);
      bundle.single = est.get();
      bundle.estimator = std::move(est);
      break;
    }
    case EstimatorKind::kOsEgptd: {
      auto est = std::make_unique<EnsembleEstimator>(
          cfg.dictionary, cfg.num_features, state_dim, cfg.noise_var,
          cfg.gamma, seed);
      bundle.ensemble = est.get();
      bundle.estimator = std::move(est);
      break;
    }
    case EstimatorKind::kBatchOracle: {
      bundle.estimator = std::make_unique<BatchOracleEstimator>(
          cfg.dictionary.front(), cfg.noise_var, cfg.gamma,
          cfg.oracle_max_transitions);
      break;
    }
  }
  return bundle;
}

// Slots near the end of an unterminated trajectory whose empirical values
// carry truncation bias above 1e-3 of the reward scale.
long truncation_cut(double gamma) {
  if (gamma <= 0.0) return 0;
  return static_cast<long>(std::ceil(std::log(1e-3) / std::log(gamma)));
}

}  // namespace

Trajectory make_trajectory(const ExperimentConfig& cfg, long index) {
  const std::uint64_t traj_seed = derive_stream(
      cfg.master_seed, StreamPurpose::kTrajectorySeed,
      static_cast<std::uint64_t>(index));
  if (cfg.environment == EnvironmentKind::kRandomWalk) {
    RandomWalkConfig env = cfg.random_walk;
    env.discount = cfg.gamma;
    env.seed = traj_seed;
    return gen_random_walk(env, cfg.horizon);
  }
  PuddleWorldConfig env = cfg.puddle_world;
  env.discount = cfg.gamma;
  env.seed = traj_seed;
  return gen_puddle_world(env, cfg.horizon);
}

TrajectoryRunResult run_single_trajectory(const ExperimentConfig& cfg,
                                          const Trajectory& traj, long index) {
  const std::uint64_t traj_seed = derive_stream(
      cfg.master_seed, StreamPurpose::kTrajectorySeed,
      static_cast<std::uint64_t>(index));
  const int state_dim = static_cast<int>(traj.states.cols());
  EstimatorBundle bundle = make_estimator(cfg, state_dim, traj_seed);
  Estimator& est = *bundle.estimator;

  const long slots = traj.num_slots();
  TrajectoryRunResult result;
  result.terminated = traj.terminated;
  result.records.reserve(slots);

  std::vector<double> predictions(slots), residuals(slots), post_values(slots);
  const bool track_features = bundle.single != nullptr;
  Eigen::MatrixXd h_rows, phi_rows;
  double trace_initial = 0.0;
  if (track_features) {
    h_rows.resize(slots, 2 * cfg.num_features);
    phi_rows.resize(slots, 2 * cfg.num_features);
    trace_initial = bundle.single->posterior().covariance().trace();
  }
  if (bundle.ensemble != nullptr)
    result.weight_path.resize(slots, bundle.ensemble->state().num_experts());

  for (long t = 0; t < slots; ++t) {
    const Eigen::VectorXd s_t = traj.states.row(t);
    const Eigen::VectorXd s_next = traj.states.row(t + 1);
    const double reward = traj.rewards[t];

    // Predictive record at slot t, strictly before the estimator consumes
    // (r_t, s_{t+1}).
    const ValueEstimate pred = est.predict(s_t);
    const double next_mean = est.predict(s_next).mean;
    const double residual = reward - (pred.mean - cfg.gamma * next_mean);

    est.observe(s_t, reward, s_next);
    const double post_value = est.predict(s_t).mean;

    SlotRecord record;
    record.slot = t + 1;
    record.predicted_value = pred.mean;
    record.predicted_variance = pred.variance;
    record.reward = reward;
    record.bellman_error = residual * residual;
    result.records.push_back(record);

    predictions[t] = pred.mean;
    residuals[t] = residual;
    post_values[t] = post_value;
    if (track_features) {
      const Eigen::VectorXd phi_now = bundle.single->map().feature_map(s_t);
      h_rows.row(t) =
          transition_vector(phi_now, bundle.single->map().feature_map(s_next),
                            cfg.gamma)
              .transpose();
      phi_rows.row(t) = phi_now.transpose();
    }
    if (bundle.ensemble != nullptr)
      result.weight_path.row(t) = bundle.ensemble->state().weights().transpose();
  }

  const std::vector<double> rewards(traj.rewards.data(),
                                    traj.rewards.data() + slots);
  const std::vector<double> values = empirical_values(rewards, cfg.gamma);
  std::vector<double> errors(slots);
  for (long t = 0; t < slots; ++t) {
    errors[t] = predictions[t] - values[t];
    result.records[t].prediction_error = errors[t];
  }

  if (track_features) {
    const Eigen::VectorXd reward_vec =
        Eigen::Map<const Eigen::VectorXd>(rewards.data(), slots);
    const double prior_var = cfg.dictionary.front().magnitude;
    try {
      result.regret =
          regret_report(h_rows, reward_vec, residuals, cfg.noise_var,
                        prior_var, cfg.num_features, cfg.gamma);
    } catch (const NumericError& e) {
      throw NumericError(e.what(), index, e.slot());
    }
    const StabilityReport stability = online_stability(
        post_values, predictions, result.regret->max_bellman_residual,
        cfg.noise_var, trace_initial,
        bundle.single->posterior().covariance().trace());
    if (stability.mean_sq_diff > stability.cap)
      throw NumericError("online stability cap violated", index, slots);
    result.stability = stability;

    const Eigen::VectorXd theta_star =
        hindsight_theta(h_rows, reward_vec, cfg.noise_var, prior_var);
    const Eigen::VectorXd benchmark_values = phi_rows * theta_star;
    std::vector<double> benchmark_errors(slots);
    for (long t = 0; t < slots; ++t)
      benchmark_errors[t] = benchmark_values[t] - values[t];
    result.prediction_error_ratio =
        prediction_error_ratio(errors, benchmark_errors, cfg.gamma);
  }
  return result;
}

namespace {

void run_all_trajectories(const ExperimentConfig& cfg,
                          std::vector<TrajectoryRunResult>& results) {
  const long n = cfg.num_trajectories;
  results.resize(n);
  if (cfg.workers == 1 || n == 1) {
    for (long i = 0; i < n; ++i)
      results[i] = run_single_trajectory(cfg, make_trajectory(cfg, i), i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errors(n);
  const int worker_count =
      static_cast<int>(std::min<long>(cfg.workers, n));
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) {
    pool.emplace_back([&]() {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          results[i] = run_single_trajectory(cfg, make_trajectory(cfg, i), i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (long i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path path =
      std::filesystem::path(cfg.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  return out;
}

void write_curves_csv(const ExperimentConfig& cfg,
                      const ExperimentResult& result) {
  std::ofstream out = open_output(cfg, "curves.csv");
  out << "# schema=1\n";
  out << "slot,avg_pred_error,avg_bellman_error,count,truncation_safe\n";
  for (std::size_t t = 0; t < result.curves.count.size(); ++t) {
    out << (t + 1) << ',' << csv_double(result.curves.avg_prediction_error[t])
        << ',' << csv_double(result.curves.avg_bellman_error[t]) << ','
        << result.curves.count[t] << ','
        << static_cast<int>(result.truncation_safe[t]) << '\n';
  }
}

void write_stability_csv(const ExperimentConfig& cfg,
                         const ExperimentResult& result) {
  std::ofstream out = open_output(cfg, "stability.csv");
  out << "# schema=1\n";
  out << "trajectory,slots,mean_sq_diff,cap,Be,pred_error_ratio\n";
  for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
    const TrajectoryRunResult& run = result.trajectories[i];
    if (!run.stability) continue;
    out << i << ',' << run.records.size() << ','
        << csv_double(run.stability->mean_sq_diff) << ','
        << csv_double(run.stability->cap) << ','
        << csv_double(run.regret->max_bellman_residual) << ','
        << csv_double(run.prediction_error_ratio.value_or(0.0)) << '\n';
  }
}

void write_weights_csv(const ExperimentConfig& cfg,
                       const ExperimentResult& result) {
  std::ofstream out = open_output(cfg, "weights.csv");
  out << "# schema=1\n";
  out << "# experts=";
  for (std::size_t m = 0; m < cfg.dictionary.size(); ++m) {
    if (m > 0) out << ',';
    out << to_string(cfg.dictionary[m].family) << ':'
        << csv_double(cfg.dictionary[m].lengthscale);
  }
  out << "\nslot,count";
  for (std::size_t m = 0; m < cfg.dictionary.size(); ++m) out << ",w" << (m + 1);
  out << '\n';
  for (long t = 0; t < result.mean_weights.rows(); ++t) {
    out << (t + 1) << ',' << result.curves.count[t];
    for (long m = 0; m < result.mean_weights.cols(); ++m)
      out << ',' << csv_double(result.mean_weights(t, m));
    out << '\n';
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_csv) {
  cfg.validate();
  if (cfg.estimator == EstimatorKind::kBatchOracle &&
      cfg.horizon > cfg.oracle_max_transitions)
    throw ConfigError(
        "batch_oracle horizon exceeds oracle_max_transitions; raise the cap "
        "or shorten the run");

  ExperimentResult result;
  run_all_trajectories(cfg, result.trajectories);

  std::vector<std::vector<SlotRecord>> all_records;
  all_records.reserve(result.trajectories.size());
  for (const TrajectoryRunResult& run : result.trajectories)
    all_records.push_back(run.records);
  result.curves = avg_error_curves(all_records);

  const std::size_t max_len = result.curves.count.size();
  const long cut = truncation_cut(cfg.gamma);
  result.truncation_safe.assign(max_len, 1);
  for (const TrajectoryRunResult& run : result.trajectories) {
    if (run.terminated) continue;  // exact empirical values, no bias
    const long safe_until = static_cast<long>(run.records.size()) - cut;
    for (long t = std::max<long>(safe_until, 0);
         t < static_cast<long>(run.records.size()); ++t)
      result.truncation_safe[t] = 0;
  }

  if (cfg.estimator == EstimatorKind::kOsEgptd) {
    const long m_count = static_cast<long>(cfg.dictionary.size());
    result.mean_weights = Eigen::MatrixXd::Zero(max_len, m_count);
    for (const TrajectoryRunResult& run : result.trajectories)
      for (long t = 0; t < run.weight_path.rows(); ++t)
        result.mean_weights.row(t) += run.weight_path.row(t);
    for (std::size_t t = 0; t < max_len; ++t)
      result.mean_weights.row(t) /= static_cast<double>(result.curves.count[t]);
  }

  if (write_csv) {
    write_curves_csv(cfg, result);
    if (cfg.estimator == EstimatorKind::kOsGptd)
      write_stability_csv(cfg, result);
    if (cfg.estimator == EstimatorKind::kOsEgptd)
      write_weights_csv(cfg, result);
  }
  return result;
}

std::vector<RegretSweepRow> run_regret_sweep(const ExperimentConfig& cfg,
                                             const std::vector<long>& horizons,
                                             bool write_csv) {
  cfg.validate();
  if (cfg.estimator != EstimatorKind::kOsGptd)
    throw ConfigError("regret sweep requires estimator=os_gptd");
  if (horizons.empty()) throw ConfigError("regret sweep needs horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1) throw ConfigError("horizons must be >= 1");
    if (i > 0 && horizons[i] <= horizons[i - 1])
      throw ConfigError("horizons must be strictly ascending");
  }

  ExperimentConfig run_cfg = cfg;
  run_cfg.horizon = horizons.back();

  std::vector<RegretSweepRow> rows(horizons.size());
  for (std::size_t j = 0; j < horizons.size(); ++j)
    rows[j].horizon = horizons[j];

  for (long i = 0; i < cfg.num_trajectories; ++i) {
    const Trajectory traj = make_trajectory(run_cfg, i);
    const std::uint64_t traj_seed = derive_stream(
        run_cfg.master_seed, StreamPurpose::kTrajectorySeed,
        static_cast<std::uint64_t>(i));
    const int state_dim = static_cast<int>(traj.states.cols());
    SingleGptdEstimator est(run_cfg.dictionary.front(), run_cfg.num_features,
                            state_dim, run_cfg.noise_var, run_cfg.gamma,
                            traj_seed);

    const long slots = traj.num_slots();
    Eigen::MatrixXd h_rows(slots, 2 * run_cfg.num_features);
    std::vector<double> residuals(slots);
    for (long t = 0; t < slots; ++t) {
      const Eigen::VectorXd s_t = traj.states.row(t);
      const Eigen::VectorXd s_next = traj.states.row(t + 1);
      const Eigen::VectorXd h = transition_vector(
          est.map().feature_map(s_t), est.map().feature_map(s_next),
          run_cfg.gamma);
      residuals[t] = traj.rewards[t] - h.dot(est.posterior().mean());
      h_rows.row(t) = h.transpose();
      est.observe(s_t, traj.rewards[t], s_next);
    }

    for (std::size_t j = 0; j < horizons.size(); ++j) {
      const long t_j = std::min(horizons[j], slots);
      RegretReport report;
      try {
        report = regret_report(
            h_rows.topRows(t_j), traj.rewards.head(t_j),
            std::vector<double>(residuals.begin(), residuals.begin() + t_j),
            run_cfg.noise_var, run_cfg.dictionary.front().magnitude,
            run_cfg.num_features, run_cfg.gamma);
      } catch (const NumericError& e) {
        throw NumericError(e.what(), i, e.slot());
      }
      rows[j].regret += report.regret;
      rows[j].bound += report.bound;
      rows[j].theta_star_sq_norm += report.theta_star_sq_norm;
      rows[j].online_loss += report.cumulative_online_loss;
      rows[j].hindsight_loss += report.cumulative_hindsight_loss;
      rows[j].max_bellman_residual = std::max(rows[j].max_bellman_residual,
                                              report.max_bellman_residual);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(cfg.num_trajectories);
  for (RegretSweepRow& row : rows) {
    row.regret *= inv_n;
    row.bound *= inv_n;
    row.theta_star_sq_norm *= inv_n;
    row.online_loss *= inv_n;
    row.hindsight_loss *= inv_n;
  }

  if (write_csv) {
    std::ofstream out = open_output(cfg, "regret.csv");
    out << "# schema=1\n";
    out << "T,R,R1,bound,Be,theta_star_norm,R_over_logT\n";
    for (const RegretSweepRow& row : rows) {
      out << row.horizon << ',' << csv_double(row.regret) << ','
          << csv_double(row.regret) << ',' << csv_double(row.bound) << ','
          << csv_double(row.max_bellman_residual) << ','
          << csv_double(row.theta_star_sq_norm) << ','
          << csv_double(row.regret /
                        std::log(static_cast<double>(row.horizon)))
          << '\n';
    }
  }
  return rows;
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

}  // namespace

std::vector<BenchRow> runtime_bench(const ExperimentConfig& cfg,
                                    const std::vector<EstimatorKind>& methods,
                                    bool write_csv) {
  cfg.validate();
  if (methods.empty()) throw ConfigError("bench needs at least one method");
  using Clock = std::chrono::steady_clock;

  std::vector<BenchRow> rows;
  const long bucket = 100;
  const long traj_count = std::min<long>(cfg.num_trajectories, 3);

  for (EstimatorKind method : methods) {
    if (method == EstimatorKind::kBatchOracle) {
      ExperimentConfig oracle_cfg = cfg;
      oracle_cfg.estimator = EstimatorKind::kBatchOracle;
      const Trajectory traj = make_trajectory(oracle_cfg, 0);
      for (long t : {100L, 200L, 400L, 800L}) {
        if (t > traj.num_slots() || t > cfg.oracle_max_transitions) continue;
        TrajectoryBatch batch;
        batch.states = traj.states.topRows(t + 1);
        batch.rewards = traj.rewards.head(t);
        batch.discount = cfg.gamma;
        const Eigen::VectorXd query = traj.states.row(t);
        std::vector<double> times;
        for (int rep = 0; rep < 3; ++rep) {
          const auto start = Clock::now();
          (void)batch_predict(cfg.dictionary.front(), batch, query,
                              cfg.noise_var, cfg.oracle_max_transitions);
          times.push_back(
              std::chrono::duration<double, std::micro>(Clock::now() - start)
                  .count());
        }
        rows.push_back(BenchRow{method, t, median_of(times)});
      }
      continue;
    }

    ExperimentConfig method_cfg = cfg;
    method_cfg.estimator = method;
    std::vector<std::vector<double>> per_bucket;
    for (long i = 0; i < traj_count; ++i) {
      const Trajectory traj = make_trajectory(method_cfg, i);
      const std::uint64_t traj_seed = derive_stream(
          method_cfg.master_seed, StreamPurpose::kTrajectorySeed,
          static_cast<std::uint64_t>(i));
      EstimatorBundle bundle = make_estimator(
          method_cfg, static_cast<int>(traj.states.cols()), traj_seed);
      for (long t = 0; t < traj.num_slots(); ++t) {
        const Eigen::VectorXd s_t = traj.states.row(t);
        const Eigen::VectorXd s_next = traj.states.row(t + 1);
        const auto start = Clock::now();
        bundle.estimator->observe(s_t, traj.rewards[t], s_next);
        const double us =
            std::chrono::duration<double, std::micro>(Clock::now() - start)
                .count();
        const std::size_t b = static_cast<std::size_t>(t / bucket);
        if (per_bucket.size() <= b) per_bucket.resize(b + 1);
        per_bucket[b].push_back(us);
      }
    }
    for (std::size_t b = 0; b < per_bucket.size(); ++b)
      rows.push_back(BenchRow{method, static_cast<long>((b + 1) * bucket),
                              median_of(per_bucket[b])});
  }

  if (write_csv) {
    std::ofstream out = open_output(cfg, "timing.csv");
    out << "# schema=1\n";
    out << "method,t,median_update_us\n";
    for (const BenchRow& row : rows)
      out << to_string(row.method) << ',' << row.t << ','
          << csv_double(row.median_us) << '\n';
  }
  return rows;
}

}  // namespace ostd
