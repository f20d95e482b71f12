#pragma once

#include <Eigen/Core>
#include <vector>

namespace ostd {

// Per-slot diagnostics of one online run. `bellman_error` is the squared
// one-step residual at the pre-update estimate; `prediction_error` compares
// the predictive mean against the empirical discounted future-reward sum
// and is filled after the trajectory ends.
struct SlotRecord {
  long slot = 0;
  double predicted_value = 0.0;
  double predicted_variance = 0.0;
  double reward = 0.0;
  double bellman_error = 0.0;
  double prediction_error = 0.0;
};

// Squared instantaneous Bellman error (r - h'theta)^2.
double bellman_error(const Eigen::VectorXd& theta, const Eigen::VectorXd& h,
                     double reward);

// Discounted future-reward sums v_t = sum_{tau >= t} gamma^(tau-t) r_tau by
// one backward pass; the tail beyond the trajectory end counts as zero.
std::vector<double> empirical_values(const std::vector<double>& rewards,
                                     double gamma);

// e_t = prediction_t - empirical_value_t.
std::vector<double> prediction_errors(const std::vector<double>& predictions,
                                      const std::vector<double>& rewards,
                                      double gamma);

// Root-mean cumulative error curves: per trajectory and slot t,
// sqrt(sum_{tau<=t} err^2 / t), then averaged across the trajectories still
// alive at t. `count[t]` records how many trajectories contributed.
struct ErrorCurves {
  std::vector<double> avg_prediction_error;
  std::vector<double> avg_bellman_error;
  std::vector<long> count;
};

ErrorCurves avg_error_curves(
    const std::vector<std::vector<SlotRecord>>& per_trajectory_records);

// Ridge solution theta* = argmin sum_t (r_t - h_t'theta)^2 +
// (noise_var/prior_var) |theta|^2 over the whole trajectory, solved as one
// SPD system. Rows of `h_rows` are the transition vectors.
Eigen::VectorXd hindsight_theta(const Eigen::MatrixXd& h_rows,
                                const Eigen::VectorXd& rewards,
                                double noise_var, double prior_var);

// Cumulative-Bellman-error regret of the online estimate sequence against
// the hindsight ridge comparator, with the logarithmic bound evaluated at
// the observed maximum residual.
struct RegretReport {
  long horizon = 0;
  double cumulative_online_loss = 0.0;
  double cumulative_hindsight_loss = 0.0;
  double regret = 0.0;             // online - hindsight
  double bound = 0.0;              // 2 D Be^2 log((1+g)^2 pv T / nv + 1) + |theta*|^2/(2 pv)
  double max_bellman_residual = 0.0;  // observed Be
  double theta_star_sq_norm = 0.0;
};

// `online_residuals[t]` must be r_t - h_t'theta_hat_{t-1}. Throws
// NumericError if the measured regret exceeds the bound (that would mean a
// broken update, not a tight bound).
RegretReport regret_report(const Eigen::MatrixXd& h_rows,
                           const Eigen::VectorXd& rewards,
                           const std::vector<double>& online_residuals,
                           double noise_var, double prior_var,
                           int num_frequencies, double gamma);

// Average online squared prediction error relative to the scaled error of a
// fixed benchmark predictor:
//   [sum e_t^2 / T] / [2 (1+gamma)^2 / (1-gamma)^2 * sum e*_t^2 / T].
// Monitored, not asserted: the comparison is an asymptotic statement. A zero
// benchmark error gives +inf (0 when the online error is also zero).
double prediction_error_ratio(const std::vector<double>& online_errors,
                              const std::vector<double>& benchmark_errors,
                              double gamma);

// Mean squared one-slot drift of the value estimate at the visited states,
// with its trace-based cap; both normalized by the number of slots.
struct StabilityReport {
  double mean_sq_diff = 0.0;
  double cap = 0.0;
};

StabilityReport online_stability(const std::vector<double>& post_values,
                                 const std::vector<double>& pred_values,
                                 double max_abs_residual, double noise_var,
                                 double trace_cov_initial,
                                 double trace_cov_final);

}  // namespace ostd
