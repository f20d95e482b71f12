#include "ostd/metrics.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ostd/errors.hpp"

namespace ostd {

double bellman_error(const Eigen::VectorXd& theta, const Eigen::VectorXd& h,
                     double reward) {
  if (theta.size() != h.size())
    throw std::invalid_argument("bellman_error: dimension mismatch");
  const double resid = reward - h.dot(theta);
  return resid * resid;
}

std::vector<double> empirical_values(const std::vector<double>& rewards,
                                     double gamma) {
  std::vector<double> values(rewards.size(), 0.0);
  double tail = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    tail = rewards[i] + gamma * tail;
    values[i] = tail;
  }
  return values;
}

std::vector<double> prediction_errors(const std::vector<double>& predictions,
                                      const std::vector<double>& rewards,
                                      double gamma) {
  if (predictions.size() != rewards.size())
    throw std::invalid_argument("prediction_errors: length mismatch");
  const std::vector<double> values = empirical_values(rewards, gamma);
  std::vector<double> errors(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i)
    errors[i] = predictions[i] - values[i];
  return errors;
}

ErrorCurves avg_error_curves(
    const std::vector<std::vector<SlotRecord>>& per_trajectory_records) {
  if (per_trajectory_records.empty())
    throw std::invalid_argument("avg_error_curves: no trajectories");
  std::size_t max_len = 0;
  for (const auto& records : per_trajectory_records)
    max_len = std::max(max_len, records.size());
  if (max_len == 0)
    throw std::invalid_argument("avg_error_curves: empty trajectories");

  ErrorCurves curves;
  curves.avg_prediction_error.assign(max_len, 0.0);
  curves.avg_bellman_error.assign(max_len, 0.0);
  curves.count.assign(max_len, 0);

  for (const auto& records : per_trajectory_records) {
    double cum_sq_pred = 0.0;
    double cum_bellman = 0.0;
    for (std::size_t t = 0; t < records.size(); ++t) {
      cum_sq_pred += records[t].prediction_error * records[t].prediction_error;
      cum_bellman += records[t].bellman_error;
      const double inv_t = 1.0 / static_cast<double>(t + 1);
      curves.avg_prediction_error[t] += std::sqrt(cum_sq_pred * inv_t);
      curves.avg_bellman_error[t] += std::sqrt(cum_bellman * inv_t);
      curves.count[t] += 1;
    }
  }
  for (std::size_t t = 0; t < max_len; ++t) {
    const double inv_n = 1.0 / static_cast<double>(curves.count[t]);
    curves.avg_prediction_error[t] *= inv_n;
    curves.avg_bellman_error[t] *= inv_n;
  }
  return curves;
}

Eigen::VectorXd hindsight_theta(const Eigen::MatrixXd& h_rows,
                                const Eigen::VectorXd& rewards,
                                double noise_var, double prior_var) {
  if (h_rows.rows() != rewards.size())
    throw std::invalid_argument("hindsight_theta: row/reward count mismatch");
  if (h_rows.rows() < 1)
    throw std::invalid_argument("hindsight_theta: need at least one slot");
  if (!(noise_var > 0.0) || !(prior_var > 0.0))
    throw std::invalid_argument("hindsight_theta: variances must be positive");
  Eigen::MatrixXd G = h_rows.transpose() * h_rows;
  G.diagonal().array() += noise_var / prior_var;
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    G.diagonal().array() += 1e-10 * G.trace() / static_cast<double>(G.rows());
    llt.compute(G);
    if (llt.info() != Eigen::Success)
      throw IllConditionedError("hindsight ridge system singular",
                                G.diagonal().maxCoeff() /
                                    std::max(G.diagonal().minCoeff(), 1e-300));
  }
  return llt.solve(h_rows.transpose() * rewards);
}

RegretReport regret_report(const Eigen::MatrixXd& h_rows,
                           const Eigen::VectorXd& rewards,
                           const std::vector<double>& online_residuals,
                           double noise_var, double prior_var,
                           int num_frequencies, double gamma) {
  const long horizon = rewards.size();
  if (static_cast<long>(online_residuals.size()) != horizon)
    throw std::invalid_argument("regret_report: residual count mismatch");

  RegretReport report;
  report.horizon = horizon;
  for (double resid : online_residuals) {
    report.cumulative_online_loss += resid * resid;
    report.max_bellman_residual =
        std::max(report.max_bellman_residual, std::abs(resid));
  }

  const Eigen::VectorXd theta_star =
      hindsight_theta(h_rows, rewards, noise_var, prior_var);
  report.theta_star_sq_norm = theta_star.squaredNorm();
  report.cumulative_hindsight_loss =
      (rewards - h_rows * theta_star).squaredNorm();
  report.regret =
      report.cumulative_online_loss - report.cumulative_hindsight_loss;

  const double be = report.max_bellman_residual;
  const double one_plus_gamma = 1.0 + gamma;
  report.bound =
      2.0 * static_cast<double>(num_frequencies) * be * be *
          std::log(one_plus_gamma * one_plus_gamma * prior_var *
                       static_cast<double>(horizon) / noise_var +
                   1.0) +
      report.theta_star_sq_norm / (2.0 * prior_var);

  if (report.regret > report.bound)
    throw NumericError("regret exceeded its logarithmic bound", -1, horizon);
  return report;
}

double prediction_error_ratio(const std::vector<double>& online_errors,
                              const std::vector<double>& benchmark_errors,
                              double gamma) {
  if (online_errors.size() != benchmark_errors.size())
    throw std::invalid_argument("prediction_error_ratio: length mismatch");
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("prediction_error_ratio: gamma in [0, 1)");
  double online = 0.0, benchmark = 0.0;
  for (double e : online_errors) online += e * e;
  for (double e : benchmark_errors) benchmark += e * e;
  const double one_plus = 1.0 + gamma;
  const double one_minus = 1.0 - gamma;
  const double scaled =
      2.0 * one_plus * one_plus / (one_minus * one_minus) * benchmark;
  if (scaled == 0.0)
    return online == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return online / scaled;
}

StabilityReport online_stability(const std::vector<double>& post_values,
                                 const std::vector<double>& pred_values,
                                 double max_abs_residual, double noise_var,
                                 double trace_cov_initial,
                                 double trace_cov_final) {
  if (post_values.size() != pred_values.size())
    throw std::invalid_argument("online_stability: length mismatch");
  StabilityReport report;
  if (post_values.empty()) return report;
  double sum = 0.0;
  for (std::size_t i = 0; i < post_values.size(); ++i) {
    const double diff = post_values[i] - pred_values[i];
    sum += diff * diff;
  }
  const double inv_t = 1.0 / static_cast<double>(post_values.size());
  report.mean_sq_diff = sum * inv_t;
  report.cap = max_abs_residual * max_abs_residual / noise_var *
               (trace_cov_initial - trace_cov_final) * inv_t;
  return report;
}

}  // namespace ostd
