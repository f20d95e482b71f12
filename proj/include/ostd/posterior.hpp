#pragma once

#include <Eigen/Core>
#include <utility>

namespace ostd {

// Observation vector and reward for one transition: h = phi(s_t) - gamma *
// phi(s_{t+1}), so that E[r_t] = h' theta under the generative model.
struct TransitionFeatures {
  Eigen::VectorXd h;
  double reward = 0.0;
};

Eigen::VectorXd transition_vector(const Eigen::VectorXd& phi_t,
                                  const Eigen::VectorXd& phi_next,
                                  double gamma);

struct ValueEstimate {
  double mean = 0.0;
  double variance = 0.0;
};

// Running Gaussian posterior over the feature-space weight vector of one
// online estimator: mean theta_hat and covariance Sigma, plus the noise and
// prior variances that drive the recursion. Updates are strictly sequential
// per instance; read-only prediction on a snapshot is safe concurrently.
class PosteriorState {
 public:
  // Zero mean, prior_var * identity covariance over 2*num_features dims.
  PosteriorState(double prior_var, int num_features, double noise_var);

  // Restores a snapshot (used by serialization).
  PosteriorState(Eigen::VectorXd mean, Eigen::MatrixXd covariance, long slot,
                 double noise_var, double prior_var);

  // Predictive mean phi'theta_hat and variance phi'Sigma phi.
  ValueEstimate predict(const Eigen::VectorXd& phi) const;

  // Rank-one Bayesian correction. The covariance is re-symmetrized after
  // the downdate to stop asymmetry drift over long runs.
  void update(const TransitionFeatures& tf);

  // Information matrix J = Sigma^{-1}. Throws IllConditionedError if the
  // covariance cannot be factorized.
  Eigen::MatrixXd info_matrix() const;

  // Equivalent correction routed through the information-matrix form:
  // J_t = J_{t-1} + h h'/noise_var, mean step via the Bellman-error
  // gradient. Produces the same posterior as update() up to solve error;
  // kept as an independent algebraic path for cross-checking.
  void gradient_form_step(const TransitionFeatures& tf);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  long slot() const { return slot_; }
  double noise_var() const { return noise_var_; }
  double prior_var() const { return prior_var_; }
  int dim() const { return static_cast<int>(mean_.size()); }

 private:
  void check_transition(const TransitionFeatures& tf) const;

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  long slot_ = 0;
  double noise_var_;
  double prior_var_;
};

}  // namespace ostd
