#include "ostd/posterior.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ostd/errors.hpp"

namespace ostd {

Eigen::VectorXd transition_vector(const Eigen::VectorXd& phi_t,
                                  const Eigen::VectorXd& phi_next,
                                  double gamma) {
  if (phi_t.size() != phi_next.size())
    throw std::invalid_argument("transition_vector: dimension mismatch");
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("transition_vector: gamma must be in [0, 1)");
  return phi_t - gamma * phi_next;
}

PosteriorState::PosteriorState(double prior_var, int num_features,
                               double noise_var)
    : noise_var_(noise_var), prior_var_(prior_var) {
  if (!(prior_var > 0.0))
    throw std::invalid_argument("prior variance must be positive");
  if (!(noise_var > 0.0))
    throw std::invalid_argument("noise variance must be positive");
  if (num_features < 1)
    throw std::invalid_argument("num_features must be >= 1");
  const int dim = 2 * num_features;
  mean_ = Eigen::VectorXd::Zero(dim);
  cov_ = prior_var * Eigen::MatrixXd::Identity(dim, dim);
}

PosteriorState::PosteriorState(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                               long slot, double noise_var, double prior_var)
    : mean_(std::move(mean)),
      cov_(std::move(covariance)),
      slot_(slot),
      noise_var_(noise_var),
      prior_var_(prior_var) {
  if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size())
    throw std::invalid_argument("posterior snapshot dimensions inconsistent");
  if (!(noise_var_ > 0.0) || !(prior_var_ > 0.0))
    throw std::invalid_argument("posterior snapshot variances must be positive");
}

ValueEstimate PosteriorState::predict(const Eigen::VectorXd& phi) const {
  if (phi.size() != mean_.size())
    throw std::invalid_argument("predict: feature dimension mismatch");
  ValueEstimate out;
  out.mean = phi.dot(mean_);
  out.variance = phi.dot(cov_ * phi);
  return out;
}

void PosteriorState::check_transition(const TransitionFeatures& tf) const {
  if (tf.h.size() != mean_.size())
    throw std::invalid_argument("update: feature dimension mismatch");
  if (!std::isfinite(tf.reward) || !tf.h.allFinite())
    throw std::invalid_argument("update: non-finite transition");
}

void PosteriorState::update(const TransitionFeatures& tf) {
  check_transition(tf);
  const Eigen::VectorXd cov_h = cov_ * tf.h;
  const double denom = tf.h.dot(cov_h) + noise_var_;
  const double residual = tf.reward - tf.h.dot(mean_);
  mean_ += cov_h * (residual / denom);
  cov_ -= (cov_h * cov_h.transpose()) / denom;
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  ++slot_;
}

Eigen::MatrixXd PosteriorState::info_matrix() const {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("posterior covariance not factorizable",
                              cov_.norm() / cov_.diagonal().minCoeff());
  }
  const int dim = static_cast<int>(cov_.rows());
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  return 0.5 * (inv + inv.transpose());
}

void PosteriorState::gradient_form_step(const TransitionFeatures& tf) {
  check_transition(tf);
  Eigen::MatrixXd info = info_matrix();
  info.noalias() += (tf.h * tf.h.transpose()) / noise_var_;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("information matrix not factorizable",
                              info.norm() / info.diagonal().minCoeff());
  }
  const Eigen::VectorXd gradient =
      2.0 * tf.h * (tf.h.dot(mean_) - tf.reward);
  mean_ -= llt.solve(gradient) / (2.0 * noise_var_);
  const int dim = static_cast<int>(info.rows());
  Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  cov_ = 0.5 * (cov + cov.transpose());
  ++slot_;
}

}  // namespace ostd
