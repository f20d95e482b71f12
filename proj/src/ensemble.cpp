#include "ostd/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ostd/errors.hpp"
#include "ostd/rng.hpp"

namespace ostd {

EnsembleState EnsembleState::init(const std::vector<KernelSpec>& dictionary,
                                  int num_features, int state_dim,
                                  double noise_var, std::uint64_t seed) {
  if (dictionary.empty())
    throw std::invalid_argument("kernel dictionary must be nonempty");
  std::vector<ExpertState> experts;
  experts.reserve(dictionary.size());
  for (int m = 0; m < static_cast<int>(dictionary.size()); ++m) {
    const KernelSpec& spec = dictionary[m];
    spec.validate();
    const std::uint64_t expert_seed =
        derive_stream(seed, StreamPurpose::kRfFrequencies,
                      static_cast<std::uint64_t>(m));
    experts.push_back(ExpertState{
        spec, RFMap::sample(spec, num_features, state_dim, expert_seed),
        PosteriorState(spec.magnitude, num_features, noise_var), m});
  }
  const int m_count = static_cast<int>(experts.size());
  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(m_count, 1.0 / static_cast<double>(m_count));
  return EnsembleState(std::move(experts), std::move(weights), 0);
}

EnsembleState::EnsembleState(std::vector<ExpertState> experts,
                             Eigen::VectorXd weights, long slot)
    : experts_(std::move(experts)), weights_(std::move(weights)), slot_(slot) {
  if (experts_.empty()) throw std::invalid_argument("ensemble needs experts");
  if (weights_.size() != static_cast<Eigen::Index>(experts_.size()))
    throw std::invalid_argument("weight vector length mismatch");
}

EnsemblePrediction EnsembleState::predict(const Eigen::VectorXd& s) const {
  EnsemblePrediction out;
  out.per_expert.reserve(experts_.size());
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    const ExpertState& expert = experts_[m];
    const ValueEstimate est = expert.posterior.predict(expert.rf.feature_map(s));
    out.per_expert.push_back(est);
    out.mean += weights_[m] * est.mean;
  }
  for (std::size_t m = 0; m < experts_.size(); ++m) {
    const double spread = out.mean - out.per_expert[m].mean;
    out.variance += weights_[m] * (out.per_expert[m].variance + spread * spread);
  }
  return out;
}

Eigen::VectorXd EnsembleState::updated_weights(const Eigen::VectorXd& s_t,
                                               double reward,
                                               const Eigen::VectorXd& s_next,
                                               double gamma) const {
  const int m_count = num_experts();
  Eigen::VectorXd log_post(m_count);
  for (int m = 0; m < m_count; ++m) {
    const ExpertState& expert = experts_[m];
    const Eigen::VectorXd h = transition_vector(
        expert.rf.feature_map(s_t), expert.rf.feature_map(s_next), gamma);
    const double pred_mean = h.dot(expert.posterior.mean());
    const double pred_var =
        h.dot(expert.posterior.covariance() * h) + expert.posterior.noise_var();
    const double resid = reward - pred_mean;
    const double log_density =
        -0.5 * (std::log(2.0 * M_PI * pred_var) + resid * resid / pred_var);
    log_post[m] = std::log(weights_[m]) + log_density;
  }
  const double peak = log_post.maxCoeff();
  if (!std::isfinite(peak))
    throw NumericError("all expert predictive densities underflowed", -1,
                       slot_ + 1);
  Eigen::VectorXd w = (log_post.array() - peak).exp();
  w /= w.sum();
  // Floor tiny weights so one outlier reward cannot permanently kill an
  // expert, then renormalize.
  if ((w.array() < kWeightFloor).any()) {
    w = w.array().max(kWeightFloor);
    w /= w.sum();
  }
  return w;
}

void EnsembleState::expert_update(ExpertState& expert,
                                  const Eigen::VectorXd& s_t, double reward,
                                  const Eigen::VectorXd& s_next, double gamma) {
  TransitionFeatures tf;
  tf.h = transition_vector(expert.rf.feature_map(s_t),
                           expert.rf.feature_map(s_next), gamma);
  tf.reward = reward;
  expert.posterior.update(tf);
}

void EnsembleState::step(const Eigen::VectorXd& s_t, double reward,
                         const Eigen::VectorXd& s_next, double gamma) {
  weights_ = updated_weights(s_t, reward, s_next, gamma);
  for (ExpertState& expert : experts_)
    expert_update(expert, s_t, reward, s_next, gamma);
  ++slot_;
}

}  // namespace ostd
