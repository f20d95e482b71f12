#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "ostd/kernel.hpp"
#include "ostd/posterior.hpp"
#include "ostd/random_features.hpp"

namespace ostd {

// One GP expert: its kernel, a frozen feature map drawn from that kernel's
// spectral density, and the running weight-space posterior.
struct ExpertState {
  KernelSpec kernel;
  RFMap rf;
  PosteriorState posterior;
  int index = 0;
};

struct EnsemblePrediction {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<ValueEstimate> per_expert;
};

// M parallel experts with distinct kernels plus a posterior weight simplex.
// One step = Bayesian weight correction computed from the pre-update
// posteriors, then all expert posteriors corrected; that order is normative.
class EnsembleState {
 public:
  // Uniform weights; every expert draws its frequencies from an independent
  // stream keyed by its index, even when dictionary entries coincide.
  static EnsembleState init(const std::vector<KernelSpec>& dictionary,
                            int num_features, int state_dim, double noise_var,
                            std::uint64_t seed);

  // Restores a snapshot.
  EnsembleState(std::vector<ExpertState> experts, Eigen::VectorXd weights,
                long slot);

  // Moment-matched mixture of the per-expert predictive Gaussians.
  EnsemblePrediction predict(const Eigen::VectorXd& s) const;

  // New weights from the current (pre-update) posteriors; does not mutate.
  // Computed in log space with max subtraction, floored at kWeightFloor and
  // renormalized. Throws NumericError if every expert underflows.
  Eigen::VectorXd updated_weights(const Eigen::VectorXd& s_t, double reward,
                                  const Eigen::VectorXd& s_next,
                                  double gamma) const;

  // Builds the expert's own transition vector and applies the posterior
  // correction.
  static void expert_update(ExpertState& expert, const Eigen::VectorXd& s_t,
                            double reward, const Eigen::VectorXd& s_next,
                            double gamma);

  // One full slot: weights first (from pre-update posteriors), then all
  // expert corrections; slot increments.
  void step(const Eigen::VectorXd& s_t, double reward,
            const Eigen::VectorXd& s_next, double gamma);

  const std::vector<ExpertState>& experts() const { return experts_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  long slot() const { return slot_; }
  int num_experts() const { return static_cast<int>(experts_.size()); }

  static constexpr double kWeightFloor = 1e-12;

 private:
  std::vector<ExpertState> experts_;
  Eigen::VectorXd weights_;
  long slot_ = 0;
};

}  // namespace ostd
