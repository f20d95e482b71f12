#pragma once

#include <Eigen/Core>
#include <functional>

#include "ostd/kernel.hpp"
#include "ostd/posterior.hpp"
#include "ostd/random_features.hpp"

namespace ostd {

// An observed trajectory prefix: t+1 states (rows) and t rewards. The final
// state has no associated reward yet; the predictor conditions on it anyway.
struct TrajectoryBatch {
  Eigen::MatrixXd states;  // (t+1) x d
  Eigen::VectorXd rewards;  // t
  double discount = 0.0;

  long num_transitions() const { return rewards.size(); }
  void validate() const;  // throws std::invalid_argument
};

// The t x (t+1) observation matrix: row i has 1 at column i and -gamma at
// column i+1.
Eigen::MatrixXd build_H(long t, double gamma);

using KernelFn =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// Batch predictors are cubic in t and exist for verification; calls beyond
// this many transitions are rejected unless the caller raises the cap.
inline constexpr long kDefaultMaxOracleTransitions = 2000;

// Exact batch GP-TD predictive mean/variance at a query state, conditioning
// the GP prior on rewards through the two-state observation model. O(t^3).
ValueEstimate batch_predict(const KernelSpec& spec,
                            const TrajectoryBatch& batch,
                            const Eigen::VectorXd& query, double noise_var,
                            long max_transitions = kDefaultMaxOracleTransitions);

// Same predictor over an arbitrary kernel function (used to cross-check the
// feature-space route through the equivalent low-rank Gram).
ValueEstimate batch_predict_with_kernel(
    const KernelFn& kernel, const TrajectoryBatch& batch,
    const Eigen::VectorXd& query, double noise_var,
    long max_transitions = kDefaultMaxOracleTransitions);

// Closed-form random-feature predictor: forms the feature matrix of all
// t+1 states and solves the regularized 2D x 2D normal equations.
ValueEstimate batch_predict_rf(
    const RFMap& map, const TrajectoryBatch& batch,
    const Eigen::VectorXd& query, double noise_var, double prior_var,
    long max_transitions = kDefaultMaxOracleTransitions);

}  // namespace ostd
