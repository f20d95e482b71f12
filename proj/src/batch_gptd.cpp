#include "ostd/batch_gptd.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "ostd/errors.hpp"

namespace ostd {

void TrajectoryBatch::validate() const {
  if (states.rows() != rewards.size() + 1)
    throw std::invalid_argument(
        "trajectory batch must have one more state than rewards");
  if (discount < 0.0 || discount >= 1.0)
    throw std::invalid_argument("discount must be in [0, 1)");
  if (!states.allFinite() || !rewards.allFinite())
    throw std::invalid_argument("trajectory batch has non-finite entries");
}

Eigen::MatrixXd build_H(long t, double gamma) {
  if (t < 1) throw std::invalid_argument("build_H: t must be >= 1");
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("build_H: gamma must be in [0, 1)");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(t, t + 1);
  for (long i = 0; i < t; ++i) {
    H(i, i) = 1.0;
    H(i, i + 1) = -gamma;
  }
  return H;
}

namespace {

// SPD solve with a single jitter retry before giving up.
Eigen::LLT<Eigen::MatrixXd> factor_spd(Eigen::MatrixXd m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const long n = m.rows();
  const double jitter = 1e-10 * m.trace() / static_cast<double>(n);
  m.diagonal().array() += jitter;
  llt.compute(m);
  if (llt.info() == Eigen::Success) return llt;
  const double cond_estimate =
      m.diagonal().maxCoeff() / std::max(m.diagonal().minCoeff(), 1e-300);
  throw IllConditionedError(what, cond_estimate);
}

void check_query(const TrajectoryBatch& batch, const Eigen::VectorXd& query,
                 double noise_var, long max_transitions) {
  batch.validate();
  if (!(noise_var > 0.0))
    throw std::invalid_argument("noise variance must be positive");
  if (batch.num_transitions() > 0 && batch.states.cols() != query.size())
    throw std::invalid_argument("query dimension mismatch");
  if (batch.num_transitions() > max_transitions)
    throw std::invalid_argument(
        "batch predictor called beyond its transition cap");
}

}  // namespace

ValueEstimate batch_predict_with_kernel(const KernelFn& kernel,
                                        const TrajectoryBatch& batch,
                                        const Eigen::VectorXd& query,
                                        double noise_var,
                                        long max_transitions) {
  check_query(batch, query, noise_var, max_transitions);
  const double prior_at_query = kernel(query, query);
  const long t = batch.num_transitions();
  if (t == 0) return {0.0, prior_at_query};

  const long n = t + 1;
  Eigen::MatrixXd gram(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = i; j < n; ++j) {
      gram(i, j) = kernel(batch.states.row(i), batch.states.row(j));
      gram(j, i) = gram(i, j);
    }
  }
  Eigen::VectorXd k_query(n);
  for (long i = 0; i < n; ++i)
    k_query[i] = kernel(batch.states.row(i), query);

  const Eigen::MatrixXd H = build_H(t, batch.discount);
  Eigen::MatrixXd Q = H * gram * H.transpose();
  Q.diagonal().array() += noise_var;
  const auto llt = factor_spd(std::move(Q), "batch predictor system singular");

  const Eigen::VectorXd b = H * k_query;
  ValueEstimate out;
  out.mean = b.dot(llt.solve(batch.rewards));
  out.variance = prior_at_query - b.dot(llt.solve(b));
  return out;
}

ValueEstimate batch_predict(const KernelSpec& spec,
                            const TrajectoryBatch& batch,
                            const Eigen::VectorXd& query, double noise_var,
                            long max_transitions) {
  spec.validate();
  return batch_predict_with_kernel(
      [&spec](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return exact_kernel(spec, a, b);
      },
      batch, query, noise_var, max_transitions);
}

ValueEstimate batch_predict_rf(const RFMap& map, const TrajectoryBatch& batch,
                               const Eigen::VectorXd& query, double noise_var,
                               double prior_var, long max_transitions) {
  check_query(batch, query, noise_var, max_transitions);
  if (!(prior_var > 0.0))
    throw std::invalid_argument("prior variance must be positive");

  const Eigen::VectorXd phi_query = map.feature_map(query);
  const long t = batch.num_transitions();
  ValueEstimate out;
  if (t == 0) {
    out.mean = 0.0;
    out.variance = prior_var * phi_query.squaredNorm();
    return out;
  }

  const int dim = map.feature_dim();
  Eigen::MatrixXd features(t + 1, dim);
  for (long i = 0; i < t + 1; ++i)
    features.row(i) = map.feature_map(batch.states.row(i)).transpose();

  // Rows of A are the transition vectors h_t = phi(s_t) - gamma phi(s_{t+1}).
  const Eigen::MatrixXd A =
      features.topRows(t) - batch.discount * features.bottomRows(t);

  Eigen::MatrixXd G = A.transpose() * A;
  G.diagonal().array() += noise_var / prior_var;
  const auto llt = factor_spd(std::move(G), "rf batch system singular");

  out.mean = phi_query.dot(llt.solve(A.transpose() * batch.rewards));
  out.variance = noise_var * phi_query.dot(llt.solve(phi_query));
  return out;
}

}  // namespace ostd
