#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ostd/errors.hpp"
#include "ostd/metrics.hpp"
#include "ostd/posterior.hpp"
#include "ostd/rng.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace ostd;

namespace {

std::vector<SlotRecord> constant_error_records(long slots, double pred_error,
                                               double bellman) {
  std::vector<SlotRecord> records(slots);
  for (long t = 0; t < slots; ++t) {
    records[t].slot = t + 1;
    records[t].prediction_error = pred_error;
    records[t].bellman_error = bellman;
  }
  return records;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("bellman error") {
  VectorXd theta(2), h(2);
  theta << 0.5, 0.0;
  h << 1.0, 0.0;
  CHECK(bellman_error(theta, h, 0.5) == doctest::Approx(0.0));
  CHECK(bellman_error(VectorXd::Zero(2), h, 2.0) == doctest::Approx(4.0));
  CHECK(bellman_error(theta, h, 1.0) == doctest::Approx(0.25));
  VectorXd bad(3);
  CHECK_THROWS_AS((void)bellman_error(theta, bad, 1.0), std::invalid_argument);
}

TEST_CASE("empirical values backward recursion") {
  CHECK(empirical_values({1.0}, 0.9) == std::vector<double>{1.0});
  const std::vector<double> vals = empirical_values({1.0, 1.0, 1.0}, 0.5);
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == doctest::Approx(1.75));
  CHECK(vals[1] == doctest::Approx(1.5));
  CHECK(vals[2] == doctest::Approx(1.0));

  const std::vector<double> rewards = {0.3, -1.2, 2.0, 0.9};
  const std::vector<double> undiscounted = empirical_values(rewards, 0.0);
  for (std::size_t i = 0; i < rewards.size(); ++i)
    CHECK(undiscounted[i] == rewards[i]);

  // The defining recursion holds exactly at every interior slot.
  const double gamma = 0.77;
  const std::vector<double> chain = empirical_values(rewards, gamma);
  for (std::size_t t = 0; t + 1 < rewards.size(); ++t)
    CHECK(chain[t] == rewards[t] + gamma * chain[t + 1]);
}

TEST_CASE("prediction errors") {
  const std::vector<double> rewards = {1.0, 1.0, 1.0};
  const std::vector<double> perfect = empirical_values(rewards, 0.5);
  const std::vector<double> zero_err =
      prediction_errors(perfect, rewards, 0.5);
  for (double e : zero_err) CHECK(e == doctest::Approx(0.0));

  const std::vector<double> zeros(3, 0.0);
  const std::vector<double> neg = prediction_errors(zeros, rewards, 0.5);
  CHECK(neg[0] == doctest::Approx(-1.75));

  const std::vector<double> twos(3, 2.0);
  const std::vector<double> errs = prediction_errors(twos, rewards, 0.5);
  CHECK(errs[0] == doctest::Approx(0.25));
  CHECK(errs[1] == doctest::Approx(0.5));
  CHECK(errs[2] == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)prediction_errors(zeros, {1.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("averaged error curves") {
  const auto single = avg_error_curves({constant_error_records(5, 2.0, 9.0)});
  for (double v : single.avg_prediction_error) CHECK(v == doctest::Approx(2.0));
  for (double v : single.avg_bellman_error) CHECK(v == doctest::Approx(3.0));

  const auto pair = avg_error_curves({constant_error_records(4, 1.0, 1.0),
                                      constant_error_records(4, 3.0, 9.0)});
  for (double v : pair.avg_prediction_error) CHECK(v == doctest::Approx(2.0));
  for (double v : pair.avg_bellman_error) CHECK(v == doctest::Approx(2.0));

  // Unequal lengths: later slots average only the alive trajectories.
  const auto ragged = avg_error_curves({constant_error_records(2, 1.0, 0.0),
                                        constant_error_records(4, 3.0, 0.0)});
  CHECK(ragged.count[1] == 2);
  CHECK(ragged.count[3] == 1);
  CHECK(ragged.avg_prediction_error[1] == doctest::Approx(2.0));
  CHECK(ragged.avg_prediction_error[3] == doctest::Approx(3.0));

  CHECK_THROWS_AS((void)avg_error_curves({}), std::invalid_argument);
}

TEST_CASE("hindsight ridge solution") {
  MatrixXd h_rows(1, 2);
  h_rows << 1.0, 0.0;
  VectorXd rewards(1);
  rewards << 1.0;
  const VectorXd theta = hindsight_theta(h_rows, rewards, 1.0, 1.0);
  CHECK(theta[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(theta[1] == doctest::Approx(0.0));

  const VectorXd zero =
      hindsight_theta(h_rows, VectorXd::Zero(1), 0.5, 2.0);
  CHECK(zero.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("hindsight solution equals the final online posterior") {
  SplitMix64 rng(3);
  const double noise_var = 0.05;
  const double prior_var = 1.0;
  const int dim = 10;
  PosteriorState p(prior_var, dim / 2, noise_var);
  MatrixXd h_rows(60, dim);
  VectorXd rewards(60);
  for (int t = 0; t < 60; ++t) {
    TransitionFeatures tf;
    tf.h = VectorXd::NullaryExpr(dim, [&](Eigen::Index) {
      return rng.next_normal() / std::sqrt(static_cast<double>(dim));
    });
    tf.reward = rng.next_uniform(-2, 2);
    p.update(tf);
    h_rows.row(t) = tf.h.transpose();
    rewards[t] = tf.reward;
  }
  const VectorXd theta_star =
      hindsight_theta(h_rows, rewards, noise_var, prior_var);
  CHECK((p.mean() - theta_star).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("regret report hand case") {
  // One slot from the zero initialization: online residual r = 1, theta* from
  // the ridge example, gamma = 0, unit variances, D = 1.
  MatrixXd h_rows(1, 2);
  h_rows << 1.0, 0.0;
  VectorXd rewards(1);
  rewards << 1.0;
  const RegretReport report =
      regret_report(h_rows, rewards, {1.0}, 1.0, 1.0, 1, 0.0);
  CHECK(report.horizon == 1);
  CHECK(report.cumulative_online_loss == doctest::Approx(1.0));
  CHECK(report.cumulative_hindsight_loss == doctest::Approx(0.25));
  CHECK(report.regret == doctest::Approx(0.75));
  CHECK(report.max_bellman_residual == doctest::Approx(1.0));
  CHECK(report.theta_star_sq_norm == doctest::Approx(0.25));
  CHECK(report.bound ==
        doctest::Approx(2.0 * std::log(2.0) + 0.125).epsilon(1e-12));
  CHECK(report.regret <= report.bound);
}

TEST_CASE("constant hindsight play has zero regret") {
  SplitMix64 rng(5);
  MatrixXd h_rows(20, 4);
  VectorXd rewards(20);
  for (int t = 0; t < 20; ++t) {
    for (int j = 0; j < 4; ++j) h_rows(t, j) = 0.5 * rng.next_normal();
    rewards[t] = rng.next_uniform(-1, 1);
  }
  const VectorXd theta_star = hindsight_theta(h_rows, rewards, 0.1, 1.0);
  std::vector<double> residuals(20);
  for (int t = 0; t < 20; ++t)
    residuals[t] = rewards[t] - h_rows.row(t).dot(theta_star);
  const RegretReport report =
      regret_report(h_rows, rewards, residuals, 0.1, 1.0, 2, 0.75);
  CHECK(report.regret == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.bound >= 0.0);
}

TEST_CASE("prediction error ratio scaling") {
  const std::vector<double> errs = {1.0, -2.0, 0.5};
  const double gamma = 0.5;
  // Equal online and benchmark errors leave exactly the scale factor.
  CHECK(prediction_error_ratio(errs, errs, gamma) ==
        doctest::Approx((1.0 - gamma) * (1.0 - gamma) /
                        (2.0 * (1.0 + gamma) * (1.0 + gamma))));
  // Perfect benchmark with imperfect online play diverges.
  CHECK(std::isinf(prediction_error_ratio(errs, {0.0, 0.0, 0.0}, gamma)));
  CHECK(prediction_error_ratio({0.0}, {0.0}, gamma) == 0.0);
  CHECK_THROWS_AS((void)prediction_error_ratio(errs, {1.0}, gamma),
                  std::invalid_argument);
}

TEST_CASE("online stability sums and caps") {
  const StabilityReport zero =
      online_stability({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 2.0, 0.1, 5.0, 4.0);
  CHECK(zero.mean_sq_diff == doctest::Approx(0.0));
  CHECK(zero.cap == doctest::Approx(2.0 * 2.0 / 0.1 * 1.0 / 3.0));

  CHECK_THROWS_AS(
      (void)online_stability({1.0}, {1.0, 2.0}, 1.0, 0.1, 1.0, 0.5),
      std::invalid_argument);
}

TEST_CASE("stability inequality holds on a real run and its cap shrinks") {
  SplitMix64 rng(8);
  const double noise_var = 0.05;
  const int d_count = 10;
  std::vector<double> caps;
  for (long horizon : {100L, 1000L, 10000L}) {
    PosteriorState p(1.0, d_count, noise_var);
    const double trace0 = p.covariance().trace();
    // Features cycle a small state set so information keeps accumulating.
    std::vector<VectorXd> phis;
    for (int i = 0; i < 12; ++i) {
      VectorXd v(2 * d_count);
      for (int j = 0; j < v.size(); ++j) v[j] = rng.next_normal();
      v.normalize();
      phis.push_back(v);
    }
    std::vector<double> preds(horizon), posts(horizon);
    double max_resid = 0.0;
    for (long t = 0; t < horizon; ++t) {
      const VectorXd& phi_now = phis[t % phis.size()];
      const VectorXd& phi_next = phis[(t + 1) % phis.size()];
      TransitionFeatures tf;
      tf.h = transition_vector(phi_now, phi_next, 0.75);
      tf.reward = rng.next_uniform(-3, 3);
      preds[t] = p.predict(phi_now).mean;
      const double resid = tf.reward - tf.h.dot(p.mean());
      max_resid = std::max(max_resid, std::abs(resid));
      p.update(tf);
      posts[t] = p.predict(phi_now).mean;
    }
    const StabilityReport report = online_stability(
        posts, preds, max_resid, noise_var, trace0, p.covariance().trace());
    CHECK(report.mean_sq_diff <= report.cap);
    caps.push_back(report.cap);
  }
  CHECK(caps[0] > caps[1]);
  CHECK(caps[1] > caps[2]);
}

}  // TEST_SUITE
