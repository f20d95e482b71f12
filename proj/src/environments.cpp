#include "ostd/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ostd/rng.hpp"

namespace ostd {

void RandomWalkConfig::validate() const {
  if (num_states < 2) throw std::invalid_argument("random walk needs >= 2 states");
  if (state_dim < 1) throw std::invalid_argument("state_dim must be >= 1");
  if (!(reward_low < reward_high))
    throw std::invalid_argument("reward_low must be < reward_high");
  if (discount < 0.0 || discount >= 1.0)
    throw std::invalid_argument("discount must be in [0, 1)");
}

std::vector<Capsule> default_puddles() {
  return {
      Capsule{{0.10, 0.75}, {0.45, 0.75}, 0.10},
      Capsule{{0.45, 0.40}, {0.45, 0.80}, 0.10},
  };
}

void PuddleWorldConfig::validate() const {
  if (!(goal_radius > 0.0)) throw std::invalid_argument("goal_radius must be > 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (motion_noise_std < 0.0)
    throw std::invalid_argument("motion_noise_std must be >= 0");
  if (discount < 0.0 || discount >= 1.0)
    throw std::invalid_argument("discount must be in [0, 1)");
  for (int i = 0; i < 2; ++i) {
    if (start_min[i] < 0.0 || start_max[i] > 1.0 || !(start_min[i] <= start_max[i]))
      throw std::invalid_argument("start region must lie inside the unit square");
  }
  for (const Capsule& p : puddles)
    if (!(p.radius > 0.0)) throw std::invalid_argument("puddle radius must be > 0");
}

Trajectory gen_random_walk(const RandomWalkConfig& cfg, long horizon) {
  cfg.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

  SplitMix64 embed_rng(derive_stream(cfg.seed, StreamPurpose::kEnvEmbedding));
  Eigen::MatrixXd embeddings(cfg.num_states, cfg.state_dim);
  for (int i = 0; i < cfg.num_states; ++i)
    for (int j = 0; j < cfg.state_dim; ++j)
      embeddings(i, j) = embed_rng.next_normal();

  SplitMix64 reward_rng(derive_stream(cfg.seed, StreamPurpose::kEnvReward));
  Trajectory traj;
  traj.states.resize(horizon + 1, cfg.state_dim);
  traj.rewards.resize(horizon);
  traj.discount = cfg.discount;
  traj.seed = cfg.seed;
  int pos = 0;
  traj.states.row(0) = embeddings.row(pos);
  for (long t = 0; t < horizon; ++t) {
    traj.rewards[t] = reward_rng.next_uniform(cfg.reward_low, cfg.reward_high);
    pos = (pos + 1) % cfg.num_states;
    traj.states.row(t + 1) = embeddings.row(pos);
  }
  traj.terminated = false;
  return traj;
}

namespace {

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len_sq = ab.squaredNorm();
  if (len_sq == 0.0) return (p - a).norm();
  const double u = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (a + u * ab)).norm();
}

}  // namespace

double reward_shape(const PuddleWorldConfig& cfg, const Eigen::Vector2d& s) {
  double depth = 0.0;
  double max_depth = cfg.boundary_margin;
  for (const Capsule& p : cfg.puddles) {
    depth = std::max(depth, p.radius - point_segment_distance(s, p.a, p.b));
    max_depth = std::max(max_depth, p.radius);
  }
  const double edge_dist =
      std::min(std::min(s.x(), 1.0 - s.x()), std::min(s.y(), 1.0 - s.y()));
  depth = std::max(depth, cfg.boundary_margin - edge_dist);
  if (max_depth <= 0.0) return -1.0;
  return -1.0 - std::min(1.0, std::max(depth, 0.0) / max_depth);
}

Trajectory gen_puddle_world(const PuddleWorldConfig& cfg, long horizon) {
  cfg.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

  SplitMix64 start_rng(derive_stream(cfg.seed, StreamPurpose::kEnvStart));
  SplitMix64 choice_rng(derive_stream(cfg.seed, StreamPurpose::kEnvChoice));
  SplitMix64 motion_rng(derive_stream(cfg.seed, StreamPurpose::kEnvMotion));

  Eigen::Vector2d pos{
      start_rng.next_uniform(cfg.start_min.x(), cfg.start_max.x()),
      start_rng.next_uniform(cfg.start_min.y(), cfg.start_max.y())};

  Eigen::MatrixXd states(horizon + 1, 2);
  Eigen::VectorXd rewards(horizon);
  states.row(0) = pos.transpose();
  bool terminated = false;
  long slots = 0;
  for (long t = 0; t < horizon; ++t) {
    const bool go_east = choice_rng.next_double() < 0.5;
    pos.x() += (go_east ? cfg.step_size : 0.0) +
               cfg.motion_noise_std * motion_rng.next_normal();
    pos.y() += (go_east ? 0.0 : cfg.step_size) +
               cfg.motion_noise_std * motion_rng.next_normal();
    pos.x() = std::clamp(pos.x(), 0.0, 1.0);
    pos.y() = std::clamp(pos.y(), 0.0, 1.0);
    states.row(t + 1) = pos.transpose();
    rewards[t] = reward_shape(cfg, pos);
    ++slots;
    if ((pos - cfg.goal_center).norm() <= cfg.goal_radius) {
      terminated = true;
      break;
    }
  }

  Trajectory traj;
  traj.states = states.topRows(slots + 1);
  traj.rewards = rewards.head(slots);
  traj.discount = cfg.discount;
  traj.terminated = terminated;
  traj.seed = cfg.seed;
  return traj;
}

}  // namespace ostd
