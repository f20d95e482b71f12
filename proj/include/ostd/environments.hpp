#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ostd {

// Ring of num_states states visited clockwise with probability 1. Each state
// carries a state_dim embedding redrawn per trajectory from the standard
// normal; rewards are i.i.d. uniform on [reward_low, reward_high] per slot.
struct RandomWalkConfig {
  int num_states = 50;
  int state_dim = 10;
  double reward_low = -3.0;
  double reward_high = 3.0;
  double discount = 0.75;
  std::uint64_t seed = 0;

  void validate() const;
};

// Capsule obstacle: all points within `radius` of segment [a, b].
struct Capsule {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
  double radius = 0.1;
};

std::vector<Capsule> default_puddles();

// Unit square with puddles. The fixed evaluation policy moves north or east
// (fair coin) by step_size plus Gaussian motion noise, clipped to the
// square; the episode ends inside the goal circle. Step-reward is -1 away
// from puddles and boundaries, falling linearly to -2 with penetration.
struct PuddleWorldConfig {
  Eigen::Vector2d start_min{0.0, 0.0};
  Eigen::Vector2d start_max{0.2, 0.2};
  Eigen::Vector2d goal_center{1.0, 1.0};
  double goal_radius = 0.1;
  double step_size = 0.05;
  double motion_noise_std = 0.01;
  std::vector<Capsule> puddles = default_puddles();
  double boundary_margin = 0.1;
  double discount = 0.7;
  std::uint64_t seed = 0;

  void validate() const;
};

// Ordered (state, reward) sequence with one more state than rewards.
struct Trajectory {
  Eigen::MatrixXd states;   // (T+1) x d
  Eigen::VectorXd rewards;  // T
  double discount = 0.0;
  bool terminated = false;
  std::uint64_t seed = 0;

  long num_slots() const { return rewards.size(); }
};

Trajectory gen_random_walk(const RandomWalkConfig& cfg, long horizon);
Trajectory gen_puddle_world(const PuddleWorldConfig& cfg, long horizon);

// Continuous reward field in [-2, -1]: -1 minus the clamped relative
// penetration depth into the deepest puddle or the boundary band.
double reward_shape(const PuddleWorldConfig& cfg, const Eigen::Vector2d& s);

}  // namespace ostd
