#pragma once

#include <stdexcept>
#include <string>

namespace ostd {

// Thrown when a linear solve fails even after the one-shot jitter retry.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Runtime numeric failure (underflow, invariant violation) during a run.
// Carries the trajectory/slot location when known (negative = unknown).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, long trajectory = -1,
                        long slot = -1)
      : std::runtime_error(what), trajectory_(trajectory), slot_(slot) {}

  long trajectory() const { return trajectory_; }
  long slot() const { return slot_; }

 private:
  long trajectory_;
  long slot_;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ostd
