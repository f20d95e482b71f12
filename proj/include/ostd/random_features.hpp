#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "ostd/kernel.hpp"

namespace ostd {

// A frozen draw of D spectral frequency vectors. The induced feature map
//   phi(s) = (1/sqrt(D)) [sin(z_1's), cos(z_1's), ..., sin(z_D's), cos(z_D's)]
// has exactly unit Euclidean norm for every s, and phi(s)'phi(s') is an
// unbiased Monte Carlo estimate of the standardized kernel.
//
// Immutable after construction; safe to share across threads. Frequencies
// are a pure function of (spec, D, d, seed), so snapshots store only those.
class RFMap {
 public:
  // Draws D i.i.d. frequency rows from the spectral density of the
  // standardized kernel (Gaussian kernel -> normal with per-coordinate
  // std 1/sigma; Laplace kernel -> Cauchy(1/sigma); Cauchy kernel ->
  // Laplace(1/sigma)). Laplace/Cauchy draws use per-coordinate inverse CDF.
  static RFMap sample(const KernelSpec& spec, int num_features, int state_dim,
                      std::uint64_t seed);

  // Wraps an explicit frequency matrix (rows are frequency vectors).
  // Used by tests and custom maps; `sample` is the normal entry point.
  RFMap(const KernelSpec& spec, Eigen::MatrixXd frequencies,
        std::uint64_t seed);

  // 2D-dimensional feature vector, interleaved [sin, cos, sin, cos, ...].
  Eigen::VectorXd feature_map(const Eigen::VectorXd& s) const;

  // phi(s)'phi(s'), always in [-1, 1].
  double approx_kernel(const Eigen::VectorXd& s,
                       const Eigen::VectorXd& s_prime) const;

  const KernelSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }
  int num_features() const { return static_cast<int>(frequencies_.rows()); }
  int state_dim() const { return static_cast<int>(frequencies_.cols()); }
  int feature_dim() const { return 2 * num_features(); }
  std::uint64_t seed() const { return seed_; }

 private:
  KernelSpec spec_;
  Eigen::MatrixXd frequencies_;  // D x d
  std::uint64_t seed_;
};

}  // namespace ostd
