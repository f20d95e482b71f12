#include "ostd/random_features.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ostd/rng.hpp"

namespace ostd {

RFMap RFMap::sample(const KernelSpec& spec, int num_features, int state_dim,
                    std::uint64_t seed) {
  spec.validate();
  if (num_features < 1)
    throw std::invalid_argument("num_features must be >= 1");
  if (state_dim < 1) throw std::invalid_argument("state_dim must be >= 1");

  SplitMix64 rng(derive_stream(seed, StreamPurpose::kRfFrequencies));
  const double inv_sigma = 1.0 / spec.lengthscale;
  Eigen::MatrixXd freq(num_features, state_dim);
  for (int i = 0; i < num_features; ++i) {
    for (int j = 0; j < state_dim; ++j) {
      switch (spec.family) {
        case KernelFamily::kGaussian:
          freq(i, j) = inv_sigma * rng.next_normal();
          break;
        case KernelFamily::kLaplace:
          freq(i, j) = rng.next_cauchy(inv_sigma);
          break;
        case KernelFamily::kCauchy:
          freq(i, j) = rng.next_laplace(inv_sigma);
          break;
      }
    }
  }
  return RFMap(spec, std::move(freq), seed);
}

RFMap::RFMap(const KernelSpec& spec, Eigen::MatrixXd frequencies,
             std::uint64_t seed)
    : spec_(spec), frequencies_(std::move(frequencies)), seed_(seed) {
  spec_.validate();
  if (frequencies_.rows() < 1 || frequencies_.cols() < 1)
    throw std::invalid_argument("frequency matrix must be nonempty");
}

Eigen::VectorXd RFMap::feature_map(const Eigen::VectorXd& s) const {
  if (s.size() != frequencies_.cols())
    throw std::invalid_argument("state dimension mismatch in feature_map");
  const Eigen::VectorXd proj = frequencies_ * s;
  const int d_count = num_features();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_count));
  Eigen::VectorXd phi(2 * d_count);
  for (int i = 0; i < d_count; ++i) {
    phi[2 * i] = scale * std::sin(proj[i]);
    phi[2 * i + 1] = scale * std::cos(proj[i]);
  }
  return phi;
}

double RFMap::approx_kernel(const Eigen::VectorXd& s,
                            const Eigen::VectorXd& s_prime) const {
  return feature_map(s).dot(feature_map(s_prime));
}

}  // namespace ostd
