#pragma once

#include <Eigen/Core>
#include <string>

namespace ostd {

enum class KernelFamily { kGaussian, kLaplace, kCauchy };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// A shift-invariant kernel kappa(s,s') = magnitude * kbar(s - s') where kbar
// is standardized so that kbar(0) = 1. `lengthscale` is the sigma in
// kbar(d) = exp(-|d|^2 / (2 sigma^2)) for the Gaussian family; `magnitude`
// is the prior variance sigma_theta^2.
struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  double lengthscale = 1.0;
  double magnitude = 1.0;

  void validate() const;  // throws std::invalid_argument
};

// Standardized kernel kbar(s, s') in [0, 1], kbar(s, s) = 1.
double normalized_kernel(const KernelSpec& spec, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& s_prime);

// Full kernel kappa = magnitude * kbar.
double exact_kernel(const KernelSpec& spec, const Eigen::VectorXd& s,
                    const Eigen::VectorXd& s_prime);

}  // namespace ostd
