#include "ostd/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace ostd {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kGaussian:
      return "gaussian";
    case KernelFamily::kLaplace:
      return "laplace";
    case KernelFamily::kCauchy:
      return "cauchy";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::kGaussian;
  if (name == "laplace") return KernelFamily::kLaplace;
  if (name == "cauchy") return KernelFamily::kCauchy;
  throw std::invalid_argument("unknown kernel family: " + name);
}

void KernelSpec::validate() const {
  if (!(lengthscale > 0.0))
    throw std::invalid_argument("kernel lengthscale must be positive");
  if (!(magnitude > 0.0))
    throw std::invalid_argument("kernel magnitude must be positive");
}

double normalized_kernel(const KernelSpec& spec, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& s_prime) {
  spec.validate();
  if (s.size() != s_prime.size())
    throw std::invalid_argument("kernel inputs must share dimension");
  const Eigen::VectorXd delta = s - s_prime;
  const double sigma = spec.lengthscale;
  switch (spec.family) {
    case KernelFamily::kGaussian:
      return std::exp(-delta.squaredNorm() / (2.0 * sigma * sigma));
    case KernelFamily::kLaplace:
      return std::exp(-delta.lpNorm<1>() / sigma);
    case KernelFamily::kCauchy: {
      double prod = 1.0;
      for (Eigen::Index i = 0; i < delta.size(); ++i) {
        const double z = delta[i] / sigma;
        prod /= 1.0 + z * z;
      }
      return prod;
    }
  }
  throw std::invalid_argument("unknown kernel family");
}

double exact_kernel(const KernelSpec& spec, const Eigen::VectorXd& s,
                    const Eigen::VectorXd& s_prime) {
  return spec.magnitude * normalized_kernel(spec, s, s_prime);
}

}  // namespace ostd
