#pragma once

#include <cmath>
#include <cstdint>

namespace ostd {

// Named sub-streams derived from one master seed. Each (purpose, index)
// pair owns an independent stream, so adding experts or trajectories never
// perturbs draws consumed by earlier ones.
enum class StreamPurpose : std::uint64_t {
  kGeneric = 0,
  kRfFrequencies = 1,
  kEnvEmbedding = 2,
  kEnvReward = 3,
  kEnvStart = 4,
  kEnvMotion = 5,
  kEnvChoice = 6,
  kTrajectorySeed = 7,
};

namespace detail {
// SplitMix64 output function (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t derive_stream(std::uint64_t seed, StreamPurpose purpose,
                                   std::uint64_t index = 0) {
  std::uint64_t h = detail::mix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
  h = detail::mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = detail::mix64(h ^ index);
  return h;
}

// Counter-based generator: state advances by a fixed odd increment and the
// output is a bijective hash of the counter. Draw count is deterministic,
// independent of platform libm and of std:: distribution internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe for logs and tangents.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_normal() {
    const double u1 = next_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
  }

  // Cauchy(0, scale) by inverse CDF.
  double next_cauchy(double scale) {
    return scale * std::tan(3.141592653589793238463 * (next_open() - 0.5));
  }

  // Laplace(0, scale) by inverse CDF.
  double next_laplace(double scale) {
    const double u = next_open() - 0.5;
    const double s = (u < 0.0) ? -1.0 : 1.0;
    return -scale * s * std::log1p(-2.0 * std::abs(u));
  }

 private:
  std::uint64_t state_;
};

}  // namespace ostd
