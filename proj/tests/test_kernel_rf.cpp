#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ostd/kernel.hpp"
#include "ostd/random_features.hpp"
#include "ostd/rng.hpp"
#include "ostd/snapshot.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace ostd;

namespace {

KernelSpec gaussian(double lengthscale, double magnitude = 1.0) {
  return KernelSpec{KernelFamily::kGaussian, lengthscale, magnitude};
}

VectorXd random_state(SplitMix64& rng, int dim, double scale = 1.0) {
  VectorXd s(dim);
  for (int i = 0; i < dim; ++i) s[i] = scale * rng.next_normal();
  return s;
}

}  // namespace

TEST_SUITE("kernel_rf") {

TEST_CASE("exact kernel closed forms") {
  VectorXd a(2), b(2);
  a << 0.3, -0.7;
  b = a;
  CHECK(exact_kernel(gaussian(1.0), a, b) == doctest::Approx(1.0));
  CHECK(exact_kernel(gaussian(1.0, 4.0), a, b) == doctest::Approx(4.0));

  b << a[0] + 1.0, a[1] + 1.0;  // |a-b| = sqrt(2)
  CHECK(exact_kernel(gaussian(1.0), a, b) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  KernelSpec laplace{KernelFamily::kLaplace, 2.0, 1.0};
  CHECK(exact_kernel(laplace, a, b) ==
        doctest::Approx(std::exp(-2.0 / 2.0)).epsilon(1e-12));

  KernelSpec cauchy{KernelFamily::kCauchy, 1.0, 1.0};
  CHECK(exact_kernel(cauchy, a, b) == doctest::Approx(0.25).epsilon(1e-12));

  VectorXd c(3);
  CHECK_THROWS_AS((void)exact_kernel(gaussian(1.0), a, c),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)exact_kernel(gaussian(-1.0), a, b),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)exact_kernel(gaussian(1.0, 0.0), a, b),
                  std::invalid_argument);
}

TEST_CASE("frequency sampling is deterministic in the seed") {
  const RFMap m1 = RFMap::sample(gaussian(1.0), 3, 2, 7);
  const RFMap m2 = RFMap::sample(gaussian(1.0), 3, 2, 7);
  CHECK(m1.frequencies().rows() == 3);
  CHECK(m1.frequencies().cols() == 2);
  CHECK((m1.frequencies() - m2.frequencies()).cwiseAbs().maxCoeff() == 0.0);

  const RFMap m3 = RFMap::sample(gaussian(1.0), 3, 2, 8);
  CHECK((m1.frequencies() - m3.frequencies()).cwiseAbs().maxCoeff() > 0.0);

  CHECK_THROWS_AS(RFMap::sample(gaussian(1.0), 0, 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(RFMap::sample(gaussian(1.0), 3, 0, 7), std::invalid_argument);
}

TEST_CASE("huge lengthscale concentrates frequencies at zero") {
  const RFMap map = RFMap::sample(gaussian(1e12), 200, 2, 3);
  CHECK(map.frequencies().array().square().mean() < 1e-12);
}

TEST_CASE("gaussian spectral draws have the right variance") {
  const RFMap map = RFMap::sample(gaussian(1.0), 10000, 2, 11);
  for (int j = 0; j < 2; ++j) {
    const auto col = map.frequencies().col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / (col.size() - 1);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("feature map hand values") {
  MatrixXd zero_freq = MatrixXd::Zero(1, 3);
  const RFMap map(gaussian(1.0), zero_freq, 0);
  VectorXd s(3);
  s << 0.4, -2.0, 5.5;
  const VectorXd phi = map.feature_map(s);
  REQUIRE(phi.size() == 2);
  CHECK(phi[0] == doctest::Approx(0.0));
  CHECK(phi[1] == doctest::Approx(1.0));

  MatrixXd half_pi(1, 1);
  half_pi << M_PI / 2.0;
  const RFMap map1(gaussian(1.0), half_pi, 0);
  VectorXd one(1);
  one << 1.0;
  const VectorXd phi1 = map1.feature_map(one);
  CHECK(phi1[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi1[1] == doctest::Approx(0.0).epsilon(1e-12));

  VectorXd wrong(2);
  CHECK_THROWS_AS((void)map1.feature_map(wrong), std::invalid_argument);
}

TEST_CASE("feature vectors have exactly unit norm") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const RFMap map = RFMap::sample(gaussian(0.5 + rng.next_double()), 17, 4,
                                    1000 + trial);
    const VectorXd s = random_state(rng, 4, 3.0);
    CHECK(std::abs(map.feature_map(s).squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("approximate kernel basic identities") {
  SplitMix64 rng(5);
  const RFMap map = RFMap::sample(gaussian(1.0), 64, 3, 17);
  const VectorXd s = random_state(rng, 3);
  const VectorXd s2 = random_state(rng, 3);
  CHECK(map.approx_kernel(s, s) == doctest::Approx(1.0).epsilon(1e-12));
  // Symmetry is exact: same products, same summation order.
  CHECK(map.approx_kernel(s, s2) == map.approx_kernel(s2, s));
  CHECK(std::abs(map.approx_kernel(s, s2)) <= 1.0 + 1e-12);

  const RFMap constant(gaussian(1.0), MatrixXd::Zero(1, 3), 0);
  CHECK(constant.approx_kernel(s, s2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform Monte Carlo error at D=2000") {
  const RFMap map = RFMap::sample(gaussian(1.0), 2000, 2, 29);
  SplitMix64 rng(30);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const VectorXd a = random_state(rng, 2);
    const VectorXd b = random_state(rng, 2);
    const double err =
        std::abs(map.approx_kernel(a, b) - normalized_kernel(gaussian(1.0), a, b));
    worst = std::max(worst, err);
  }
  CHECK(worst < 0.1);
}

TEST_CASE("mean absolute error decreases with D") {
  SplitMix64 rng(77);
  std::vector<std::pair<VectorXd, VectorXd>> pairs;
  for (int i = 0; i < 50; ++i)
    pairs.emplace_back(random_state(rng, 2), random_state(rng, 2));

  const KernelSpec spec = gaussian(1.0);
  std::vector<double> mae;
  for (int d_count : {10, 100, 1000}) {
    double total = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
      const RFMap map = RFMap::sample(spec, d_count, 2, 500 + seed);
      for (const auto& [a, b] : pairs)
        total += std::abs(map.approx_kernel(a, b) - normalized_kernel(spec, a, b));
    }
    mae.push_back(total / (20.0 * pairs.size()));
  }
  CHECK(mae[0] > mae[1]);
  CHECK(mae[1] > mae[2]);
}

TEST_CASE("laplace and cauchy spectral pairings reproduce their kernels") {
  SplitMix64 rng(123);
  for (KernelFamily family : {KernelFamily::kLaplace, KernelFamily::kCauchy}) {
    const KernelSpec spec{family, 1.5, 1.0};
    double total = 0.0;
    int count = 0;
    for (int seed = 0; seed < 5; ++seed) {
      const RFMap map = RFMap::sample(spec, 4000, 2, 9000 + seed);
      for (int i = 0; i < 10; ++i) {
        const VectorXd a = random_state(rng, 2);
        const VectorXd b = random_state(rng, 2);
        total += std::abs(map.approx_kernel(a, b) - normalized_kernel(spec, a, b));
        ++count;
      }
    }
    CHECK(total / count < 0.03);
  }
}

TEST_CASE("feature gram matrix is positive semi-definite") {
  SplitMix64 rng(41);
  const RFMap map = RFMap::sample(gaussian(0.7), 12, 3, 55);
  const int n = 30;
  MatrixXd phi(n, map.feature_dim());
  for (int i = 0; i < n; ++i)
    phi.row(i) = map.feature_map(random_state(rng, 3)).transpose();
  const MatrixXd gram = phi * phi.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  CHECK(eig.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("snapshot stores the seed and re-derives frequencies") {
  const RFMap map = RFMap::sample(
      KernelSpec{KernelFamily::kLaplace, 0.4, 2.5}, 9, 4, 321);
  const RFMap restored = rf_map_from_snapshot(to_snapshot(map));
  CHECK(restored.num_features() == 9);
  CHECK(restored.state_dim() == 4);
  CHECK(restored.seed() == 321);
  CHECK(restored.spec().lengthscale == doctest::Approx(0.4));
  CHECK(restored.spec().magnitude == doctest::Approx(2.5));
  CHECK((restored.frequencies() - map.frequencies()).cwiseAbs().maxCoeff() ==
        0.0);
}

}  // TEST_SUITE
