#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lorentz/group.hpp"
#include "lorentz/mc_verify.hpp"
#include "lorentz/wishart.hpp"

namespace lorentz {
namespace {

constexpr double kPi = std::numbers::pi;

// Integral of det(x)^{eta - (m+1)/2} exp(-2 eta lambda) over L, by polar
// coordinates in w and the Beta integral in the radius:
//   pi^{m/2} Gamma(eta - (m-1)/2) Gamma(2 eta) / (Gamma(eta + 1/2) (2 eta)^{2 eta}).
double log_partition_oracle(int m, double eta) {
  return 0.5 * m * std::log(kPi) + std::lgamma(eta - 0.5 * (m - 1)) + std::lgamma(2.0 * eta) -
         std::lgamma(eta + 0.5) - 2.0 * eta * std::log(2.0 * eta);
}

TEST(NormalizerTest, HandValues) {
  EXPECT_NEAR(log_normalizer_k(2, 2.0), std::log(kPi / 16.0), 1e-14);
  EXPECT_NEAR(log_normalizer_k(1, 1.0), std::log(2.0), 1e-14);
  EXPECT_THROW(log_normalizer_k(3, 1.0), std::invalid_argument);
}

TEST(NormalizerTest, MatchesPartitionFunction) {
  for (int m = 1; m <= 8; ++m) {
    for (double eta : {0.5 * (m - 1) + 0.05, 0.5 * m + 0.3, 1.75 + m, 3.0 * m}) {
      EXPECT_NEAR(log_normalizer(m, eta), log_partition_oracle(m, eta), 1e-12 * (1.0 + std::abs(log_normalizer(m, eta))))
          << "m=" << m << " eta=" << eta;
    }
  }
}

TEST(NormalizerTest, ConeGamma) {
  EXPECT_NEAR(log_cone_gamma(1.0, 2), 0.0, 1e-15);
  EXPECT_NEAR(log_cone_gamma(2.5, 2), 2.0 * std::lgamma(2.5), 1e-14);
  // dim = 3: (2 pi)^{1/2} Gamma(s) Gamma(s - 1/2)
  EXPECT_NEAR(log_cone_gamma(2.0, 3), 0.5 * std::log(2.0 * kPi) + std::lgamma(1.5), 1e-14);
  EXPECT_THROW(log_cone_gamma(0.5, 3), std::invalid_argument);
  EXPECT_NEAR(log_cone_beta(1.0, 1.0, 2), 0.0 - 2.0 * std::lgamma(2.0), 1e-15);
}

TEST(DensityTest, ValueAtIdentity) {
  const WishartModel model(2.0, ConePoint::identity(2));
  EXPECT_NEAR(log_density(model, ConePoint::identity(2)), std::log(64.0 / kPi) - 4.0, 1e-13);
  EXPECT_NEAR(density(model, ConePoint::identity(2)), 64.0 * std::exp(-4.0) / kPi, 1e-14);
}

TEST(DensityTest, OutsideConeIsLogZero) {
  const WishartModel model(2.0, ConePoint::identity(2));
  Vector w(2);
  w << 2.0, 0.0;
  EXPECT_EQ(log_density(model, ConePoint(1.0, w)), kLogZero);
  EXPECT_EQ(density(model, ConePoint(1.0, w)), 0.0);
  EXPECT_THROW(log_density(model, ConePoint::identity(3)), std::invalid_argument);
}

TEST(DensityTest, EquivariantUnderBoost) {
  // f_{g sigma}(g x) |det(g)| = f_sigma(x), with |det g| = a^{m+1}.
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const int m = 1 + k % 4;
    const double eta = 0.5 * m + 0.7;
    const ConePoint sigma = random_interior_point(rng, m);
    const ConePoint x = random_interior_point(rng, m);
    const GroupElement g = boost_to(random_interior_point(rng, m));
    const double lhs = log_density(WishartModel(eta, apply(g, sigma)), apply(g, x)) + (m + 1) * std::log(g.a);
    EXPECT_NEAR(lhs, log_density(WishartModel(eta, sigma), x), 1e-9);
  }
}

TEST(ModelTest, ValidatesParameters) {
  Vector w(2);
  w << 2.0, 0.0;
  try {
    WishartModel(2.0, ConePoint(1.0, w));
    FAIL();
  } catch (const ConeError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma not in Lorentz cone"), std::string::npos);
  }
  EXPECT_THROW(WishartModel(1.0, ConePoint::identity(3)), std::invalid_argument);
  EXPECT_NO_THROW(WishartModel(1.01, ConePoint::identity(3)));
}

TEST(BlockDensityTest, IdentityValueAndRelationToConeDensity) {
  const P2Element id{1.0, 1.0, Vector::Zero(1)};
  EXPECT_NEAR(p2_log_density(2.0, id, id), std::log(32.0 / kPi) - 4.0, 1e-13);

  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 3;
    const double eta = 0.5 * m + 0.6;
    const ConePoint sigma = random_interior_point(rng, m);
    const ConePoint x = random_interior_point(rng, m);
    const double via_p2 = p2_log_density(eta, phi_to_p2(sigma), phi_to_p2(x));
    EXPECT_NEAR(via_p2, log_density(WishartModel(eta, sigma), x) - kLogP2Jacobian, 1e-10);
  }

  const P2Element outside{1.0, 1.0, Vector::Constant(1, 2.0)};
  EXPECT_EQ(p2_log_density(2.0, id, outside), kLogZero);
}

TEST(SampleTest, DeterministicForFixedSeed) {
  const WishartModel model(2.5, ConePoint::identity(3));
  Rng a(7), b(7);
  const auto xa = sample(model, 50, a);
  const auto xb = sample(model, 50, b);
  for (std::size_t i = 0; i < xa.size(); ++i) {
    EXPECT_EQ(xa[i].lambda, xb[i].lambda);
    EXPECT_EQ(xa[i].w, xb[i].w);
    EXPECT_TRUE(contains(xa[i]));
  }
  EXPECT_THROW(sample(model, 0, a), std::invalid_argument);
}

TEST(SampleTest, MeanIsSigma) {
  Vector w(2);
  w << 1.0, 0.0;
  const CheckReport r = run_expectation_check(WishartModel(3.0, ConePoint(2.0, w)), 50000, 4);
  EXPECT_TRUE(r.passed) << r.details.dump();
}

TEST(SampleTest, MatchesDensityMarginals) {
  for (int m : {1, 3}) {
    const CheckReport r = run_sampler_density_check(m, 0.5 * m + 0.75, 20000, 31 + m);
    EXPECT_TRUE(r.passed) << r.details.dump();
    EXPECT_NEAR(r.details["det_cdf_at_max"].get<double>(), 1.0, 1e-3);
  }
}

}  // namespace
}  // namespace lorentz
