#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lorentz/group.hpp"
#include "lorentz/invariant_tests.hpp"
#include "lorentz/mc_verify.hpp"
#include "lorentz/stats.hpp"
#include "lorentz/wishart.hpp"

namespace lorentz {
namespace {

ConePoint pt(double lambda, std::initializer_list<double> w) {
  Vector v(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) v(i++) = x;
  return ConePoint(lambda, v);
}

// ---- T1 ----

TEST(SubconeInvariantTest, Examples) {
  const SubconeSplit s21(2, 1);
  EXPECT_NEAR(maximal_invariant_m(pt(2, {1, 1}), s21), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(maximal_invariant_m(pt(2, {1, 0}), s21), 0.0);
  EXPECT_THROW(maximal_invariant_m(pt(1, {1, 1}), s21), ConeError);

  const ConePoint t = sufficient_t(pt(2, {1, 1}), s21);
  EXPECT_DOUBLE_EQ(t.lambda, 2.0);
  ASSERT_EQ(t.w.size(), 1);
  EXPECT_DOUBLE_EQ(t.w(0), 1.0);

  const ConePoint in_l0 = pt(1.5, {0.2, 0.0});
  EXPECT_EQ(sufficient_t(in_l0, s21).w(0), 0.2);

  EXPECT_NEAR(lr_subcone(pt(2, {1, 1}), s21, 3.0), 8.0 / 27.0, 1e-15);
  EXPECT_EQ(lr_subcone(in_l0, s21, 3.0), 1.0);

  const ConePoint mle = mle_subcone(pt(2, {1, 1}), s21);
  EXPECT_DOUBLE_EQ(mle.w(0), 1.0);
  EXPECT_EQ(mle_full(ConePoint::identity(2)).lambda, 1.0);
}

TEST(SubconeInvariantTest, LikelihoodRatioIsOneMinusM) {
  Rng rng(1);
  for (int k = 0; k < 500; ++k) {
    const int m = 2 + k % 4;
    const SubconeSplit split(m, 1 + k % (m - 1));
    const double eta = 0.5 * m + 0.3;
    const ConePoint x = random_interior_point(rng, m);
    const double q = lr_subcone(x, split, eta);
    EXPECT_NEAR(q, std::pow(1.0 - maximal_invariant_m(x, split), eta), 1e-12 * q);
    EXPECT_GE(maximal_invariant_m(x, split), 0.0);
    EXPECT_LT(maximal_invariant_m(x, split), 1.0);
  }
}

TEST(SubconeTestTest, PValues) {
  const SubconeSplit split(4, 2);
  // m_stat = 0.19: null Beta(1, 3/2), tail (1 - u)^{3/2}.
  const SubconeTestResult r = subcone_test(pt(1, {0, 0, std::sqrt(0.19), 0}), split, 3.0);
  EXPECT_NEAR(r.m_stat, 0.19, 1e-15);
  EXPECT_NEAR(r.p_value, std::pow(0.81, 1.5), 1e-13);
  EXPECT_DOUBLE_EQ(r.beta_params.alpha, 1.0);
  EXPECT_DOUBLE_EQ(r.beta_params.beta, 1.5);

  const SubconeTestResult z = subcone_test(pt(1, {0.3, 0.1, 0, 0}), split, 3.0);
  EXPECT_EQ(z.p_value, 1.0);
  EXPECT_EQ(z.q_lr, 1.0);
}

TEST(SubconeTestTest, MleIsLocalMaximumUnderNull) {
  // Under H0 the likelihood over sigma in L0 peaks at t = (y, p(z)).
  Rng rng(2);
  const SubconeSplit split(3, 2);
  const double eta = 2.5;
  for (int k = 0; k < 50; ++k) {
    const ConePoint x = random_interior_point(rng, 3);
    const ConePoint t = mle_subcone(x, split);
    ASSERT_EQ(t.m(), 2);
    const double best = log_density(WishartModel(eta, embed_subcone(t, split)), x);
    for (int j = 0; j < 20; ++j) {
      Vector d(2);
      d << 0.02 * standard_normal(rng), 0.02 * standard_normal(rng);
      const ConePoint s(t.lambda * (1.0 + 0.02 * standard_normal(rng)), t.w + t.lambda * d);
      if (!contains(s)) continue;
      EXPECT_LE(log_density(WishartModel(eta, embed_subcone(s, split)), x), best + 1e-12);
    }
    // The unrestricted maximum is x itself.
    EXPECT_GE(log_density(WishartModel(eta, mle_full(x)), x), best - 1e-12);
  }
}

// ---- T2 ----

TEST(EigenpairTest, Examples) {
  const ConePoint s = pt(1.7, {0.3, -0.4});
  const EigenPair same = generalized_eigenvalues(s, s);
  EXPECT_NEAR(same.xi1, 1.0, 1e-15);
  EXPECT_NEAR(same.xi2, 1.0, 1e-15);

  const EigenPair p = generalized_eigenvalues(ConePoint::identity(2), pt(3, {1, 0}));
  EXPECT_NEAR(p.xi1, 4.0, 1e-12);
  EXPECT_NEAR(p.xi2, 2.0, 1e-12);

  EXPECT_NEAR(reverse_cs_gap(ConePoint::identity(2), pt(3, {1, 0})), 1.0, 1e-14);
  EXPECT_EQ(reverse_cs_gap(s, 2.5 * s), 0.0);
  EXPECT_THROW(generalized_eigenvalues(pt(1, {2, 0}), s), ConeError);
}

TEST(EigenpairTest, RootsOfCharacteristicPolynomial) {
  // det(s2 - l s1) vanishes at both roots; compared against |s1|^2 l^2 scale.
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const int m = 1 + k % 5;
    const ConePoint s1 = random_interior_point(rng, m);
    const ConePoint s2 = random_interior_point(rng, m);
    const EigenPair p = generalized_eigenvalues(s1, s2);
    EXPECT_GE(p.xi1, p.xi2);
    EXPECT_GT(p.xi2, 0.0);
    for (double l : {p.xi1, p.xi2}) {
      const ConePoint r = s2 - l * s1;
      const double scale = (s2.lambda + l * s1.lambda) * (s2.lambda + l * s1.lambda);
      EXPECT_NEAR(lorentz_det(r), 0.0, 1e-12 * scale);
    }
  }
}

TEST(EigenpairTest, InvariantUnderGroup) {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const int m = 1 + k % 5;
    const GroupElement g = random_group_element(rng, m);
    const ConePoint s1 = random_interior_point(rng, m);
    const ConePoint s2 = random_interior_point(rng, m);
    const EigenPair a = generalized_eigenvalues(s1, s2);
    const EigenPair b = generalized_eigenvalues(apply(g, s1), apply(g, s2));
    EXPECT_NEAR(a.xi1, b.xi1, 1e-9 * (1.0 + a.xi1));
    EXPECT_NEAR(a.xi2, b.xi2, 1e-9 * (1.0 + a.xi2));
  }
}

TEST(EqualityLrTest, Examples) {
  const ConePoint s = pt(1.2, {0.1, 0.2, 0.3});
  EXPECT_NEAR(lr_equality(s, s, 2.5), 1.0, 1e-12);
  EXPECT_NEAR(std::exp(log_lr_equality({4.0, 2.0}, 1.0)), 128.0 / 225.0, 1e-15);
  EXPECT_NEAR(lr_equality(ConePoint::identity(2), pt(3, {1, 0}), 1.0), 128.0 / 225.0, 1e-13);
  EXPECT_THROW(lr_equality(s, s, 0.5), std::invalid_argument);
}

TEST(EqualityLrTest, PooledMle) {
  const ConePoint p = mle_pooled(pt(1, {0}), pt(3, {0}));
  EXPECT_DOUBLE_EQ(p.lambda, 2.0);
  EXPECT_DOUBLE_EQ(p.w(0), 0.0);
  const ConePoint s = pt(1.2, {0.1});
  EXPECT_DOUBLE_EQ(mle_pooled(s, s).lambda, 1.2);
}

TEST(EqualityLrTest, LrIsProfileLikelihoodRatio) {
  // LR = L(pooled; t1, t2) / (L(t1; t1) L(t2; t2)).
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const int m = 1 + k % 4;
    const double eta = 0.5 * m + 0.4;
    const ConePoint t1 = random_interior_point(rng, m);
    const ConePoint t2 = random_interior_point(rng, m);
    const ConePoint pooled = mle_pooled(t1, t2);
    const double num = log_density(WishartModel(eta, pooled), t1) + log_density(WishartModel(eta, pooled), t2);
    const double den = log_density(WishartModel(eta, t1), t1) + log_density(WishartModel(eta, t2), t2);
    EXPECT_NEAR(num - den, log_lr_equality(generalized_eigenvalues(t1, t2), eta), 1e-9);
  }
}

TEST(EqualityTestTest, CalibrationAndPValue) {
  const NullCalibration calib = calibrate_null(2, 3.0, 2000, 9);
  EXPECT_EQ(calib.n(), 2000u);
  EXPECT_TRUE(std::is_sorted(calib.sorted_lr_values().begin(), calib.sorted_lr_values().end()));
  const ConePoint s = pt(1.5, {0.2, 0.1});
  const EqualityTestResult r = equality_test(s, s, 3.0, calib);
  EXPECT_NEAR(r.lr, 1.0, 1e-12);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_THROW(equality_test(s, s, 2.5, calib), std::invalid_argument);
  EXPECT_THROW(calibrate_null(2, 3.0, 10, 9), std::invalid_argument);
  EXPECT_THROW(NullCalibration(2, 3.0, 1, {0.5, 1.5}), std::invalid_argument);
}

// ---- eigenpair density ----

// Integral over xi1 > xi2 > 0 of the kernel with repulsion exponent m-1:
//   B_L(eta, eta) 2^{(m-3)/2} Gamma(m/2) / pi^{m/2}.
double log_kernel_integral_oracle(int m, double eta) {
  return log_cone_beta(eta, eta, m + 1) + 0.5 * (m - 3) * std::log(2.0) + std::lgamma(0.5 * m) -
         0.5 * m * std::log(std::numbers::pi);
}

TEST(EigenpairDensityTest, KernelIntegralMatchesClosedForm) {
  for (int m = 1; m <= 5; ++m) {
    for (double eta : {0.5 * m + 0.25, 0.5 * m + 1.5, 3.0 + m}) {
      const EigenpairDensity d(m, eta);
      EXPECT_NEAR(std::log(d.kernel_integral()), log_kernel_integral_oracle(m, eta), 1e-8)
          << "m=" << m << " eta=" << eta;
    }
  }
}

TEST(EigenpairDensityTest, FallbackIsLoggedWhenPrintedConstantFails) {
  const EigenpairDensity d(2, 3.0);
  EXPECT_TRUE(d.used_fallback());
  ASSERT_FALSE(d.anomalies().empty());
  EXPECT_NEAR(d.kernel_integral() * std::exp(d.log_constant()), 1.0, 1e-12);
  EXPECT_GT(std::abs(d.printed_constant_integral() - 1.0), 1e-2);
}

TEST(EigenpairDensityTest, EqualEigenvaluesHaveZeroDensity) {
  EXPECT_EQ(eigenpair_log_density({1.5, 1.5}, 3.0, AmbientSpace(2)), kLogZero);
  const EigenpairDensity d(2, 3.0);
  EXPECT_NEAR(d.log_density({2.0, 0.5}), d.log_density({0.5, 2.0}), 1e-14);
  // m = 1 has no repulsion.
  EXPECT_TRUE(std::isfinite(eigenpair_log_density({1.5, 1.5}, 2.0, AmbientSpace(1))));
}

TEST(EigenpairDensityTest, PrintedKernelAgreesOnlyAtThreeDimensions) {
  const EigenpairDensity a(3, 2.5, EigenKernel::lorentz);
  const EigenpairDensity b(3, 2.5, EigenKernel::printed);
  EXPECT_NEAR(a.log_density({3.0, 0.7}), b.log_density({3.0, 0.7}), 1e-12);
  const EigenpairDensity c(2, 2.5, EigenKernel::printed);
  EXPECT_GT(std::abs(EigenpairDensity(2, 2.5).log_density({3.0, 0.7}) - c.log_density({3.0, 0.7})), 1e-3);
}

}  // namespace
}  // namespace lorentz
