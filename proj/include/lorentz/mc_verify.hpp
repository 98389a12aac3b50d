#pragma once

// Seeded Monte Carlo and quadrature checks for the distributional claims of
// the Lorentz Wishart model and its invariant tests.
//
// Every check is a pure function of its parameters and seed. Checks that
// draw from more than one stream derive sub-seeds with derive_seed(seed, tag).
// Checks taking `reference_shift` compare the data (drawn at shape eta)
// against the reference law at shape eta + reference_shift; a nonzero shift
// is the harness power guard and must make the check fail.

#include "lorentz/cone.hpp"
#include "lorentz/invariant_tests.hpp"
#include "lorentz/random.hpp"
#include "lorentz/wishart.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lorentz {

struct CheckReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();
};

// --- helpers -------------------------------------------------------------

/// Interior point with lambda = exp(N(0, 1/4)) and |w| / lambda ~ U(0, 0.9).
ConePoint random_interior_point(Rng& rng, int m);

/// Random interior point of L0, embedded in R x W.
ConePoint random_subcone_point(Rng& rng, const SubconeSplit& split);

/// Integral of the Wishart density over L by nested tanh-sinh quadrature in
/// cone polar coordinates (y, s, theta). Supports m = 1 and m = 2.
double quadrature_normalization(const WishartModel& model);

/// Same integral for the block-cone density over P2(W) for m = 2, in
/// (lambda1, lambda2, w1) coordinates.
double quadrature_p2_normalization(double eta, const P2Element& sigma);

/// Empirical null of the T2 LR from n paired draws at sigma (default e).
NullCalibration calibrate_null(int m, double eta, std::size_t n, std::uint64_t seed,
                               const std::optional<ConePoint>& sigma = std::nullopt);

// --- checks --------------------------------------------------------------

/// m_stat under H0 vs Beta(m1/2, eta - (m-1)/2) and Q^{1/eta} vs
/// Beta(eta - (m-1)/2, m1/2), both KS < 1.63 / sqrt(n).
CheckReport run_beta_law_check(int m, int m0, double eta, std::size_t n, std::uint64_t seed,
                               double reference_shift = 0.0);

/// p-values of T1 under H0 are uniform.
CheckReport run_t1_pvalue_check(int m, int m0, double eta, std::size_t n, std::uint64_t seed,
                                double reference_shift = 0.0);

enum class IndependenceKind { T1, T2 };

enum class Pairing {
  statistic,          ///< (det t, m_stat) and (lambda_t, m_stat) for T1; (det pooled, xi1) for T2
  dependent_control,  ///< (det x, m_stat) for T1; (det t1, xi1) for T2
};

/// 4x4 quantile-binned chi-square independence, passes iff p > 0.01.
CheckReport run_independence_check(IndependenceKind kind, int m, int m0, double eta, std::size_t n,
                                   std::uint64_t seed, Pairing pairing = Pairing::statistic);

enum class MarginalReference {
  subcone,    ///< direct W^{L0}_{eta, sigma} samples
  full_cone,  ///< direct W^{L}_{eta, iota(sigma)} samples (mismatched)
};

/// Two-sample KS of det(t) under H0 against the reference family.
CheckReport run_marginal_check(int m, int m0, double eta, std::size_t n, std::uint64_t seed,
                               MarginalReference reference = MarginalReference::subcone,
                               double reference_shift = 0.0);

/// det(pooled MLE) against W_{eta, sigma} and W_{2 eta, sigma}; passes iff
/// exactly one candidate has p > 0.01 and the other p < 1e-4.
CheckReport run_pooled_mle_check(int m, double eta, std::size_t n, std::uint64_t seed);

/// Max relative violation of m under G0 and of (xi1, xi2) under G, plus the
/// max ||A^T Psi A - Psi||_F over every constructed group element.
CheckReport run_invariance_sweep(std::size_t n_pairs, std::uint64_t seed);

/// |integral - 1| over sigma in {e, a tilted point}.
CheckReport run_normalization_check(int m, double eta);

/// Min reverse Cauchy-Schwarz gap over n random pairs, and max |gap| over
/// 100 proportional pairs.
CheckReport run_reverse_cs_sweep(std::size_t n, std::uint64_t seed);

/// Vieta identities on n random pairs and the worked pair (e, (3, (1, 0))).
CheckReport run_eigen_algebra_check(std::size_t n, std::uint64_t seed);

/// LR == 1 for equal observations.
CheckReport run_lr_unit_check(std::size_t n, std::uint64_t seed);

/// Calibration at e vs. at (2, (1, 0, ...)), two-sample KS distance < 0.02.
CheckReport run_pivotality_check(int m, double eta, std::size_t n, std::uint64_t seed, double reference_shift = 0.0);

/// T2 p-values for H0 pairs at sigma = (2, (1, 0, ...)) are uniform.
CheckReport run_t2_pvalue_check(int m, double eta, std::size_t n_replicates, std::size_t n_calibration,
                                std::uint64_t seed, double reference_shift = 0.0);

/// Integral of the kernel times the Gamma_L / B_L constant is 1 within 1e-2,
/// or the numerical fallback constant is in use and logged.
CheckReport run_eigen_normalization_check(int m, double eta, EigenKernel kernel = EigenKernel::lorentz);

/// 10x10 adaptive-grid chi-square of MC eigenpairs against the normalized
/// eigenpair density, passes iff p > 0.01.
CheckReport run_eigen_density_check(int m, double eta, std::size_t n, std::uint64_t seed, double reference_shift = 0.0,
                                    EigenKernel kernel = EigenKernel::lorentz);

/// match_in_g0 on same-orbit pairs, relative error <= 1e-8.
CheckReport run_maximality_check(std::size_t n_pairs, std::uint64_t seed);

/// Sample mean within 4 standard errors of sigma componentwise.
CheckReport run_expectation_check(const WishartModel& model, std::size_t n, std::uint64_t seed);

/// KS of the y- and det-pushforwards of the sampler at sigma = e against
/// CDFs from numerical integration of the density.
CheckReport run_sampler_density_check(int m, double eta, std::size_t n, std::uint64_t seed);

// --- suites ----------------------------------------------------------------

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckReport> checks;
  bool passed = false;
};

inline constexpr std::uint64_t kAcceptanceSeed = 20240601;

/// The fixed acceptance criteria, each with its pinned parameters.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed);

/// Checks parameterized by a model configuration.
std::vector<CheckReport> run_parametric_suite(int m, int m0, double eta, std::uint64_t seed);

}  // namespace lorentz
