#pragma once

// Goodness-of-fit and special-function helpers used by the tests and the
// verification harness.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lorentz {

/// Regularized incomplete beta I_u(alpha, beta). Throws for u outside [0, 1]
/// or non-positive parameters.
double beta_cdf(double u, double alpha, double beta);

/// 1 - I_u(alpha, beta), computed without cancellation.
double beta_sf(double u, double alpha, double beta);

/// P(X >= x) for X ~ chi-square(dof).
double chi_square_sf(double x, double dof);

/// Asymptotic Kolmogorov tail P(K > t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_sf(double t);

/// Two-sided one-sample KS distance sup |F_n - F|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS distance sup |F_n - G_k|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic p-value of a two-sample KS distance.
double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2);

/// Critical value c(alpha) * sqrt((n1 + n2) / (n1 n2)) with c(0.01) = 1.628.
double ks_two_sample_critical(std::size_t n1, std::size_t n2);

/// Asymptotic one-sample KS critical value at alpha ~ 0.01, 1.63 / sqrt(n).
inline double ks_critical_001(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

/// Bin edges at empirical quantiles: `bins - 1` interior cut points.
std::vector<double> quantile_edges(std::span<const double> v, int bins);

/// Index of the bin containing x given interior cut points.
int bin_index(const std::vector<double>& cuts, double x);

struct ContingencyResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double min_expected = 0.0;
  std::vector<std::vector<std::size_t>> counts;
};

/// Pearson chi-square test of independence on a quantile-binned
/// `bins x bins` table of paired observations.
ContingencyResult chi_square_independence(std::span<const double> x, std::span<const double> y, int bins);

}  // namespace lorentz
