#include "lorentz/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lorentz {

namespace {

void check_beta_args(double u, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("beta_cdf: parameters must be positive");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("beta_cdf: u must lie in [0, 1], got " + std::to_string(u));
  }
}

}  // namespace

double beta_cdf(double u, double alpha, double beta) {
  check_beta_args(u, alpha, beta);
  return boost::math::ibeta(alpha, beta, u);
}

double beta_sf(double u, double alpha, double beta) {
  check_beta_args(u, alpha, beta);
  return boost::math::ibetac(alpha, beta, u);
}

double chi_square_sf(double x, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double kolmogorov_sf(double t) {
  if (t <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (t < 1.18) {
    // Jacobi theta form converges fast for small t.
    const double y = std::exp(-pi * pi / (8.0 * t * t));
    double s = 0.0;
    for (int k = 1; k <= 9; k += 2) s += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / t * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - f, f - di / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double en = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2));
  return kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
}

double ks_two_sample_critical(std::size_t n1, std::size_t n2) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return 1.628 * std::sqrt((a + b) / (a * b));
}

std::vector<double> quantile_edges(std::span<const double> v, int bins) {
  if (v.empty() || bins < 1) throw std::invalid_argument("quantile_edges: empty input or no bins");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (int k = 1; k < bins; ++k) {
    const auto idx = static_cast<std::size_t>(static_cast<double>(k) * static_cast<double>(sorted.size()) / bins);
    cuts.push_back(sorted[std::min(idx, sorted.size() - 1)]);
  }
  return cuts;
}

int bin_index(const std::vector<double>& cuts, double x) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
}

ContingencyResult chi_square_independence(std::span<const double> x, std::span<const double> y, int bins) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("chi_square_independence: need equal, nonempty samples");
  }
  const auto cx = quantile_edges(x, bins);
  const auto cy = quantile_edges(y, bins);
  ContingencyResult r;
  r.counts.assign(bins, std::vector<std::size_t>(bins, 0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++r.counts[bin_index(cx, x[i])][bin_index(cy, y[i])];
  }
  std::vector<double> row(bins, 0.0), col(bins, 0.0);
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      row[i] += static_cast<double>(r.counts[i][j]);
      col[j] += static_cast<double>(r.counts[i][j]);
    }
  }
  const double n = static_cast<double>(x.size());
  r.min_expected = n;
  int used_rows = 0, used_cols = 0;
  for (int i = 0; i < bins; ++i) used_rows += row[i] > 0.0;
  for (int j = 0; j < bins; ++j) used_cols += col[j] > 0.0;
  if (used_rows < 2 || used_cols < 2) {
    throw std::invalid_argument("chi_square_independence: a sample has a single distinct bin");
  }
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      const double e = row[i] * col[j] / n;
      if (e <= 0.0) continue;
      r.min_expected = std::min(r.min_expected, e);
      const double diff = static_cast<double>(r.counts[i][j]) - e;
      r.statistic += diff * diff / e;
    }
  }
  r.dof = static_cast<double>((used_rows - 1) * (used_cols - 1));
  if (r.min_expected < 5.0) {
    throw std::runtime_error("chi_square_independence: expected cell count below 5");
  }
  r.p_value = r.dof > 0.0 ? chi_square_sf(r.statistic, r.dof) : 1.0;
  return r;
}

}  // namespace lorentz
