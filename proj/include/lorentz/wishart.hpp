#pragma once

// Lorentz-type Wishart distribution W_{eta, sigma} on L, parameterized by its
// expectation sigma. All densities are in log space.

#include "lorentz/cone.hpp"
#include "lorentz/random.hpp"

#include <limits>
#include <vector>

namespace lorentz {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

class WishartModel {
 public:
  /// Requires eta > (m-1)/2 and sigma interior.
  WishartModel(double eta, ConePoint sigma);

  double eta() const { return eta_; }
  const ConePoint& sigma() const { return sigma_; }
  int m() const { return sigma_.m(); }
  AmbientSpace space() const { return AmbientSpace(m()); }

 private:
  double eta_;
  ConePoint sigma_;
};

/// Throws std::invalid_argument unless eta > (m-1)/2.
void require_shape(int m, double eta);

/// log k(m, eta) with k = 2 pi^{(m-1)/2} Gamma(eta) Gamma(eta - (m-1)/2) eta^{-2 eta},
/// the constant as it is usually printed for this family.
double log_normalizer_k(int m, double eta);

/// Log of the constant that actually normalizes the density over L:
///   (1/2) pi^{(m-1)/2} Gamma(eta) Gamma(eta - (m-1)/2) eta^{-2 eta} = k / 4.
double log_normalizer(int m, double eta);

/// log Gamma_L(s) for the Lorentz cone of total dimension dim = m + 1:
///   ((dim-2)/2) log(2 pi) + lgamma(s) + lgamma(s - (dim-2)/2).
double log_cone_gamma(double s, int dim);

/// log B_L(p, q) = log Gamma_L(p) + log Gamma_L(q) - log Gamma_L(p + q).
double log_cone_beta(double p, double q, int dim);

/// log f(x) =
///   (eta - (m+1)/2) log det(x) - eta log det(sigma)
///   - 2 eta Psi(sigma^{-1}, x) - log_normalizer(m, eta),
/// kLogZero outside the open cone.
double log_density(const WishartModel& model, const ConePoint& x);

double density(const WishartModel& model, const ConePoint& x);

/// Andersson-Wojnar density on the block cone P2(W) with respect to
/// d lambda1 d lambda2 d w1. Requires eta > m/2 and Sigma interior.
double p2_log_density(double eta, const P2Element& sigma, const P2Element& s);

/// log |det d(phi^{-1})| = log 2: dS = 2 dy dz, so
/// log_density(phi(S)) = p2_log_density(S) + kLogP2Jacobian.
inline constexpr double kLogP2Jacobian = 0.69314718055994530942;

/// One exact draw. At sigma = e: y ~ Gamma(2 eta, rate 2 eta),
/// u ~ Beta(m/2, eta - (m-1)/2), d uniform on S^{m-1}, x = (y, y sqrt(u) d);
/// general sigma by the boost taking e to sigma.
ConePoint sample_one(const WishartModel& model, Rng& rng);

std::vector<ConePoint> sample(const WishartModel& model, std::size_t n, Rng& rng);

}  // namespace lorentz
