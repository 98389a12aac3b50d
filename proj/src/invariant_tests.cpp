#include "lorentz/invariant_tests.hpp"

#include "lorentz/stats.hpp"
#include "lorentz/wishart.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lorentz {

// --- T1 ------------------------------------------------------------------

double maximal_invariant_m(const ConePoint& x, const SubconeSplit& split) {
  require_interior(x, "maximal_invariant_m: x");
  const SubconeProjection p = project_w0(x, split);
  return p.complement.squaredNorm() / lorentz_det(p.subcone_part);
}

ConePoint sufficient_t(const ConePoint& x, const SubconeSplit& split) {
  require_interior(x, "sufficient_t: x");
  return project_w0(x, split).subcone_part;
}

double lr_subcone(const ConePoint& x, const SubconeSplit& split, double eta) {
  require_shape(split.m(), eta);
  const ConePoint t = sufficient_t(x, split);
  return std::pow(lorentz_det(x) / lorentz_det(t), eta);
}

BetaParams subcone_null_law(const SubconeSplit& split, double eta) {
  require_shape(split.m(), eta);
  return {0.5 * split.m1(), eta - 0.5 * (split.m() - 1)};
}

SubconeTestResult subcone_test(const ConePoint& x, const SubconeSplit& split, double eta) {
  SubconeTestResult r;
  r.beta_params = subcone_null_law(split, eta);
  r.m_stat = maximal_invariant_m(x, split);
  r.q_lr = lr_subcone(x, split, eta);
  r.t_stat = sufficient_t(x, split);
  r.p_value = beta_sf(std::clamp(r.m_stat, 0.0, 1.0), r.beta_params.alpha, r.beta_params.beta);
  return r;
}

ConePoint mle_full(const ConePoint& x) {
  require_interior(x, "mle_full: x");
  return x;
}

ConePoint mle_subcone(const ConePoint& x, const SubconeSplit& split) { return sufficient_t(x, split); }

// --- T2 ------------------------------------------------------------------

double reverse_cs_gap(const ConePoint& s1, const ConePoint& s2) {
  require_interior(s1, "reverse_cs_gap: s1");
  require_interior(s2, "reverse_cs_gap: s2");
  if (s1.m() != s2.m()) throw std::invalid_argument("reverse_cs_gap: dimension mismatch");
  const double nw = s1.w.norm();
  const double nu = s2.w.norm();
  const double radial = s1.lambda * nu - s2.lambda * nw;
  double angular = 0.0;
  if (nw > 0.0 && nu > 0.0) {
    // |w||u| - w.u = (1/2)|w||u| |w/|w| - u/|u||^2
    const double half_chord = 0.5 * nw * nu * (s1.w / nw - s2.w / nu).squaredNorm();
    angular = half_chord * (2.0 * s1.lambda * s2.lambda - nw * nu - s1.w.dot(s2.w));
  }
  return radial * radial + angular;
}

EigenPair generalized_eigenvalues(const ConePoint& s1, const ConePoint& s2) {
  const double gap = reverse_cs_gap(s1, s2);
  if (gap < -1e-12) {
    throw std::runtime_error("generalized_eigenvalues: negative discriminant, numerical inconsistency");
  }
  const double d1 = lorentz_det(s1);
  const double d2 = lorentz_det(s2);
  const double dot = minkowski_form(s1, s2);
  EigenPair p;
  p.xi1 = (dot + std::sqrt(std::max(gap, 0.0))) / d1;
  p.xi2 = d2 / (d1 * p.xi1);
  return p;
}

double log_lr_equality(const EigenPair& pair, double eta) {
  if (!(pair.xi1 > 0.0) || !(pair.xi2 > 0.0)) {
    throw std::invalid_argument("log_lr_equality: eigenvalues must be positive");
  }
  const double v = std::log(16.0) + std::log(pair.xi1) + std::log(pair.xi2) - 2.0 * std::log1p(pair.xi1) -
                   2.0 * std::log1p(pair.xi2);
  // xi / (1 + xi)^2 <= 1/4, so the ratio never exceeds one.
  return eta * std::min(v, 0.0);
}

double lr_equality(const ConePoint& t1, const ConePoint& t2, double eta) {
  require_shape(t1.m(), eta);
  return std::exp(log_lr_equality(generalized_eigenvalues(t1, t2), eta));
}

ConePoint mle_pooled(const ConePoint& t1, const ConePoint& t2) {
  require_interior(t1, "mle_pooled: t1");
  require_interior(t2, "mle_pooled: t2");
  return 0.5 * (t1 + t2);
}

// --- eigenvalue-pair density ------------------------------------------------

namespace {

double repulsion_exponent(int m, EigenKernel kernel) { return kernel == EigenKernel::lorentz ? m - 1.0 : 2.0; }

// log kernel at xi1 = u/(1-u), xi2 = uv/(1-uv), plus log |d(xi1, xi2)/d(u, v)|.
double log_kernel_uv(double u, double v, int m, double eta, double rep) {
  const double uv = u * v;
  const double xi1 = u / (1.0 - u);
  const double xi2 = uv / (1.0 - uv);
  const double gap = u * (1.0 - v) / ((1.0 - u) * (1.0 - uv));
  const double a = eta - 0.5 * (m + 1);
  double lk = a * (std::log(xi1) + std::log(xi2)) - 2.0 * eta * (std::log1p(xi1) + std::log1p(xi2));
  if (rep != 0.0) lk += rep * std::log(gap);
  const double jac = std::log(u) - 2.0 * std::log1p(-u) - 2.0 * std::log1p(-uv);
  return lk + jac;
}

}  // namespace

double log_printed_eigen_constant(int m, double eta) {
  const int n = m + 1;
  return (n - 2) * std::log(2.0 * std::numbers::pi) - log_cone_beta(eta, eta, n) - log_cone_gamma(n - 2.0, n);
}

EigenpairDensity::EigenpairDensity(int m, double eta, EigenKernel kernel) : m_(m), eta_(eta), kernel_(kernel) {
  AmbientSpace space(m);
  require_shape(m, eta);
  const double rep = repulsion_exponent(m, kernel);

  boost::math::quadrature::tanh_sinh<double> integrator;
  auto inner = [&](double u) {
    return integrator.integrate(
        [&](double v) {
          const double lk = log_kernel_uv(u, v, m, eta, rep);
          return std::isfinite(lk) ? std::exp(lk) : 0.0;
        },
        0.0, 1.0, 1e-12);
  };
  kernel_integral_ = integrator.integrate(inner, 0.0, 1.0, 1e-11);

  double log_printed = std::numeric_limits<double>::quiet_NaN();
  try {
    log_printed = log_printed_eigen_constant(m, eta);
  } catch (const std::invalid_argument&) {
  }
  printed_integral_ = std::exp(log_printed) * kernel_integral_;
  if (std::isfinite(printed_integral_) && std::abs(printed_integral_ - 1.0) <= 1e-2) {
    log_constant_ = log_printed;
  } else {
    fallback_ = true;
    log_constant_ = -std::log(kernel_integral_);
    std::ostringstream os;
    os.precision(6);
    os << "eigenpair density: Gamma_L/B_L constant integrates to " << printed_integral_ << " at m=" << m
       << ", eta=" << eta << "; using numerically integrated constant " << std::exp(log_constant_);
    anomalies_.push_back(os.str());
  }
}

double EigenpairDensity::log_kernel(const EigenPair& pair) const {
  if (!(pair.xi1 > 0.0) || !(pair.xi2 > 0.0)) {
    throw std::invalid_argument("eigenpair density: eigenvalues must be positive");
  }
  const double rep = repulsion_exponent(m_, kernel_);
  const double diff = std::abs(pair.xi1 - pair.xi2);
  if (rep > 0.0 && diff == 0.0) return kLogZero;
  const double a = eta_ - 0.5 * (m_ + 1);
  double lk = a * (std::log(pair.xi1) + std::log(pair.xi2)) -
              2.0 * eta_ * (std::log1p(pair.xi1) + std::log1p(pair.xi2));
  if (rep != 0.0) lk += rep * std::log(diff);
  return lk;
}

double EigenpairDensity::log_density_uv(double u, double v) const {
  return log_kernel_uv(u, v, m_, eta_, repulsion_exponent(m_, kernel_)) + log_constant_;
}

double eigenpair_log_density(const EigenPair& pair, double eta, const AmbientSpace& space) {
  return EigenpairDensity(space.m(), eta).log_density(pair);
}

// --- calibration and T2 -------------------------------------------------------

NullCalibration::NullCalibration(int m, double eta, std::uint64_t seed, std::vector<double> lr_values)
    : m_(m), eta_(eta), seed_(seed), sorted_(std::move(lr_values)) {
  if (sorted_.empty()) throw std::invalid_argument("NullCalibration: no values");
  for (double v : sorted_) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("NullCalibration: LR values must lie in (0, 1]");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double NullCalibration::p_value(double lr) const {
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), lr) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

EqualityTestResult equality_test(const ConePoint& t1, const ConePoint& t2, double eta, const NullCalibration& calib) {
  if (t1.m() != t2.m()) throw std::invalid_argument("equality_test: dimension mismatch");
  if (calib.m() != t1.m() || std::abs(calib.eta() - eta) > 1e-12 * std::max(1.0, eta)) {
    throw std::invalid_argument("equality_test: calibration was built for different (m, eta)");
  }
  require_shape(t1.m(), eta);
  EqualityTestResult r;
  r.eigen = generalized_eigenvalues(t1, t2);
  r.lr = std::exp(log_lr_equality(r.eigen, eta));
  r.pooled_mle = mle_pooled(t1, t2);
  r.p_value = calib.p_value(r.lr);
  return r;
}

}  // namespace lorentz
