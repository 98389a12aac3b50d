#include "lorentz/wishart.hpp"

#include "lorentz/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lorentz {

namespace {

constexpr double kLogPi = 1.14472988584940017414;

ConePoint draw_at_identity(int m, double eta, Rng& rng) {
  const double y = gamma_variate(rng, 2.0 * eta, 2.0 * eta);
  const double u = beta_variate(rng, 0.5 * m, eta - 0.5 * (m - 1));
  Vector d(m);
  double n = 0.0;
  do {
    for (int i = 0; i < m; ++i) d(i) = standard_normal(rng);
    n = d.norm();
  } while (n == 0.0);
  return ConePoint(y, (y * std::sqrt(u) / n) * d);
}

}  // namespace

void require_shape(int m, double eta) {
  if (!(eta > 0.5 * (m - 1)) || !std::isfinite(eta)) {
    throw std::invalid_argument("shape eta must exceed (m-1)/2 = " + std::to_string(0.5 * (m - 1)) + ", got " +
                                std::to_string(eta));
  }
}

WishartModel::WishartModel(double eta, ConePoint sigma) : eta_(eta), sigma_(std::move(sigma)) {
  AmbientSpace(sigma_.m());
  require_shape(sigma_.m(), eta_);
  require_interior(sigma_, "sigma");
}

double log_normalizer_k(int m, double eta) {
  require_shape(m, eta);
  return std::log(2.0) + 0.5 * (m - 1) * kLogPi + std::lgamma(eta) + std::lgamma(eta - 0.5 * (m - 1)) -
         2.0 * eta * std::log(eta);
}

double log_normalizer(int m, double eta) { return log_normalizer_k(m, eta) - 2.0 * std::log(2.0); }

double log_cone_gamma(double s, int dim) {
  if (dim < 2) throw std::invalid_argument("log_cone_gamma: dim must be >= 2");
  const double shift = 0.5 * (dim - 2);
  if (!(s > shift)) {
    throw std::invalid_argument("log_cone_gamma: pole, need s > " + std::to_string(shift) + ", got " +
                                std::to_string(s));
  }
  return shift * std::log(2.0 * std::numbers::pi) + std::lgamma(s) + std::lgamma(s - shift);
}

double log_cone_beta(double p, double q, int dim) {
  return log_cone_gamma(p, dim) + log_cone_gamma(q, dim) - log_cone_gamma(p + q, dim);
}

double log_density(const WishartModel& model, const ConePoint& x) {
  if (x.m() != model.m()) {
    throw std::invalid_argument("log_density: point dimension does not match model");
  }
  if (!contains(x)) return kLogZero;
  const int m = model.m();
  const double eta = model.eta();
  const ConePoint& s = model.sigma();
  const double det_s = lorentz_det(s);
  return (eta - 0.5 * (m + 1)) * std::log(lorentz_det(x)) - eta * std::log(det_s) -
         2.0 * eta * minkowski_form(s, x) / det_s - log_normalizer(m, eta);
}

double density(const WishartModel& model, const ConePoint& x) { return std::exp(log_density(model, x)); }

double p2_log_density(double eta, const P2Element& sigma, const P2Element& s) {
  const int m = static_cast<int>(sigma.w1.size()) + 1;
  if (s.w1.size() != sigma.w1.size()) {
    throw std::invalid_argument("p2_log_density: dimension mismatch");
  }
  if (!(eta > 0.5 * m)) {
    throw std::invalid_argument("p2_log_density: eta must exceed m/2");
  }
  if (!sigma.interior()) {
    throw ConeError("p2_log_density: Sigma not in P2 cone");
  }
  if (!s.interior()) return kLogZero;
  const double det_sigma = sigma.det();
  // tr(Sigma^{-1} S) for the 2x2 block form.
  const double trace = (sigma.lambda2 * s.lambda1 + sigma.lambda1 * s.lambda2 - 2.0 * sigma.w1.dot(s.w1)) / det_sigma;
  return 2.0 * eta * std::log(eta) + (eta - 0.5 * (m + 1)) * std::log(s.det()) - 0.5 * (m - 1) * kLogPi -
         std::lgamma(eta) - std::lgamma(eta - 0.5 * (m - 1)) - eta * std::log(det_sigma) - eta * trace;
}

ConePoint sample_one(const WishartModel& model, Rng& rng) {
  const ConePoint x = draw_at_identity(model.m(), model.eta(), rng);
  const GroupElement g = boost_to(model.sigma());
  return ConePoint::from_stacked(g.a * (g.A * x.stacked()));
}

std::vector<ConePoint> sample(const WishartModel& model, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  const GroupElement g = boost_to(model.sigma());
  const Matrix map = g.a * g.A;
  std::vector<ConePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ConePoint x = draw_at_identity(model.m(), model.eta(), rng);
    out.push_back(ConePoint::from_stacked(map * x.stacked()));
  }
  return out;
}

}  // namespace lorentz
