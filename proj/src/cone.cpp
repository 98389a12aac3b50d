#include "lorentz/cone.hpp"

#include <cmath>
#include <sstream>

namespace lorentz {

AmbientSpace::AmbientSpace(int m) : m_(m) {
  if (m < 1) {
    throw std::invalid_argument("AmbientSpace: m must be >= 1, got " + std::to_string(m));
  }
}

ConePoint ConePoint::identity(int m) { return ConePoint(1.0, Vector::Zero(m)); }

Vector ConePoint::stacked() const {
  Vector v(w.size() + 1);
  v(0) = lambda;
  v.tail(w.size()) = w;
  return v;
}

ConePoint ConePoint::from_stacked(const Vector& v) {
  if (v.size() < 2) {
    throw std::invalid_argument("ConePoint::from_stacked: need at least 2 coordinates");
  }
  return ConePoint(v(0), v.tail(v.size() - 1));
}

ConePoint& ConePoint::operator+=(const ConePoint& o) {
  if (o.w.size() != w.size()) {
    throw std::invalid_argument("ConePoint: dimension mismatch");
  }
  lambda += o.lambda;
  w += o.w;
  return *this;
}

ConePoint& ConePoint::operator*=(double c) {
  lambda *= c;
  w *= c;
  return *this;
}

ConePoint operator+(ConePoint a, const ConePoint& b) { return a += b; }

ConePoint operator-(const ConePoint& a, const ConePoint& b) {
  ConePoint r = a;
  r += (-1.0) * b;
  return r;
}

ConePoint operator*(double c, ConePoint x) { return x *= c; }

double P2Element::det() const { return lambda1 * lambda2 - w1.squaredNorm(); }

bool P2Element::interior() const { return lambda1 > 0.0 && lambda2 > 0.0 && det() > 0.0; }

SubconeSplit::SubconeSplit(int m, int m0) : m_(m), m0_(m0) {
  if (m0 < 1 || m0 >= m) {
    throw std::invalid_argument("SubconeSplit: need 1 <= m0 < m, got m=" + std::to_string(m) +
                                ", m0=" + std::to_string(m0));
  }
}

double minkowski_form(const ConePoint& x, const ConePoint& y) {
  if (x.w.size() != y.w.size()) {
    throw std::invalid_argument("minkowski_form: dimension mismatch");
  }
  return x.lambda * y.lambda - x.w.dot(y.w);
}

double lorentz_det(const ConePoint& x) {
  const double r = x.w.norm();
  return (x.lambda - r) * (x.lambda + r);
}

bool contains(const ConePoint& x) { return x.lambda > 0.0 && lorentz_det(x) > 0.0; }

void require_interior(const ConePoint& x, const char* what) {
  if (!contains(x)) {
    throw ConeError(std::string(what) + " not in Lorentz cone: " + to_string(x));
  }
}

ConePoint jordan_inverse(const ConePoint& x) {
  require_interior(x, "jordan_inverse: argument");
  const double d = lorentz_det(x);
  return ConePoint(x.lambda / d, -x.w / d);
}

ConePoint phi_from_p2(const P2Element& s) {
  Vector w(s.w1.size() + 1);
  w(0) = 0.5 * (s.lambda1 - s.lambda2);
  w.tail(s.w1.size()) = s.w1;
  return ConePoint(0.5 * (s.lambda1 + s.lambda2), std::move(w));
}

P2Element phi_to_p2(const ConePoint& x) {
  if (x.w.size() < 1) {
    throw std::invalid_argument("phi_to_p2: W must be nonzero");
  }
  P2Element s;
  s.lambda1 = x.lambda + x.w(0);
  s.lambda2 = x.lambda - x.w(0);
  s.w1 = x.w.tail(x.w.size() - 1);
  return s;
}

SubconeProjection project_w0(const ConePoint& x, const SubconeSplit& split) {
  if (x.m() != split.m()) {
    throw std::invalid_argument("project_w0: point has m=" + std::to_string(x.m()) +
                                " but split has m=" + std::to_string(split.m()));
  }
  return {ConePoint(x.lambda, x.w.head(split.m0())), x.w.tail(split.m1())};
}

ConePoint embed_subcone(const ConePoint& x0, const SubconeSplit& split) {
  if (x0.m() != split.m0()) {
    throw std::invalid_argument("embed_subcone: point is not in R x W0");
  }
  Vector w = Vector::Zero(split.m());
  w.head(split.m0()) = x0.w;
  return ConePoint(x0.lambda, std::move(w));
}

std::string to_string(const ConePoint& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.lambda << ", [";
  for (Eigen::Index i = 0; i < x.w.size(); ++i) {
    os << (i ? ", " : "") << x.w(i);
  }
  os << "])";
  return os.str();
}

}  // namespace lorentz
