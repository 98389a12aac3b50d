#include "lorentz/group.hpp"

#include "lorentz/invariant_tests.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lorentz {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Matrix block_diag(const Matrix& top, const Matrix& bottom) {
  Matrix out = Matrix::Zero(top.rows() + bottom.rows(), top.cols() + bottom.cols());
  out.topLeftCorner(top.rows(), top.cols()) = top;
  out.bottomRightCorner(bottom.rows(), bottom.cols()) = bottom;
  return out;
}

Vector random_unit_vector(Rng& rng, int k) {
  Vector d(k);
  double n = 0.0;
  do {
    for (int i = 0; i < k; ++i) d(i) = standard_normal(rng);
    n = d.norm();
  } while (n < 1e-12);
  return d / n;
}

// Unit hyperboloid point with spatial part of norm r <= max_rapidity_norm.
ConePoint random_hyperboloid_point(Rng& rng, int k, double max_norm) {
  const double r = max_norm * uniform01(rng);
  Vector v = r * random_unit_vector(rng, k);
  return ConePoint(std::sqrt(1.0 + r * r), std::move(v));
}

}  // namespace

GroupElement GroupElement::identity(int m) { return {1.0, Matrix::Identity(m + 1, m + 1)}; }

Matrix minkowski_matrix(int m) {
  Matrix psi = -Matrix::Identity(m + 1, m + 1);
  psi(0, 0) = 1.0;
  return psi;
}

GroupValidation validate(const GroupElement& g) {
  GroupValidation r;
  auto fail = [&r](std::string why) {
    r.ok = false;
    r.failures.push_back(std::move(why));
  };
  if (!(g.a > 0.0) || !std::isfinite(g.a)) {
    fail("scale a must be positive and finite");
  }
  if (g.A.rows() != g.A.cols() || g.A.rows() < 2) {
    fail("A must be square of size m+1 >= 2");
    return r;
  }
  if (!g.A.allFinite()) {
    fail("A has non-finite entries");
    return r;
  }
  const Matrix psi = minkowski_matrix(g.m());
  r.form_residual = (g.A.transpose() * psi * g.A - psi).norm();
  if (r.form_residual > kGroupTolerance) {
    fail("A does not preserve Psi (residual " + fmt(r.form_residual) + ")");
  }
  if (!(g.A(0, 0) > 0.0)) {
    fail("A is not orthochronous (A[0,0] <= 0)");
  }
  r.det_residual = std::abs(g.A.determinant() - 1.0);
  if (r.det_residual > kGroupTolerance) {
    fail("det(A) != 1 (residual " + fmt(r.det_residual) + ")");
  }
  return r;
}

GroupValidation validate_g0(const GroupElement& g, const SubconeSplit& split) {
  GroupValidation r = validate(g);
  auto fail = [&r](std::string why) {
    r.ok = false;
    r.failures.push_back(std::move(why));
  };
  if (g.A.rows() != split.m() + 1 || g.A.cols() != split.m() + 1) {
    fail("dimension does not match split");
    return r;
  }
  const int n0 = split.m0() + 1;
  const int m1 = split.m1();
  const double off = std::hypot(g.A.topRightCorner(n0, m1).norm(), g.A.bottomLeftCorner(m1, n0).norm());
  if (off > kGroupTolerance) {
    fail("off-diagonal block nonzero (" + fmt(off) + ")");
  }
  const Matrix a0 = g.A.topLeftCorner(n0, n0);
  const Matrix perp = g.A.bottomRightCorner(m1, m1);
  const Matrix psi0 = minkowski_matrix(split.m0());
  if ((a0.transpose() * psi0 * a0 - psi0).norm() > kGroupTolerance) {
    fail("A0 not in O(Psi0)");
  }
  if ((perp.transpose() * perp - Matrix::Identity(m1, m1)).norm() > kGroupTolerance) {
    fail("A_perp not orthogonal on W0-perp");
  }
  if (!(g.A(0, 0) > 0.0)) {
    fail("a0 <= 0");
  }
  const double det_w0 = g.A.block(1, 1, split.m0(), split.m0()).determinant();
  if (!(det_w0 * perp.determinant() > 0.0)) {
    fail("det(A_W0) * det(A_perp) <= 0");
  }
  return r;
}

ConePoint apply(const GroupElement& g, const ConePoint& x) {
  if (g.m() != x.m()) {
    throw std::invalid_argument("apply: group element acts on m=" + std::to_string(g.m()) +
                                " but point has m=" + std::to_string(x.m()));
  }
  if (auto v = validate(g); !v) {
    throw std::invalid_argument("apply: invalid group element: " + v.failures.front());
  }
  return ConePoint::from_stacked(g.a * (g.A * x.stacked()));
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.A.rows() != h.A.rows()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  return {g.a * h.a, g.A * h.A};
}

GroupElement inverse(const GroupElement& g) {
  // A^T Psi A = Psi  =>  A^{-1} = Psi A^T Psi.
  const Matrix psi = minkowski_matrix(g.m());
  return {1.0 / g.a, psi * g.A.transpose() * psi};
}

Matrix boost_matrix(const ConePoint& h) {
  const int m = h.m();
  const double c = h.lambda;
  Matrix b(m + 1, m + 1);
  b(0, 0) = c;
  b.block(0, 1, 1, m) = h.w.transpose();
  b.block(1, 0, m, 1) = h.w;
  b.block(1, 1, m, m) = Matrix::Identity(m, m) + h.w * h.w.transpose() / (1.0 + c);
  return b;
}

Matrix rotation_between(const Vector& u, const Vector& v) {
  const Eigen::Index k = u.size();
  if (v.size() != k) {
    throw std::invalid_argument("rotation_between: dimension mismatch");
  }
  const double c = u.dot(v);
  if (c >= 0.0) {
    const Matrix kk = v * u.transpose() - u * v.transpose();
    return Matrix::Identity(k, k) + kk + kk * kk / (1.0 + c);
  }
  if (k < 2) {
    throw std::domain_error("rotation_between: no rotation of R^1 reverses a direction");
  }
  // Obtuse angle: 1/(1+c) is ill-conditioned, so compose two reflections.
  // The first sends u to v, the second fixes v and restores det = +1.
  const Vector n = (u - v).normalized();
  Eigen::Index j = 0;
  v.cwiseAbs().minCoeff(&j);
  const Vector p = (Vector::Unit(k, j) - v(j) * v).normalized();
  const Matrix h1 = Matrix::Identity(k, k) - 2.0 * n * n.transpose();
  const Matrix h2 = Matrix::Identity(k, k) - 2.0 * p * p.transpose();
  return h2 * h1;
}

GroupElement boost_to(const ConePoint& sigma) {
  require_interior(sigma, "boost_to: sigma");
  const double scale = std::sqrt(lorentz_det(sigma));
  return {scale, boost_matrix((1.0 / scale) * sigma)};
}

GroupElement match_in_g0(const ConePoint& x, const ConePoint& y, const SubconeSplit& split) {
  require_interior(x, "match_in_g0: x");
  require_interior(y, "match_in_g0: y");
  const double mx = maximal_invariant_m(x, split);
  const double my = maximal_invariant_m(y, split);
  if (std::abs(mx - my) > 1e-9 * (1.0 + std::abs(mx))) {
    throw std::domain_error("match_in_g0: not in same G0-orbit (m(x)=" + fmt(mx) + ", m(y)=" + fmt(my) + ")");
  }

  const SubconeProjection px = project_w0(x, split);
  const SubconeProjection py = project_w0(y, split);
  const double det0x = lorentz_det(px.subcone_part);
  const double det0y = lorentz_det(py.subcone_part);
  const double nx = px.complement.norm();
  const double ny = py.complement.norm();
  const int m0 = split.m0();
  const int m1 = split.m1();

  double a = 0.0;
  Matrix perp = Matrix::Identity(m1, m1);
  Matrix flip = Matrix::Identity(m0, m0);
  if (nx == 0.0 || ny == 0.0) {
    a = std::sqrt(det0y / det0x);
  } else {
    a = ny / nx;
    const Vector dx = px.complement / nx;
    const Vector dy = py.complement / ny;
    if (m1 >= 2) {
      perp = rotation_between(dx, dy);
    } else if (dx(0) * dy(0) < 0.0) {
      // R^1 has no rotation reversing direction: use -1 on W0-perp and a
      // reflection of W0 in the middle frame to keep det(A) = 1.
      perp(0, 0) = -1.0;
      flip(0, 0) = -1.0;
    }
  }

  const ConePoint hx = (1.0 / std::sqrt(det0x)) * px.subcone_part;
  const ConePoint hy = (1.0 / std::sqrt(det0y)) * py.subcone_part;
  const Matrix bx_inv = boost_matrix(ConePoint(hx.lambda, -hx.w));
  Matrix middle = Matrix::Identity(m0 + 1, m0 + 1);
  middle.bottomRightCorner(m0, m0) = flip;
  const Matrix a0 = boost_matrix(hy) * middle * bx_inv;

  GroupElement g{a, block_diag(a0, perp)};
  if (auto v = validate_g0(g, split); !v) {
    throw std::logic_error("match_in_g0: constructed element failed validation: " + v.failures.front());
  }
  return g;
}

Matrix random_orthogonal(Rng& rng, int k, int det_sign) {
  Matrix z(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) z(i, j) = standard_normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if ((q.determinant() > 0.0) != (det_sign > 0)) {
    q.col(0) *= -1.0;
  }
  return q;
}

GroupElement random_group_element(Rng& rng, int m) {
  AmbientSpace space(m);
  const double a = std::exp(standard_normal(rng));
  const Matrix rot = random_orthogonal(rng, space.m(), 1);
  Matrix spin = Matrix::Identity(m + 1, m + 1);
  spin.bottomRightCorner(m, m) = rot;
  const ConePoint h = random_hyperboloid_point(rng, m, 2.0);
  return {a, boost_matrix(h) * spin};
}

GroupElement random_g0_element(Rng& rng, const SubconeSplit& split) {
  const int m0 = split.m0();
  const double a = std::exp(standard_normal(rng));
  const int sign = uniform01(rng) < 0.5 ? -1 : 1;
  Matrix spin = Matrix::Identity(m0 + 1, m0 + 1);
  spin.bottomRightCorner(m0, m0) = random_orthogonal(rng, m0, sign);
  const ConePoint h0 = random_hyperboloid_point(rng, m0, 2.0);
  const Matrix a0 = boost_matrix(h0) * spin;
  const Matrix perp = random_orthogonal(rng, split.m1(), sign);
  return {a, block_diag(a0, perp)};
}

}  // namespace lorentz
