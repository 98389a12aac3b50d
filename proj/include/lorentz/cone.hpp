#pragma once

// Lorentz cone geometry on R x W with W = R^m.
//
// Coordinates: a point is (lambda, w). The Minkowski form is
//   Psi((l, w), (mu, u)) = l * mu - w . u,
// the cone is L = { lambda > 0, Psi(x, x) > 0 }, and Psi(x, x) is the rank-2
// Jordan determinant. The subcone L0 is generated by the first m0 coordinates
// of W; the block-cone isomorphism uses the first coordinate of W as the unit
// axis.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lorentz {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an argument lies outside the cone (or on its boundary) where
/// an interior point is required.
class ConeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AmbientSpace {
 public:
  explicit AmbientSpace(int m);

  int m() const { return m_; }
  /// Total dimension m + 1 of R x W.
  int dim() const { return m_ + 1; }

 private:
  int m_;
};

/// An element (lambda, w) of R x W. No sign constraint; use contains() to
/// test cone membership.
struct ConePoint {
  double lambda = 0.0;
  Vector w;

  ConePoint() = default;
  ConePoint(double lambda_, Vector w_) : lambda(lambda_), w(std::move(w_)) {}

  int m() const { return static_cast<int>(w.size()); }

  /// The Jordan unit e = (1, 0).
  static ConePoint identity(int m);

  /// (lambda, w) stacked into a single length m+1 vector.
  Vector stacked() const;
  static ConePoint from_stacked(const Vector& v);

  ConePoint& operator+=(const ConePoint& o);
  ConePoint& operator*=(double c);
};

ConePoint operator+(ConePoint a, const ConePoint& b);
ConePoint operator-(const ConePoint& a, const ConePoint& b);
ConePoint operator*(double c, ConePoint x);

/// Element of the block cone P2(W): [[lambda1, w1], [w1, lambda2]] with
/// w1 in the orthogonal complement of the unit axis (length m-1).
struct P2Element {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vector w1;

  /// lambda1 * lambda2 - |w1|^2
  double det() const;
  bool interior() const;
};

/// W0 = span of the first m0 coordinates of W, W0-perp = the remaining m1.
class SubconeSplit {
 public:
  SubconeSplit(int m, int m0);

  int m() const { return m_; }
  int m0() const { return m0_; }
  int m1() const { return m_ - m0_; }

 private:
  int m_;
  int m0_;
};

double minkowski_form(const ConePoint& x, const ConePoint& y);

/// Psi(x, x) = lambda^2 - |w|^2, evaluated as (lambda - |w|)(lambda + |w|).
double lorentz_det(const ConePoint& x);

/// Strict interior test, no tolerance.
bool contains(const ConePoint& x);

/// Throws ConeError naming `what` unless contains(x).
void require_interior(const ConePoint& x, const char* what);

/// (lambda, -w) / det(x). Throws ConeError outside the open cone.
ConePoint jordan_inverse(const ConePoint& x);

ConePoint phi_from_p2(const P2Element& s);
P2Element phi_to_p2(const ConePoint& x);

struct SubconeProjection {
  ConePoint subcone_part;  ///< (lambda, p(w)) in R x W0, length m0
  Vector complement;       ///< w - p(w), length m1
};

SubconeProjection project_w0(const ConePoint& x, const SubconeSplit& split);

/// Inverse of project_w0 for the subcone part: zero-pads into R x W.
ConePoint embed_subcone(const ConePoint& x0, const SubconeSplit& split);

std::string to_string(const ConePoint& x);

}  // namespace lorentz
