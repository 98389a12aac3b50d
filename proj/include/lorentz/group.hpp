#pragma once

// The identity component G = R++ x SO^dagger(Psi) of Aut(L), acting by
// (a, A) x = a * A * [lambda; w], and the subgroup G0 that maps the subcone
// L0 into itself.

#include "lorentz/cone.hpp"
#include "lorentz/random.hpp"

#include <string>
#include <vector>

namespace lorentz {

inline constexpr double kGroupTolerance = 1e-10;

struct GroupElement {
  double a = 1.0;
  Matrix A;

  int m() const { return static_cast<int>(A.rows()) - 1; }

  static GroupElement identity(int m);
};

struct GroupValidation {
  bool ok = true;
  std::vector<std::string> failures;
  double form_residual = 0.0;  ///< ||A^T Psi A - Psi||_F
  double det_residual = 0.0;   ///< |det(A) - 1|

  explicit operator bool() const { return ok; }
};

/// diag(1, -I_m)
Matrix minkowski_matrix(int m);

GroupValidation validate(const GroupElement& g);
GroupValidation validate_g0(const GroupElement& g, const SubconeSplit& split);

/// Throws std::invalid_argument if g is not a valid element of G.
ConePoint apply(const GroupElement& g, const ConePoint& x);

GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// Pure boost taking e to the unit-hyperboloid point h = (c, v):
/// [[c, v^T], [v, I + v v^T / (1 + c)]].
Matrix boost_matrix(const ConePoint& h);

/// Rotation in SO(k) taking unit vector u to unit vector v. For u.v >= 0 it
/// is the plane rotation in span{u, v}; otherwise a product of two
/// reflections. Requires k >= 2 unless u.v >= 0.
Matrix rotation_between(const Vector& u, const Vector& v);

/// g with apply(g, e) == sigma.
GroupElement boost_to(const ConePoint& sigma);

/// Builds g in G0 with apply(g, x) == y for points on the same G0-orbit.
/// Throws std::domain_error("... not in same G0-orbit ...") when the maximal
/// invariants differ by more than 1e-9 (relative).
GroupElement match_in_g0(const ConePoint& x, const ConePoint& y, const SubconeSplit& split);

/// Haar-distributed element of SO(k) (or O(k) with the given determinant sign).
Matrix random_orthogonal(Rng& rng, int k, int det_sign = 1);

GroupElement random_group_element(Rng& rng, int m);
GroupElement random_g0_element(Rng& rng, const SubconeSplit& split);

}  // namespace lorentz
