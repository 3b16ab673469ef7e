#pragma once

// Scalar functions cut along the arc C with branch points a = e^{-i psi}
// (start of C) and b = e^{i psi} (end of C).
//
// All of them are built from the Moebius ratio w(z) = (z - a)/(z - b), which
// sends C onto the ray arg w = -psi. Rotating that ray onto the negative real
// axis lets the principal-branch root carry the cut exactly along C.

#include <cmath>
#include <complex>
#include <utility>

#include "efpdet/contour.hpp"

namespace efpdet {

struct BranchContext {
  double psi = 0;
  double alpha = 0;  ///< -sin^2(psi/2)
  cplx endpoint_begin;  ///< e^{-i psi}
  cplx endpoint_end;    ///< e^{+i psi}

  static BranchContext make(double psi);
};

inline constexpr double kOnArcTolerance = 1e-12;
inline constexpr double kBranchPointExclusion = 1e-8;

/// ((z - a)(z - b))^{1/2}, analytic off C, R(z) ~ z at infinity, R(0) = 1.
cplx sqrt_R(cplx z, const BranchContext& ctx);

/// g(z) = (R(z) + z - 1) / (2z), with g(0) = sin^2(psi/2) and g(inf) = 1.
/// Inside the unit disc it is evaluated as 2 sin^2(psi/2) / (R(z) - z + 1),
/// the same function without the cancellation at small |z|.
cplx g_fn(cplx z, const BranchContext& ctx);

/// Fourth root normalized by beta(inf) = 1, cut along C, with boundary ratio
/// beta_+ / beta_- = i (so that diag(i, -i) = B_- B_+^{-1} for B = diag(1/beta, beta)).
/// This is ((z - b)/(z - a))^{1/4}; beta(0) = e^{i(pi + psi)/2}.
cplx beta_fn(cplx z, const BranchContext& ctx);

/// z^{k/2} on the unit circle through the theta-determination e^{i k theta / 2},
/// single valued for theta in (0, 2 pi) (cut at z = 1).
template <typename Real>
std::complex<Real> half_power(Real theta, int k) {
  const Real phase = Real(k) * theta / 2;
  return {std::cos(phase), std::sin(phase)};
}

/// Checked variant: theta must be strictly inside (0, 2 pi).
cplx half_power_checked(double theta, int k);

enum class BranchFunction { g, beta };

struct BoundaryPair {
  cplx plus;   ///< limit from |z| < 1
  cplx minus;  ///< limit from |z| > 1
};

/// Richardson-extrapolated boundary values of g or beta at e^{i theta}.
BoundaryPair boundary_values(BranchFunction fn, double theta, const BranchContext& ctx,
                             double eps = kDefaultBoundaryEps);

}  // namespace efpdet
