#pragma once

// Operator-valued ingredients on L^2[0, inf): the kernels P(z|s,t) and
// Q(z|s,t), the factors e_{+-}(z) and e_{+-}(z|s), and the r-factor in its
// closed and Laplace-integral forms.
//
// Everything is written in terms of c(z) = (z + 1) / (2 (z - 1)):
//   P(z|s,t) = exp(c (s - t) - (s + t)/2)
//   Q(z|s,t) = exp(c (s + t) - (s + t)/2)
//   r(z1,z2) = int_0^inf exp(-s + (c1 - c2) s / 2) ds = 1 / (1 - (c1 - c2)/2)
//
// The Laplace rate in r is half of the one in P and Q: with the full rate the
// integral evaluates to (z1-1)(z2-1) / ((z1-1)(z2-1) + z1 - z2), which is not the
// closed form below.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "efpdet/branches.hpp"
#include "efpdet/contour.hpp"
#include "efpdet/errors.hpp"
#include "efpdet/matrix.hpp"

namespace efpdet {

enum class Sign { plus, minus };

inline constexpr double kSingularPointTolerance = 1e-14;
inline constexpr double kRDenominatorThreshold = 1e-10;
inline constexpr double kMaxKernelExponent = 700.0;

/// c = (z + 1) / (2 (z - 1)); for |z| = 1 the value is purely imaginary.
template <typename Real>
std::complex<Real> cayley(std::complex<Real> z) {
  if (std::abs(z - Real(1)) < Real(kSingularPointTolerance))
    throw SingularPointError("kernel evaluated at the essential singularity z = 1");
  return (z + Real(1)) / (Real(2) * (z - Real(1)));
}

struct CayleyCoefficient {
  cplx c;
  static CayleyCoefficient at(cplx z) { return {cayley(z)}; }
};

/// Closed form r(z1, z2) = 2(z2-1)(z1-1) / (2(z2-1)(z1-1) + z1 - z2).
template <typename Real>
std::complex<Real> r_closed(std::complex<Real> z1, std::complex<Real> z2) {
  const std::complex<Real> num = Real(2) * (z2 - Real(1)) * (z1 - Real(1));
  const std::complex<Real> den = num + z1 - z2;
  if (std::abs(den) < Real(kRDenominatorThreshold)) {
    std::ostringstream os;
    os << "r-factor denominator nearly vanishes at z1 = " << z1 << ", z2 = " << z2;
    throw SingularPointError(os.str());
  }
  return num / den;
}

/// Angle of z in [0, 2 pi): the theta-determination used for half powers.
template <typename Real>
Real unit_angle(std::complex<Real> z) {
  Real a = std::arg(z);
  if (a < 0) a += 2 * std::numbers::pi_v<Real>;
  return a;
}

/// e_+(z) = z^{-n/2} e^{phi/2}, e_-(z) = 1/e_+(z) on the arc, z = e^{i theta}.
template <typename Real>
std::complex<Real> e_arc(Real theta, Sign sign, const ModelParams& params) {
  const std::complex<Real> z{std::cos(theta), std::sin(theta)};
  const int k = sign == Sign::plus ? -params.n : params.n;
  const Real half = sign == Sign::plus ? Real(0.5) : Real(-0.5);
  return half_power<Real>(theta, k) * std::exp(half * params.phi<Real>(z));
}

/// e_{+-}(z|s) = (z^{-n} exp(phi(z) + c s))^{+-1/2} e^{-s/2}, so that
/// int e_+(z1|s) e_-(z2|s) ds = e_+(z1) e_-(z2) r(z1, z2). z^{-n/2} follows the
/// theta-determination of arg z in [0, 2 pi) (radially extended off the circle).
template <typename Real>
std::complex<Real> e_pm_s(std::complex<Real> z, Real s, Sign sign, const ModelParams& params) {
  const std::complex<Real> c = cayley(z);
  const Real theta = unit_angle(z);
  const std::complex<Real> log_z{std::log(std::abs(z)), theta};
  const std::complex<Real> inner = -Real(params.n) * log_z + params.phi<Real>(z) + c * s;
  const Real half = sign == Sign::plus ? Real(0.5) : Real(-0.5);
  return std::exp(half * inner - s / 2);
}

/// e_+-(theta) with the double-precision ModelParams interface.
cplx e_pm(double theta, Sign sign, const ModelParams& params);

cplx p_kernel(cplx z, double s, double t);
/// Throws RangeError when Re(c)(s + t) exceeds kMaxKernelExponent.
cplx q_kernel(cplx z, double s, double t);

/// Quadrature value of the Laplace representation of r. Throws RangeError
/// when Re(1 - (c1 - c2)/2) <= 0 (integrand does not decay).
cplx r_integral(cplx z1, cplx z2, const HalfLineQuadrature& hq);

/// phi_z(s) = exp((c - 1/2) s): spans the range of P(z).
cplx p_range_vector(cplx z, double s);

/// (K f)(s_j) = sum_k w_k K(s_j, s_k) f(s_k) on the half-line grid.
std::vector<cplx> apply_kernel(const HalfLineQuadrature& hq,
                               const std::function<cplx(double, double)>& kernel,
                               const std::function<cplx(double)>& f);

/// Half-line inner product <f, g> = int conj(f) g ds by quadrature.
cplx inner_product(const HalfLineQuadrature& hq, const std::function<cplx(double)>& f,
                   const std::function<cplx(double)>& g);

/// Weight-symmetrized matrix A_jk = sqrt(w_j) K(s_j, s_k) sqrt(w_k) of a kernel
/// given through its log, K = exp(log_kernel(s, t)). Composition of operators
/// becomes matrix multiplication and the identity operator the identity matrix.
ComplexMatrix discretize_log_kernel(const HalfLineQuadrature& hq,
                                    const std::function<cplx(double, double)>& log_kernel);

ComplexMatrix discretize_p(cplx z, const HalfLineQuadrature& hq);
ComplexMatrix discretize_p_transpose(cplx z, const HalfLineQuadrature& hq);
ComplexMatrix discretize_q(cplx z, const HalfLineQuadrature& hq);

/// Max-entry residuals of the projection identities at one point z.
struct ProjectionResiduals {
  double idempotence = 0;     ///< |P^2 - P|
  double self_adjoint = 0;    ///< |P - P^*|
  double intertwining = 0;    ///< |P Q - Q|
  double composition = 0;     ///< |Q(z) Q(1/z) - P|
};

ProjectionResiduals projection_residuals(cplx z, const HalfLineQuadrature& hq);

}  // namespace efpdet
