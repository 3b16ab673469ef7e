#pragma once

// Nystrom discretization of I + V^(n) on the arc C and its log-determinant.
//
// V(z1, z2) = -gamma (i / 2 pi) [e+(z1) e-(z2) r(z1,z2) - e-(z1) e+(z2) r(z2,z1)] / (z1 - z2)
//
// acting by f -> int_C V(z1, z2) f(z2) dz2. The kernel is symmetric in its two
// arguments; its diagonal limit is
//
// V(z, z) = -gamma (i / 2 pi) [phi'(z) - n / z - 1 / (z - 1)^2].

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "efpdet/contour.hpp"
#include "efpdet/matrix.hpp"
#include "efpdet/opkernels.hpp"

namespace efpdet {

/// Working precision of the determinant driver. P(n) decays like e^{-c n^2}
/// and double precision loses the trailing eigenvalues of I + V first.
using ExtendedReal = long double;

inline constexpr double kDegeneratePairTolerance = 1e-12;

namespace detail {

template <typename Real>
std::complex<Real> v_offdiagonal(Real theta1, Real theta2, const ModelParams& params) {
  const std::complex<Real> z1{std::cos(theta1), std::sin(theta1)};
  const std::complex<Real> z2{std::cos(theta2), std::sin(theta2)};
  // e+(z1) e-(z2) = e^{i n (theta2 - theta1)/2} e^{(phi(z1) - phi(z2))/2}
  const std::complex<Real> cross =
      half_power<Real>(theta2 - theta1, params.n) *
      std::exp((params.phi<Real>(z1) - params.phi<Real>(z2)) / Real(2));
  const std::complex<Real> bracket =
      cross * r_closed<Real>(z1, z2) - r_closed<Real>(z2, z1) / cross;
  const std::complex<Real> prefactor{0, -Real(params.gamma) / (2 * std::numbers::pi_v<Real>)};
  return prefactor * bracket / (z1 - z2);
}

template <typename Real>
std::complex<Real> v_diagonal(Real theta, const ModelParams& params) {
  const std::complex<Real> z{std::cos(theta), std::sin(theta)};
  const std::complex<Real> zm1 = z - Real(1);
  const std::complex<Real> bracket =
      params.phi_prime<Real>(z) - Real(params.n) / z - Real(1) / (zm1 * zm1);
  const std::complex<Real> prefactor{0, -Real(params.gamma) / (2 * std::numbers::pi_v<Real>)};
  return prefactor * bracket;
}

}  // namespace detail

/// Off-diagonal kernel value. Throws DomainError for angles off the arc and
/// for |z1 - z2| < 1e-12 (route those to v_diagonal).
cplx v_kernel(double theta1, double theta2, const ModelParams& params);

/// Removable-singularity value of the kernel on the diagonal.
cplx v_diagonal(double theta, const ModelParams& params);

/// Nystrom matrix M_jk = delta_jk + V(theta_j, theta_k) w_k built from the closed-form kernel.
template <typename Real = double>
BasicComplexMatrix<Real> assemble(const ModelParams& params, const BasicArcQuadrature<Real>& aq);

/// Same matrix with V taken from the Laplace (finite-rank in s) representation:
/// V = -gamma (i/2pi) sum_k w_k [e+(z1|s_k) e-(z2|s_k) - e-(z1|s_k) e+(z2|s_k)] / (z1 - z2).
template <typename Real = double>
BasicComplexMatrix<Real> assemble_finite_rank(const ModelParams& params,
                                              const BasicArcQuadrature<Real>& aq,
                                              const BasicHalfLineQuadrature<Real>& hq);

struct FredholmOptions {
  std::size_t panels = 1;
  double convergence_tolerance = 1e-8;
  double argument_tolerance = 1e-6;
};

/// log det(I + V^(n)) at m_nodes and 2 m_nodes in extended precision; returns
/// the finer value with converged = |difference| < convergence_tolerance.
/// A nonzero argument or an untrusted pivot is recorded in `diagnostic`.
LogDet fredholm_logdet(const ModelParams& params, std::size_t m_nodes,
                       const FredholmOptions& options = {});

/// Single-resolution log-determinant in extended precision (no doubling).
LogDet fredholm_logdet_at(const ModelParams& params, std::size_t m_nodes,
                          std::size_t panels = 1);

}  // namespace efpdet
