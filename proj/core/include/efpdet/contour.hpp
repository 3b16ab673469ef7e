#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace efpdet {

using cplx = std::complex<double>;

/// Boundary side of the arc: plus is the limit from |z| < 1, minus from |z| > 1.
enum class Side { plus, minus };

/// Admissible angles stay this far from 0 and -pi.
inline constexpr double kPsiMargin = 0.05;
inline constexpr double kDefaultBoundaryEps = 1e-6;

/// Throws DomainError unless psi lies in (-pi + margin, -margin).
void check_psi(double psi);

/// One problem instance: string length n, field angle psi, the entire
/// function phi(z) = sum_k c_k z^k and the coupling gamma.
struct ModelParams {
  int n = 0;
  double psi = -std::numbers::pi / 2;
  std::vector<cplx> phi_coeffs;
  double gamma = 1.0;

  static ModelParams make(int n, double psi, std::vector<cplx> phi_coeffs = {},
                          double gamma = 1.0);
  void validate() const;

  template <typename Real>
  std::complex<Real> phi(std::complex<Real> z) const {
    std::complex<Real> acc{0, 0};
    for (auto it = phi_coeffs.rbegin(); it != phi_coeffs.rend(); ++it)
      acc = acc * z + std::complex<Real>(Real(it->real()), Real(it->imag()));
    return acc;
  }

  template <typename Real>
  std::complex<Real> phi_prime(std::complex<Real> z) const {
    std::complex<Real> acc{0, 0};
    for (std::size_t k = phi_coeffs.size(); k-- > 1;)
      acc = acc * z + Real(k) * std::complex<Real>(Real(phi_coeffs[k].real()),
                                                   Real(phi_coeffs[k].imag()));
    return acc;
  }
};

/// Endpoints of the arc in the theta parameterization: (-psi, 2 pi + psi).
inline double arc_theta_begin(double psi) { return -psi; }
inline double arc_theta_end(double psi) { return 2 * std::numbers::pi + psi; }
bool arc_contains(double psi, double theta);

/// Euclidean distance from z to the closed arc C.
double distance_to_arc(double psi, cplx z);

/// Gauss-Legendre grid on C. contour_weights include the Jacobian dz/dtheta,
/// so sum_k w_k f(z_k) approximates the contour integral of f along C.
template <typename Real>
struct BasicArcQuadrature {
  double psi = 0;
  std::vector<Real> theta_nodes;
  std::vector<std::complex<Real>> z_nodes;
  std::vector<std::complex<Real>> contour_weights;
  std::size_t node_count = 0;
};
using ArcQuadrature = BasicArcQuadrature<double>;

/// m nodes in total, split over `panels` equal theta-panels (m must be divisible).
template <typename Real = double>
BasicArcQuadrature<Real> build_arc(double psi, std::size_t m, std::size_t panels = 1);

/// Gauss-Laguerre grid on [0, inf) with e^{+s} folded into `weights`, so the
/// rule integrates plain decaying integrands. The unfolded weights are kept
/// for weight-symmetrized operator matrices.
template <typename Real>
struct BasicHalfLineQuadrature {
  std::vector<Real> s_nodes;
  std::vector<Real> weights;
  std::vector<Real> laguerre_weights;
  std::vector<Real> log_laguerre_weights;
  std::size_t node_count = 0;
};
using HalfLineQuadrature = BasicHalfLineQuadrature<double>;

template <typename Real = double>
BasicHalfLineQuadrature<Real> build_halfline(std::size_t m);

/// (1 - eps) e^{i theta} for Side::plus, (1 + eps) e^{i theta} for Side::minus.
cplx boundary_point(double psi, double theta, Side side, double eps = kDefaultBoundaryEps);

/// Two-point Richardson limit 2 f(eps/2) - f(eps) of a boundary value of f.
template <typename F>
auto boundary_limit(F&& f, double psi, double theta, Side side,
                    double eps = kDefaultBoundaryEps) {
  const auto coarse = f(boundary_point(psi, theta, side, eps));
  const auto fine = f(boundary_point(psi, theta, side, eps / 2));
  return 2.0 * fine - coarse;
}

}  // namespace efpdet
