#include "efpdet/contour.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "efpdet/errors.hpp"
#include "efpdet/quadrature.hpp"

namespace efpdet {

void check_psi(double psi) {
  constexpr double pi = std::numbers::pi;
  if (!(psi > -pi && psi < 0.0)) {
    std::ostringstream os;
    os << "psi = " << psi << " is outside (-pi, 0)";
    throw DomainError(os.str());
  }
  if (psi > -kPsiMargin || psi < -pi + kPsiMargin) {
    std::ostringstream os;
    os << "psi = " << psi << " is within " << kPsiMargin
       << " of the ends of (-pi, 0); the arc degenerates or touches z = 1 there";
    throw DomainError(os.str());
  }
}

ModelParams ModelParams::make(int n, double psi, std::vector<cplx> phi_coeffs, double gamma) {
  ModelParams p;
  p.n = n;
  p.psi = psi;
  p.phi_coeffs = std::move(phi_coeffs);
  p.gamma = gamma;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (n < 0) throw DomainError("string length n must be nonnegative");
  check_psi(psi);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  for (const auto& c : phi_coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DomainError("phi coefficients must be finite");
}

bool arc_contains(double psi, double theta) {
  return theta > arc_theta_begin(psi) && theta < arc_theta_end(psi);
}

double distance_to_arc(double psi, cplx z) {
  const double r = std::abs(z);
  if (r > 0) {
    double theta = std::arg(z);
    if (theta < 0) theta += 2 * std::numbers::pi;
    if (theta >= arc_theta_begin(psi) && theta <= arc_theta_end(psi)) return std::abs(r - 1.0);
  }
  const cplx a = std::polar(1.0, -psi);
  return std::min(std::abs(z - a), std::abs(z - std::conj(a)));
}

template <typename Real>
BasicArcQuadrature<Real> build_arc(double psi, std::size_t m, std::size_t panels) {
  check_psi(psi);
  if (m < 2) throw DomainError("build_arc: need at least 2 nodes");
  if (panels < 1 || m % panels != 0)
    throw DomainError("build_arc: node count must be a positive multiple of the panel count");

  const std::size_t per_panel = m / panels;
  const auto rule = gauss_legendre<Real>(per_panel);
  const Real pi = std::numbers::pi_v<Real>;
  const Real a = -Real(psi);
  const Real b = 2 * pi + Real(psi);
  const Real h = (b - a) / Real(panels);

  BasicArcQuadrature<Real> q;
  q.psi = psi;
  q.node_count = m;
  q.theta_nodes.reserve(m);
  q.z_nodes.reserve(m);
  q.contour_weights.reserve(m);
  for (std::size_t p = 0; p < panels; ++p) {
    const Real lo = a + h * Real(p);
    const Real mid = lo + h / 2;
    for (std::size_t k = 0; k < per_panel; ++k) {
      const Real theta = mid + h / 2 * rule.nodes[k];
      const std::complex<Real> z{std::cos(theta), std::sin(theta)};
      q.theta_nodes.push_back(theta);
      q.z_nodes.push_back(z);
      q.contour_weights.push_back(h / 2 * rule.weights[k] * std::complex<Real>(0, 1) * z);
    }
  }
  return q;
}

template <typename Real>
BasicHalfLineQuadrature<Real> build_halfline(std::size_t m) {
  if (m < 2) throw DomainError("build_halfline: need at least 2 nodes");
  const auto rule = gauss_laguerre<Real>(m);
  BasicHalfLineQuadrature<Real> q;
  q.node_count = m;
  q.s_nodes = rule.nodes;
  q.laguerre_weights = rule.weights;
  q.log_laguerre_weights = rule.log_weights;
  q.weights.resize(m);
  for (std::size_t k = 0; k < m; ++k) q.weights[k] = std::exp(rule.log_weights[k] + rule.nodes[k]);
  return q;
}

cplx boundary_point(double psi, double theta, Side side, double eps) {
  if (!arc_contains(psi, theta)) {
    std::ostringstream os;
    os << "theta = " << theta << " is not strictly inside the arc (" << arc_theta_begin(psi)
       << ", " << arc_theta_end(psi) << ")";
    throw DomainError(os.str());
  }
  if (!(eps > 0.0 && eps < 0.1)) throw DomainError("boundary eps must lie in (0, 0.1)");
  const double radius = side == Side::plus ? 1.0 - eps : 1.0 + eps;
  return std::polar(radius, theta);
}

template BasicArcQuadrature<double> build_arc<double>(double, std::size_t, std::size_t);
template BasicArcQuadrature<long double> build_arc<long double>(double, std::size_t, std::size_t);
template BasicHalfLineQuadrature<double> build_halfline<double>(std::size_t);
template BasicHalfLineQuadrature<long double> build_halfline<long double>(std::size_t);

}  // namespace efpdet
