#include "efpdet/fredholm.hpp"

#include <cmath>
#include <sstream>

#include "efpdet/errors.hpp"

namespace efpdet {

namespace {

void require_on_arc(const ModelParams& params, double theta) {
  if (!arc_contains(params.psi, theta)) {
    std::ostringstream os;
    os << "theta = " << theta << " is not on the arc";
    throw DomainError(os.str());
  }
}

[[noreturn]] void rethrow_with_indices(std::size_t j, std::size_t k) {
  try {
    throw;
  } catch (const SingularPointError& e) {
    std::ostringstream os;
    os << "kernel at nodes (" << j << ", " << k << "): " << e.what();
    throw SingularPointError(os.str());
  }
}

}  // namespace

cplx v_kernel(double theta1, double theta2, const ModelParams& params) {
  require_on_arc(params, theta1);
  require_on_arc(params, theta2);
  if (std::abs(std::polar(1.0, theta1) - std::polar(1.0, theta2)) < kDegeneratePairTolerance)
    throw DomainError("v_kernel: coincident points, use v_diagonal");
  return detail::v_offdiagonal<double>(theta1, theta2, params);
}

cplx v_diagonal(double theta, const ModelParams& params) {
  require_on_arc(params, theta);
  return detail::v_diagonal<double>(theta, params);
}

template <typename Real>
BasicComplexMatrix<Real> assemble(const ModelParams& params, const BasicArcQuadrature<Real>& aq) {
  const std::size_t m = aq.node_count;
  auto out = BasicComplexMatrix<Real>::identity(m);
  if (params.gamma == 0.0) return out;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      try {
        const std::complex<Real> v =
            j == k ? detail::v_diagonal<Real>(aq.theta_nodes[j], params)
                   : detail::v_offdiagonal<Real>(aq.theta_nodes[j], aq.theta_nodes[k], params);
        out(j, k) += v * aq.contour_weights[k];
      } catch (const SingularPointError&) {
        rethrow_with_indices(j, k);
      }
    }
  }
  return out;
}

template <typename Real>
BasicComplexMatrix<Real> assemble_finite_rank(const ModelParams& params,
                                              const BasicArcQuadrature<Real>& aq,
                                              const BasicHalfLineQuadrature<Real>& hq) {
  const std::size_t m = aq.node_count;
  const std::size_t ns = hq.node_count;
  auto out = BasicComplexMatrix<Real>::identity(m);
  if (params.gamma == 0.0) return out;

  // e_{+-}(z_j | s_k) tables
  std::vector<std::complex<Real>> ep(m * ns), em(m * ns);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < ns; ++k) {
      ep[j * ns + k] = e_pm_s<Real>(aq.z_nodes[j], hq.s_nodes[k], Sign::plus, params);
      em[j * ns + k] = e_pm_s<Real>(aq.z_nodes[j], hq.s_nodes[k], Sign::minus, params);
    }

  const std::complex<Real> prefactor{0, -Real(params.gamma) / (2 * std::numbers::pi_v<Real>)};
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      std::complex<Real> v;
      if (j == k) {
        v = detail::v_diagonal<Real>(aq.theta_nodes[j], params);
      } else {
        std::complex<Real> acc{0, 0};
        for (std::size_t l = 0; l < ns; ++l)
          acc += hq.weights[l] * (ep[j * ns + l] * em[k * ns + l] - em[j * ns + l] * ep[k * ns + l]);
        v = prefactor * acc / (aq.z_nodes[j] - aq.z_nodes[k]);
      }
      out(j, k) += v * aq.contour_weights[k];
    }
  }
  return out;
}

LogDet fredholm_logdet_at(const ModelParams& params, std::size_t m_nodes, std::size_t panels) {
  params.validate();
  const auto aq = build_arc<ExtendedReal>(params.psi, m_nodes, panels);
  return logdet(assemble<ExtendedReal>(params, aq));
}

LogDet fredholm_logdet(const ModelParams& params, std::size_t m_nodes,
                       const FredholmOptions& options) {
  const LogDet coarse = fredholm_logdet_at(params, m_nodes, options.panels);
  LogDet fine = fredholm_logdet_at(params, 2 * m_nodes, options.panels);
  fine.converged = std::abs(fine.log_abs - coarse.log_abs) < options.convergence_tolerance;

  std::ostringstream diag;
  if (!fine.converged)
    diag << "node doubling " << m_nodes << " -> " << 2 * m_nodes << " changed log|det| by "
         << std::abs(fine.log_abs - coarse.log_abs) << "; ";
  if (std::abs(fine.arg) >= options.argument_tolerance)
    diag << "determinant argument " << fine.arg << " is not ~0; ";
  if (!fine.trusted() || !coarse.trusted())
    diag << "smallest pivot " << std::min(fine.min_pivot, coarse.min_pivot)
         << " below trust threshold; ";
  fine.min_pivot = std::min(fine.min_pivot, coarse.min_pivot);
  fine.diagnostic = diag.str();
  return fine;
}

template BasicComplexMatrix<double> assemble<double>(const ModelParams&,
                                                     const BasicArcQuadrature<double>&);
template BasicComplexMatrix<long double> assemble<long double>(
    const ModelParams&, const BasicArcQuadrature<long double>&);
template BasicComplexMatrix<double> assemble_finite_rank<double>(
    const ModelParams&, const BasicArcQuadrature<double>&, const BasicHalfLineQuadrature<double>&);
template BasicComplexMatrix<long double> assemble_finite_rank<long double>(
    const ModelParams&, const BasicArcQuadrature<long double>&,
    const BasicHalfLineQuadrature<long double>&);

}  // namespace efpdet
