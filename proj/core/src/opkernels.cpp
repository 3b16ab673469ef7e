#include "efpdet/opkernels.hpp"

namespace efpdet {

cplx e_pm(double theta, Sign sign, const ModelParams& params) {
  return e_arc<double>(theta, sign, params);
}

cplx p_kernel(cplx z, double s, double t) {
  const cplx c = cayley(z);
  return std::exp(c * (s - t) - (s + t) / 2);
}

cplx q_kernel(cplx z, double s, double t) {
  const cplx c = cayley(z);
  if (c.real() * (s + t) > kMaxKernelExponent) {
    std::ostringstream os;
    os << "Q(z|s,t) overflows: Re c = " << c.real() << ", s + t = " << s + t;
    throw RangeError(os.str());
  }
  return std::exp(c * (s + t) - (s + t) / 2);
}

cplx r_integral(cplx z1, cplx z2, const HalfLineQuadrature& hq) {
  const cplx delta = (cayley(z1) - cayley(z2)) / 2.0;
  if (1.0 - delta.real() <= 0.0) throw RangeError("r_integral: integrand does not decay");
  // int e^{-s} e^{(c1 - c2) s / 2} ds with the e^{-s} weight left unfolded
  cplx sum{0, 0};
  for (std::size_t k = 0; k < hq.node_count; ++k)
    sum += hq.laguerre_weights[k] * std::exp(delta * hq.s_nodes[k]);
  return sum;
}

cplx p_range_vector(cplx z, double s) { return std::exp((cayley(z) - 0.5) * s); }

std::vector<cplx> apply_kernel(const HalfLineQuadrature& hq,
                               const std::function<cplx(double, double)>& kernel,
                               const std::function<cplx(double)>& f) {
  const std::size_t m = hq.node_count;
  std::vector<cplx> fk(m);
  for (std::size_t k = 0; k < m; ++k) fk[k] = hq.weights[k] * f(hq.s_nodes[k]);
  std::vector<cplx> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx acc{0, 0};
    for (std::size_t k = 0; k < m; ++k) acc += kernel(hq.s_nodes[j], hq.s_nodes[k]) * fk[k];
    out[j] = acc;
  }
  return out;
}

cplx inner_product(const HalfLineQuadrature& hq, const std::function<cplx(double)>& f,
                   const std::function<cplx(double)>& g) {
  cplx acc{0, 0};
  for (std::size_t k = 0; k < hq.node_count; ++k)
    acc += hq.weights[k] * std::conj(f(hq.s_nodes[k])) * g(hq.s_nodes[k]);
  return acc;
}

ComplexMatrix discretize_log_kernel(const HalfLineQuadrature& hq,
                                    const std::function<cplx(double, double)>& log_kernel) {
  const std::size_t m = hq.node_count;
  ComplexMatrix a(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      const double sj = hq.s_nodes[j], sk = hq.s_nodes[k];
      const cplx expo = 0.5 * (hq.log_laguerre_weights[j] + hq.log_laguerre_weights[k]) +
                        0.5 * (sj + sk) + log_kernel(sj, sk);
      if (expo.real() > kMaxKernelExponent) throw RangeError("discretized kernel overflows");
      a(j, k) = std::exp(expo);
    }
  return a;
}

ComplexMatrix discretize_p(cplx z, const HalfLineQuadrature& hq) {
  const cplx c = cayley(z);
  return discretize_log_kernel(hq, [c](double s, double t) { return c * (s - t) - (s + t) / 2; });
}

ComplexMatrix discretize_p_transpose(cplx z, const HalfLineQuadrature& hq) {
  const cplx c = cayley(z);
  return discretize_log_kernel(hq, [c](double s, double t) { return c * (t - s) - (s + t) / 2; });
}

ComplexMatrix discretize_q(cplx z, const HalfLineQuadrature& hq) {
  const cplx c = cayley(z);
  return discretize_log_kernel(hq, [c](double s, double t) { return c * (s + t) - (s + t) / 2; });
}

ProjectionResiduals projection_residuals(cplx z, const HalfLineQuadrature& hq) {
  const ComplexMatrix p = discretize_p(z, hq);
  const ComplexMatrix q = discretize_q(z, hq);
  const ComplexMatrix q_inv_point = discretize_q(1.0 / z, hq);
  ProjectionResiduals r;
  r.idempotence = max_abs_diff(p * p, p);
  r.self_adjoint = max_abs_diff(p, p.adjoint());
  r.intertwining = max_abs_diff(p * q, q);
  r.composition = max_abs_diff(q * q_inv_point, p);
  return r;
}

}  // namespace efpdet
