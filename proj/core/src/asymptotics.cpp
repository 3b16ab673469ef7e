#include "efpdet/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "efpdet/errors.hpp"
#include "efpdet/opkernels.hpp"

namespace efpdet {

namespace {

constexpr cplx I{0, 1};

cplx int_power(cplx z, int k) {
  cplx acc{1, 0};
  const cplx base = k >= 0 ? z : 1.0 / z;
  for (int i = 0; i < std::abs(k); ++i) acc *= base;
  return acc;
}

void require_not_one(cplx z, const char* what) {
  if (std::abs(z - 1.0) < kSingularPointTolerance)
    throw SingularPointError(std::string(what) + ": evaluated at z = 1");
}

// Places a into the (bi, bj) block of a 2m x 2m matrix.
void put_block(ComplexMatrix& big, const ComplexMatrix& a, std::size_t bi, std::size_t bj) {
  const std::size_t m = a.dimension();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) big(bi * m + i, bj * m + j) = a(i, j);
}

}  // namespace

Mat2 Mat2::inverse() const {
  const cplx d = det();
  if (d == cplx{0, 0}) throw NumericalError("singular 2x2 matrix");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double Mat2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

OperatorEntry m_op_entry(cplx z, double s, double t, int row, int col, const ModelParams& params) {
  require_not_one(z, "m_op_entry");
  const double gamma = params.gamma;
  if (row == 1 && col == 1) return {gamma * p_kernel(z, t, s), true};
  if (row == 2 && col == 2) return {-gamma * p_kernel(z, s, t), true};
  if (row == 1 && col == 2)
    return {-q_kernel(z, s, t) * int_power(z, -params.n) * std::exp(params.phi<double>(z)), false};
  if (row == 2 && col == 1)
    return {q_kernel(1.0 / z, s, t) * int_power(z, params.n) * std::exp(-params.phi<double>(z)),
            false};
  throw DomainError("m_op_entry: row and col must be 1 or 2");
}

double factor_check_im_ip(cplx z, const ModelParams& params, const HalfLineQuadrature& hq,
                          bool compress) {
  require_not_one(z, "factor_check_im_ip");
  const std::size_t m = hq.node_count;
  const cplx upper_scale = int_power(z, -params.n) * std::exp(params.phi<double>(z));
  const cplx lower_scale = int_power(z, params.n) * std::exp(-params.phi<double>(z));
  const ComplexMatrix a = upper_scale * discretize_q(z, hq);
  const ComplexMatrix b = lower_scale * discretize_q(1.0 / z, hq);
  const auto id = ComplexMatrix::identity(m);

  ComplexMatrix upper(2 * m), lower(2 * m), target(2 * m);
  put_block(upper, id, 0, 0);
  put_block(upper, -1.0 * a, 0, 1);
  put_block(upper, id, 1, 1);

  put_block(lower, id, 0, 0);
  put_block(lower, -1.0 * b, 1, 0);
  put_block(lower, id, 1, 1);

  put_block(target, id, 0, 0);
  put_block(target, -1.0 * a, 0, 1);
  put_block(target, b, 1, 0);
  put_block(target, id, 1, 1);

  ComplexMatrix diff = upper * inverse(lower) - target;
  if (!compress) return diff.max_abs();

  const ComplexMatrix complement = id - discretize_p(z, hq);
  ComplexMatrix projector(2 * m);
  put_block(projector, complement, 0, 0);
  put_block(projector, complement, 1, 1);
  return (projector * diff * projector).max_abs();
}

double decay_check_lensing(const ModelParams& params, double radius, std::size_t samples,
                           const HalfLineQuadrature& hq) {
  if (!(radius > 0.0) || radius == 1.0) throw DomainError("lensing radius must be positive and != 1");
  if (samples < 1) throw DomainError("need at least one sample");
  const double t0 = arc_theta_begin(params.psi);
  const double t1 = arc_theta_end(params.psi);

  std::vector<double> grid{0.0};
  grid.insert(grid.end(), hq.s_nodes.begin(), hq.s_nodes.end());

  double best = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = t0 + (t1 - t0) * (double(k) + 0.5) / double(samples);
    const cplx z = std::polar(radius, theta);
    cplx scale;
    cplx q_point;
    if (radius > 1.0) {
      scale = int_power(z, -params.n) * std::exp(params.phi<double>(z));
      q_point = z;
    } else {
      scale = int_power(z, params.n) * std::exp(-params.phi<double>(z));
      q_point = 1.0 / z;
    }
    const double mag = std::abs(scale);
    for (double s : grid)
      for (double t : grid) best = std::max(best, std::abs(q_kernel(q_point, s, t)) * mag);
  }
  return best;
}

Mat2 jump_im_p(double theta, const ModelParams& params) {
  if (!arc_contains(params.psi, theta)) throw DomainError("jump_im_p: theta not on the arc");
  const cplx z = std::polar(1.0, theta);
  const cplx phi = params.phi<double>(z);
  const cplx z_neg_n = half_power<double>(theta, -2 * params.n);
  const cplx z_pos_n = half_power<double>(theta, 2 * params.n);
  return {2.0, -((1.0 - z) / 2.0) * z_neg_n * std::exp(phi),
          (2.0 / (1.0 - z)) * z_pos_n * std::exp(-phi), 0.0};
}

ConjugatedJump conjugated_jump(double theta, const BranchContext& ctx, const ModelParams& params,
                               double eps) {
  const auto g = boundary_values(BranchFunction::g, theta, ctx, eps);
  const cplx z = std::polar(1.0, theta);
  const cplx phi = params.phi<double>(z);
  const int n = params.n;

  ConjugatedJump out;
  out.direct = {2.0 * std::pow(g.plus / g.minus, n), -((1.0 - z) / 2.0) * std::exp(phi),
                (2.0 / (1.0 - z)) * std::exp(-phi), 0.0};

  // alpha^{n/2} only enters squared, so any square root of alpha will do.
  const cplx alpha_half_n = std::pow(std::sqrt(cplx(ctx.alpha, 0)), n);
  const Mat2 left = Mat2::diag(alpha_half_n * std::pow(g.minus, -n),
                               std::pow(g.minus, n) / alpha_half_n);
  const Mat2 right = Mat2::diag(std::pow(g.plus, n) / alpha_half_n,
                                alpha_half_n * std::pow(g.plus, -n));
  out.via_conjugation = left * jump_im_p(theta, params) * right;
  out.identity_residual = (out.via_conjugation - out.direct).max_abs();
  return out;
}

Mat2 limit_jump(cplx z, const ModelParams& params) {
  require_not_one(z, "limit_jump");
  const cplx phi = params.phi<double>(z);
  return {0.0, -((1.0 - z) / 2.0) * std::exp(phi), (2.0 / (1.0 - z)) * std::exp(-phi), 0.0};
}

Diagonalization diagonalize(cplx z, const ModelParams& params) {
  require_not_one(z, "diagonalize");
  const cplx k = 2.0 * I / (z - 1.0) * std::exp(-params.phi<double>(z));
  Diagonalization out;
  out.s = {1.0, 1.0, k, -k};
  out.d = Mat2::diag(I, -I);
  out.residual = (out.s * out.d * out.s.inverse() - limit_jump(z, params)).max_abs();
  return out;
}

Mat2 f_tilde_from_beta(cplx z, cplx beta, const ModelParams& params) {
  const cplx phi = params.phi<double>(z);
  const cplx sum = (beta + 1.0 / beta) / 2.0;
  const cplx diff = beta - 1.0 / beta;
  return {sum, -I * (z - 1.0) * std::exp(phi) * diff / 4.0, I * std::exp(-phi) * diff / (z - 1.0),
          sum};
}

Mat2 f_tilde(cplx z, const BranchContext& ctx, const ModelParams& params) {
  if (std::abs(z - 1.0) <= 1e-8) throw SingularPointError("f_tilde: pole at z = 1");
  return f_tilde_from_beta(z, beta_fn(z, ctx), params);
}

cplx f_tilde_22(cplx z, const BranchContext& ctx) {
  const cplx beta = beta_fn(z, ctx);
  return (beta + 1.0 / beta) / 2.0;
}

JumpEvaluation f_tilde_boundary(double theta, Side side, const BranchContext& ctx,
                                const ModelParams& params, double eps, cplx beta_fault) {
  // the fault models a wrong sheet on the inner side of the cut only; a
  // constant factor on both sides would still solve the jump problem
  const cplx factor = side == Side::plus ? beta_fault : cplx{1, 0};
  auto eval = [&](cplx z) { return f_tilde_from_beta(z, factor * beta_fn(z, ctx), params); };
  JumpEvaluation out;
  out.name = "f_tilde";
  out.z = std::polar(1.0, theta);
  out.side = side == Side::plus ? EvalSide::plus : EvalSide::minus;
  out.matrix = boundary_limit(eval, ctx.psi, theta, side, eps);
  return out;
}

double f_tilde_jump_residual(double theta, const BranchContext& ctx, const ModelParams& params,
                             double eps, cplx beta_fault) {
  const Mat2 plus = f_tilde_boundary(theta, Side::plus, ctx, params, eps, beta_fault).matrix;
  const Mat2 minus = f_tilde_boundary(theta, Side::minus, ctx, params, eps, beta_fault).matrix;
  return (plus - minus * limit_jump(std::polar(1.0, theta), params)).max_abs();
}

Prediction predictions(int n, double psi) {
  if (n < 0) throw DomainError("predictions: n must be nonnegative");
  if (!(psi > -std::numbers::pi && psi < 0.0)) throw DomainError("predictions: psi outside (-pi, 0)");
  const double s = std::sin(psi / 2);
  const double log_s = std::log(std::abs(s));
  Prediction p;
  p.n = n;
  p.psi = psi;
  p.det_psi22 = -std::pow(s, 2 * n + 1);
  p.log_ratio = (2 * n + 1) * log_s;
  p.leading_log_p = double(n) * double(n) * log_s + 0.0;  // no negative zero at n = 0
  return p;
}

}  // namespace efpdet
