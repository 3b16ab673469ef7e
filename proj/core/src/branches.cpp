#include "efpdet/branches.hpp"

#include <numbers>
#include <sstream>

#include "efpdet/errors.hpp"

namespace efpdet {

namespace {

constexpr double pi = std::numbers::pi;

void require_off_arc(cplx z, const BranchContext& ctx, const char* what) {
  if (distance_to_arc(ctx.psi, z) < kOnArcTolerance) {
    std::ostringstream os;
    os << what << ": z = " << z << " lies on the cut C";
    throw SingularPointError(os.str());
  }
}

// w(z) e^{i(pi + psi)}: C is mapped onto the negative real axis.
cplx rotated_ratio(cplx z, const BranchContext& ctx) {
  const cplx w = (z - ctx.endpoint_begin) / (z - ctx.endpoint_end);
  return w * std::polar(1.0, pi + ctx.psi);
}

}  // namespace

BranchContext BranchContext::make(double psi) {
  check_psi(psi);
  BranchContext ctx;
  ctx.psi = psi;
  const double s = std::sin(psi / 2);
  ctx.alpha = -s * s;
  ctx.endpoint_begin = std::polar(1.0, -psi);
  ctx.endpoint_end = std::polar(1.0, psi);
  return ctx;
}

cplx sqrt_R(cplx z, const BranchContext& ctx) {
  require_off_arc(z, ctx, "sqrt_R");
  // sqrt(w) = e^{-i(pi+psi)/2} sqrt(u); equals 1 at infinity.
  const cplx root = std::polar(1.0, -(pi + ctx.psi) / 2) * std::sqrt(rotated_ratio(z, ctx));
  return (z - ctx.endpoint_end) * root;
}

cplx g_fn(cplx z, const BranchContext& ctx) {
  require_off_arc(z, ctx, "g_fn");
  const double s = std::sin(ctx.psi / 2);
  if (z == cplx{0, 0}) return {s * s, 0};
  // each form cancels where the other does not
  if (std::abs(z) > 1.0) return (sqrt_R(z, ctx) + z - 1.0) / (2.0 * z);
  return 2 * s * s / (sqrt_R(z, ctx) - z + 1.0);
}

cplx beta_fn(cplx z, const BranchContext& ctx) {
  require_off_arc(z, ctx, "beta_fn");
  if (std::abs(z - ctx.endpoint_begin) < kBranchPointExclusion ||
      std::abs(z - ctx.endpoint_end) < kBranchPointExclusion)
    throw SingularPointError("beta_fn: too close to a branch point");
  return std::polar(1.0, (pi + ctx.psi) / 4) * std::pow(rotated_ratio(z, ctx), -0.25);
}

cplx half_power_checked(double theta, int k) {
  if (!(theta > 0.0 && theta < 2 * pi))
    throw DomainError("half_power: theta must lie in (0, 2 pi)");
  return half_power<double>(theta, k);
}

BoundaryPair boundary_values(BranchFunction fn, double theta, const BranchContext& ctx,
                             double eps) {
  auto eval = [&](cplx z) { return fn == BranchFunction::g ? g_fn(z, ctx) : beta_fn(z, ctx); };
  return {boundary_limit(eval, ctx.psi, theta, Side::plus, eps),
          boundary_limit(eval, ctx.psi, theta, Side::minus, eps)};
}

}  // namespace efpdet
