#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "efpdet/errors.hpp"
#include "efpdet/fredholm.hpp"

using namespace efpdet;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0, 1};

// log P at psi = -pi/2, n = 0, phi = 0; identical to 17 digits at m = 128, 256, 512.
constexpr double kReferenceLogP0 = 0.14848548585035801;

std::vector<double> arc_samples(double psi, int count) {
  std::vector<double> out;
  const double t0 = arc_theta_begin(psi), t1 = arc_theta_end(psi);
  for (int k = 0; k < count; ++k) out.push_back(t0 + (t1 - t0) * (k + 0.5) / count);
  return out;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / (1 + std::abs(b)); }

}  // namespace

TEST(Kernel, VanishesAtZeroCoupling) {
  const auto p = ModelParams::make(5, -2.0, {0.2, cplx(0.1, -0.3)}, 0.0);
  for (double t1 : arc_samples(p.psi, 7))
    for (double t2 : arc_samples(p.psi, 4)) EXPECT_EQ(v_kernel(t1, t2, p), cplx(0, 0));
  EXPECT_EQ(v_diagonal(kPi, p), cplx(0, 0));
}

TEST(Kernel, ExchangeSymmetry) {
  std::mt19937_64 rng(11);
  for (int n : {0, 1, 4, 9}) {
    const auto p = ModelParams::make(n, -1.3, {0.0, cplx(0.2, 0.1), cplx(-0.05, 0.0)});
    std::uniform_real_distribution<double> th(arc_theta_begin(p.psi), arc_theta_end(p.psi));
    for (int k = 0; k < 40; ++k) {
      const double a = th(rng), b = th(rng);
      EXPECT_LT(rel(v_kernel(a, b, p), v_kernel(b, a, p)), 1e-12) << n << ' ' << a << ' ' << b;
    }
  }
}

TEST(Kernel, RationalSpotValue) {
  // z1 = -1, z2 = i: r(z1,z2) - r(z2,z1) = (16+4i)/17 - (16-4i)/17 = 8i/17
  const auto p = ModelParams::make(0, -1.0);
  const cplx expected = -(I / (2 * kPi)) * (8.0 * I / 17.0) / (-1.0 - I);
  EXPECT_LT(std::abs(v_kernel(kPi, kPi / 2, p) - expected), 1e-15);
}

TEST(Kernel, CoincidentAndOffArcPointsRejected) {
  const auto p = ModelParams::make(2, -kPi / 2);
  EXPECT_THROW(v_kernel(kPi, kPi, p), DomainError);
  EXPECT_THROW(v_kernel(0.1, kPi, p), DomainError);
  EXPECT_THROW(v_diagonal(0.1, p), DomainError);
}

TEST(Diagonal, ValueAtMinusOne) {
  const auto p = ModelParams::make(0, -kPi / 2);
  EXPECT_LT(std::abs(v_diagonal(kPi, p) - I / (8 * kPi)), 1e-15);
  const auto half = ModelParams::make(0, -kPi / 2, {}, 0.5);
  EXPECT_LT(std::abs(v_diagonal(kPi, half) - 0.5 * I / (8 * kPi)), 1e-15);
}

TEST(Diagonal, MatchesRichardsonLimitOfKernel) {
  // one-sided f(h) = V(theta, theta + h) = V_diag + a h + O(h^2)
  for (int n : {0, 3, 8}) {
    const auto p = ModelParams::make(n, -kPi / 2, {0.0, cplx(0.1, 0.05)});
    for (double theta : arc_samples(p.psi, 12)) {
      auto f = [&](double h) { return v_kernel(theta, theta + h, p); };
      const cplx r1 = (10.0 * f(1e-6) - f(1e-5)) / 9.0;
      const cplx r2 = (10.0 * f(1e-7) - f(1e-6)) / 9.0;
      const cplx d = v_diagonal(theta, p);
      EXPECT_LT(rel(r1, d), 1e-6) << "n=" << n << " theta=" << theta;
      EXPECT_LT(rel(r2, d), 1e-6) << "n=" << n << " theta=" << theta;
    }
  }
}

TEST(Diagonal, FiniteDifferenceConsistency) {
  const auto p = ModelParams::make(4, -2.2, {0.0, 0.1});
  for (double theta : arc_samples(p.psi, 20)) {
    const cplx d = v_diagonal(theta, p);
    EXPECT_LT(std::abs(v_kernel(theta, theta + 1e-6, p) - d), 1e-4 * (1 + std::abs(d)));
  }
}

TEST(Assemble, IdentityAtZeroCoupling) {
  const auto p = ModelParams::make(6, -kPi / 2, {}, 0.0);
  const auto aq = build_arc(p.psi, 32);
  EXPECT_EQ(assemble(p, aq).max_abs(), 1.0);
  EXPECT_EQ(max_abs_diff(assemble(p, aq), ComplexMatrix::identity(32)), 0.0);
  const auto hq = build_halfline(16);
  EXPECT_EQ(max_abs_diff(assemble_finite_rank(p, aq, hq), ComplexMatrix::identity(32)), 0.0);
}

TEST(Assemble, FiniteRankAgreesEntrywise) {
  const auto hq = build_halfline(64);
  const auto aq = build_arc(-kPi / 2, 48);
  for (int n : {0, 4}) {
    const auto p = ModelParams::make(n, -kPi / 2);
    EXPECT_LT(max_abs_diff(assemble(p, aq), assemble_finite_rank(p, aq, hq)), 1e-7) << n;
  }
}

TEST(Assemble, FiniteRankAgreesInLogDeterminant) {
  const auto hq = build_halfline<ExtendedReal>(64);
  const auto aq = build_arc<ExtendedReal>(-kPi / 2, 64);
  for (int n : {0, 4}) {
    const auto p = ModelParams::make(n, -kPi / 2);
    const auto a = logdet(assemble<ExtendedReal>(p, aq));
    const auto b = logdet(assemble_finite_rank<ExtendedReal>(p, aq, hq));
    EXPECT_LT(std::abs(a.log_abs - b.log_abs), 1e-7) << n;
  }
}

TEST(Assemble, NodeDoublingAtFour) {
  const auto p = ModelParams::make(4, -kPi / 2);
  const auto a = fredholm_logdet_at(p, 64);
  const auto b = fredholm_logdet_at(p, 128);
  EXPECT_LT(std::abs(a.log_abs - b.log_abs), 1e-8);
}

TEST(Assemble, EntriesBoundedUpToTwentyFour) {
  const auto aq = build_arc(-kPi / 2, 64);
  for (int n = 0; n <= 24; ++n) {
    const auto m = assemble(ModelParams::make(n, -kPi / 2), aq);
    const auto v = m - ComplexMatrix::identity(64);
    EXPECT_TRUE(v.all_finite()) << n;
    EXPECT_LT(v.max_abs(), 10.0) << n;
  }
}

TEST(Assemble, DoubleAndExtendedAgree) {
  const auto p = ModelParams::make(3, -1.1, {0.0, 0.1});
  const auto a = assemble(p, build_arc(p.psi, 40));
  const auto b = assemble<ExtendedReal>(p, build_arc<ExtendedReal>(p.psi, 40)).cast<double>();
  EXPECT_LT(max_abs_diff(a, b), 1e-13);
}

TEST(LogDetEngine, ZeroCouplingIsExactlyZero) {
  const auto d = fredholm_logdet(ModelParams::make(7, -2.0, {}, 0.0), 64);
  EXPECT_EQ(d.log_abs, 0.0);
  EXPECT_EQ(d.arg, 0.0);
  EXPECT_TRUE(d.converged);
}

TEST(LogDetEngine, PinnedReferenceValue) {
  const auto d = fredholm_logdet(ModelParams::make(0, -kPi / 2), 128);
  EXPECT_NEAR(d.log_abs, kReferenceLogP0, 1e-12);
  EXPECT_TRUE(d.converged);
  EXPECT_TRUE(d.trusted());
  EXPECT_TRUE(d.diagnostic.empty()) << d.diagnostic;
}

TEST(LogDetEngine, StrictlyDecreasingInN) {
  double prev = fredholm_logdet(ModelParams::make(0, -kPi / 2), 64).log_abs;
  for (int n = 1; n <= 12; ++n) {
    const double cur = fredholm_logdet(ModelParams::make(n, -kPi / 2), 64).log_abs;
    EXPECT_LT(cur, prev) << n;
    prev = cur;
  }
}

TEST(LogDetEngine, DeterminantIsReal) {
  for (double psi : {-0.8, -kPi / 2, -2.2})
    for (int n : {0, 3, 8, 12}) {
      const auto d = fredholm_logdet(ModelParams::make(n, psi), 64);
      EXPECT_LT(std::abs(d.arg), 1e-6) << psi << ' ' << n;
    }
}

TEST(LogDetEngine, ConvergenceIsReportedNotThrown) {
  const auto d = fredholm_logdet(ModelParams::make(6, -kPi / 2), 4);
  EXPECT_FALSE(d.converged);
  EXPECT_NE(d.diagnostic.find("node doubling"), std::string::npos);
}

TEST(LogDetEngine, PanelsAgreeWithSinglePanel) {
  const auto p = ModelParams::make(5, -kPi / 2);
  EXPECT_NEAR(fredholm_logdet_at(p, 128, 4).log_abs, fredholm_logdet_at(p, 128).log_abs, 1e-8);
}

TEST(LogDetEngine, RejectsInvalidParameters) {
  EXPECT_THROW(fredholm_logdet(ModelParams{-1, -kPi / 2, {}, 1.0}, 64), DomainError);
  EXPECT_THROW(fredholm_logdet(ModelParams{2, 0.1, {}, 1.0}, 64), DomainError);
}

// |logdet(m) - logdet(2m)| < 1e-8 for m >= 64, n <= 16 and three field angles.
class SelfConvergence : public ::testing::TestWithParam<double> {};

TEST_P(SelfConvergence, NodeDoubling) {
  const double psi = GetParam();
  for (int n = 0; n <= 16; ++n)
    for (std::size_t m : {64u, 128u}) {
      const auto p = ModelParams::make(n, psi);
      const double a = fredholm_logdet_at(p, m).log_abs;
      const double b = fredholm_logdet_at(p, 2 * m).log_abs;
      EXPECT_LT(std::abs(a - b), 1e-8) << "psi=" << psi << " n=" << n << " m=" << m;
    }
}

INSTANTIATE_TEST_SUITE_P(FieldAngles, SelfConvergence, ::testing::Values(-0.8, -kPi / 2, -2.2),
                         [](const auto& info) {
                           return std::string(info.index == 0   ? "psi_m0_8"
                                              : info.index == 1 ? "psi_m_half_pi"
                                                                : "psi_m2_2");
                         });

TEST(PhiStability, DifferenceGrowsSubQuadratically) {
  // the n^2 coefficient does not see phi: diff(n)/n^2 must shrink
  std::vector<double> diff;
  for (int n = 0; n <= 12; ++n) {
    const double a = fredholm_logdet_at(ModelParams::make(n, -kPi / 2), 128).log_abs;
    const double b = fredholm_logdet_at(ModelParams::make(n, -kPi / 2, {0.0, 0.1}), 128).log_abs;
    diff.push_back(std::abs(a - b));
  }
  EXPECT_LT(diff[12] / 144.0, diff[6] / 36.0);
  EXPECT_LT(diff[6] / 36.0, diff[3] / 9.0);
  EXPECT_LT(diff[12] / 144.0, 0.01);
}
