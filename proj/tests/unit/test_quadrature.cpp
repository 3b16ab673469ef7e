#include <gtest/gtest.h>

#include <cmath>

#include "efpdet/errors.hpp"
#include "efpdet/quadrature.hpp"

using namespace efpdet;

TEST(GaussLegendre, TwoAndThreePointRulesMatchTextbookValues) {
  const auto r2 = gauss_legendre<double>(2);
  EXPECT_NEAR(r2.nodes[0], -1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.nodes[1], 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.weights[0], 1.0, 1e-15);

  const auto r3 = gauss_legendre<double>(3);
  EXPECT_NEAR(r3.nodes[0], -std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(r3.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(r3.weights[0], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(r3.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2mMinus1) {
  for (std::size_t m : {4u, 17u, 64u, 128u}) {
    const auto r = gauss_legendre<double>(m);
    for (std::size_t k = 0; k <= std::min<std::size_t>(2 * m - 1, 40); ++k) {
      double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += r.weights[j] * std::pow(r.nodes[j], double(k));
      const double exact = k % 2 == 0 ? 2.0 / double(k + 1) : 0.0;
      EXPECT_NEAR(s, exact, 1e-13) << "m=" << m << " k=" << k;
    }
  }
}

TEST(GaussLegendre, NodesAscendingAndInsideInterval) {
  const auto r = gauss_legendre<long double>(256);
  for (std::size_t j = 0; j < r.nodes.size(); ++j) {
    EXPECT_GT(r.nodes[j], -1.0L);
    EXPECT_LT(r.nodes[j], 1.0L);
    if (j > 0) {
      EXPECT_LT(r.nodes[j - 1], r.nodes[j]);
    }
  }
  long double sum = 0;
  for (auto w : r.weights) sum += w;
  EXPECT_NEAR(double(sum), 2.0, 1e-15);
}

TEST(GaussLaguerre, TwoPointRule) {
  const auto r = gauss_laguerre<double>(2);
  EXPECT_NEAR(r.nodes[0], 2 - std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r.nodes[1], 2 + std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r.weights[0], (2 + std::sqrt(2.0)) / 4, 1e-14);
  EXPECT_NEAR(r.weights[1], (2 - std::sqrt(2.0)) / 4, 1e-14);
}

TEST(GaussLaguerre, MomentsAreFactorials) {
  for (std::size_t m : {8u, 32u, 64u}) {
    const auto r = gauss_laguerre<double>(m);
    double fact = 1;
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) fact *= k;
      double s = 0;
      for (std::size_t j = 0; j < m; ++j) s += r.weights[j] * std::pow(r.nodes[j], k);
      EXPECT_NEAR(s / fact, 1.0, 1e-11) << "m=" << m << " k=" << k;
    }
  }
}

TEST(GaussLaguerre, LogWeightsConsistent) {
  const auto r = gauss_laguerre<double>(128);
  for (std::size_t j = 0; j < r.nodes.size(); ++j) {
    if (r.weights[j] > 1e-300) {
      EXPECT_NEAR(std::log(r.weights[j]), r.log_weights[j], 1e-9);
    }
  }
}

TEST(Quadrature, RejectsEmptyRules) {
  EXPECT_THROW(gauss_legendre<double>(0), DomainError);
  EXPECT_THROW(gauss_laguerre<double>(0), DomainError);
}
