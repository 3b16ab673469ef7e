#pragma once

// Classical Gauss rules computed by Newton iteration on the three-term
// recurrences. Templated on the real type so the determinant engine can
// build its grids in extended precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "efpdet/errors.hpp"

namespace efpdet {

template <typename Real>
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1], nodes ascending.
template <typename Real>
GaussRule<Real> gauss_legendre(std::size_t m) {
  if (m < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule<Real> rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  const Real pi = std::numbers::pi_v<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(m) + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const Real p2 = ((2 * Real(k) - 1) * x * p1 - (Real(k) - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(m) * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * eps) break;
    }
    // recompute derivative at the converged root
    Real p0 = 1, p1 = x;
    for (std::size_t k = 2; k <= m; ++k) {
      const Real p2 = ((2 * Real(k) - 1) * x * p1 - (Real(k) - 1) * p0) / Real(k);
      p0 = p1;
      p1 = p2;
    }
    dp = Real(m) * (x * p1 - p0) / (x * x - 1);
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0;
  return rule;
}

/// m-point Gauss-Laguerre rule for weight e^{-s} on [0, inf). Returns the raw
/// weights lambda_k (summing to one) together with log(lambda_k), which stay
/// representable even where lambda_k underflows.
template <typename Real>
struct LaguerreRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  std::vector<Real> log_weights;
};

template <typename Real>
LaguerreRule<Real> gauss_laguerre(std::size_t m) {
  if (m < 1) throw DomainError("gauss_laguerre: need at least one node");
  LaguerreRule<Real> rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.log_weights.resize(m);

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real n = Real(m);
  Real z = 0;
  for (std::size_t i = 0; i < m; ++i) {
    // initial guesses (Stroud & Secrest)
    if (i == 0) {
      z = 3 / (1 + Real(2.4) * n);
    } else if (i == 1) {
      z += 15 / (1 + Real(2.5) * n);
    } else {
      const Real ai = Real(i - 1);
      z += ((1 + Real(2.55) * ai) / (Real(1.9) * ai)) * (z - rule.nodes[i - 2]);
    }
    Real pp = 0, p1 = 0, p2 = 0;
    for (int iter = 0; iter < 200; ++iter) {
      p1 = 1;
      p2 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((2 * Real(j) - 1 - z) * p2 - (Real(j) - 1) * p3) / Real(j);
      }
      pp = n * (p1 - p2) / z;
      const Real dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 8 * eps * std::max(Real(1), z)) break;
    }
    rule.nodes[i] = z;
    // lambda = 1 / (z * L_m'(z)^2) in the normalization L_m(0) = 1;
    // with pp = L_m'(z) this is computed in log form.
    p1 = 1;
    p2 = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const Real p3 = p2;
      p2 = p1;
      p1 = ((2 * Real(j) - 1 - z) * p2 - (Real(j) - 1) * p3) / Real(j);
    }
    pp = n * (p1 - p2) / z;
    rule.log_weights[i] = -std::log(z) - 2 * std::log(std::abs(pp));
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }
  return rule;
}

}  // namespace efpdet
