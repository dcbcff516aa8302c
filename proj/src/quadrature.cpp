// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ddg {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  std::vector<double> x(n), w(n);
  // Roots of P_n on (-1,1) by Newton iteration from the Chebyshev-like guess.
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Evaluate P_n(t) and P_n'(t) via the three-term recurrence.
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 + t);                      // map to (0,1)
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);      // includes the 1/2 interval scale
  }
  return {x, w};
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // Collapse the unit square onto the triangle: (u,v) -> (u, v(1-u)) with
  // Jacobian (1-u).  A monomial x^a y^b pulls back to degree a+b+1 in u and
  // b in v, so n = ceil((degree+2)/2) Gauss points per direction are exact.
  const int n = (degree + 2 + 1) / 2;
  auto [gx, gw] = gauss_legendre_01(n);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = gx[i];
      const double y = gx[j] * (1.0 - gx[i]);
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(gw[i] * gw[j] * (1.0 - gx[i]));
    }
  }
  return rule;
}

FacetRule facet_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("facet_rule: negative degree");
  const int n = (degree + 1 + 1) / 2;
  auto [gx, gw] = gauss_legendre_01(n);
  return FacetRule{degree, std::move(gx), std::move(gw)};
}

}  // namespace ddg
