// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <utility>
#include <vector>

#include "ddg/geometry.hpp"

namespace ddg {

// Quadrature on the reference triangle {(x,y): x,y >= 0, x+y <= 1}, points in
// barycentric coordinates, weights summing to the reference measure 1/2.
struct QuadratureRule {
  int degree = 0;
  std::vector<Bary> points;
  std::vector<double> weights;
};

// Quadrature on the reference facet (0,1), weights summing to 1.
struct FacetRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to (0,1); exact for degree 2n-1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n);

// Collapsed (conical-product) tensor Gauss rule, exact for the given total
// degree, with strictly interior points and positive weights.
QuadratureRule triangle_rule(int degree);

FacetRule facet_rule(int degree);

}  // namespace ddg
