// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

namespace ddg {

// Minimal row-major dense matrix for local element solves and the small-system
// direct fallback.  Not meant for large n.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Solves A x = b by LU with partial pivoting; A is taken by value.  Throws
// ddg::Error on singular systems.
std::vector<double> dense_solve(DenseMatrix A, std::vector<double> b);

}  // namespace ddg
