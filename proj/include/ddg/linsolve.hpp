// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ddg/sparse.hpp"

namespace ddg {

struct SolveOptions {
  double rel_tol = 1e-12;
  long max_iter = 20000;  // Krylov iterations across restarts
  // Optional warm start; must match the system dimension.
  const std::vector<double>* x0 = nullptr;
  // Symmetric systems are detected and routed to preconditioned CG, which
  // avoids restarted-GMRES stagnation on the Poisson solves.  The returned
  // residual contract is identical either way.
  bool use_cg_when_symmetric = true;
};

// Solves A x = b to the true-residual contract ||b - A x|| <= rel_tol*||b||.
// Method: restarted GMRES(50) with ILU(0) preconditioning, degrading to
// diagonal (Jacobi) scaling when the factorisation hits a vanishing pivot;
// detected-symmetric systems go to Jacobi-preconditioned CG instead.  A dense
// LU fallback covers n <= 2000 when the iteration fails to converge.  Throws
// ddg::Error on non-convergence.
std::vector<double> solve_linear(const SparseMatrix& A, const std::vector<double>& b,
                                 const SolveOptions& opts = {});
std::vector<double> solve_linear(const SparseMatrix& A, const std::vector<double>& b,
                                 double rel_tol, long max_iter);

}  // namespace ddg
