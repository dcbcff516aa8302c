// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <tuple>
#include <vector>

namespace ddg {

// Compressed sparse row matrix with sorted, unique column indices per row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // rows + 1 entries
  std::vector<int> col_indices;
  std::vector<double> values;

  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<std::tuple<int, int, double>> triplets);

  // Zero-valued matrix with one dense block per index group (pattern union).
  static SparseMatrix from_blocks(int rows, int cols,
                                  const std::vector<std::vector<int>>& blocks);

  int nnz() const { return static_cast<int>(values.size()); }

  // Position of entry (i, j) in values, or -1 if not in the pattern.
  int position(int i, int j) const;

  void matvec(const double* x, double* y) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;
  void set_zero() { std::fill(values.begin(), values.end(), 0.0); }
};

// alpha*A + beta*B with pattern union.
SparseMatrix csr_add(double alpha, const SparseMatrix& A, double beta, const SparseMatrix& B);

// True when the pattern is structurally symmetric and |A_ij - A_ji| <= tol
// for every stored entry.
bool is_symmetric(const SparseMatrix& A, double tol);

}  // namespace ddg
