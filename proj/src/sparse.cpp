// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "ddg/error.hpp"

namespace ddg {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<std::tuple<int, int, double>> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  m.col_indices.reserve(triplets.size());
  m.values.reserve(triplets.size());
  for (size_t k = 0; k < triplets.size();) {
    const int i = std::get<0>(triplets[k]);
    const int j = std::get<1>(triplets[k]);
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw Error("from_triplets: index out of range");
    double sum = 0.0;
    while (k < triplets.size() && std::get<0>(triplets[k]) == i &&
           std::get<1>(triplets[k]) == j) {
      sum += std::get<2>(triplets[k]);
      ++k;
    }
    m.col_indices.push_back(j);
    m.values.push_back(sum);
    ++m.row_offsets[i + 1];
  }
  for (int i = 0; i < rows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

SparseMatrix SparseMatrix::from_blocks(int rows, int cols,
                                       const std::vector<std::vector<int>>& blocks) {
  std::vector<std::vector<int>> adj(rows);
  for (const auto& block : blocks)
    for (const int i : block) {
      if (i < 0 || i >= rows) throw Error("from_blocks: index out of range");
      adj[i].insert(adj[i].end(), block.begin(), block.end());
    }
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  size_t total = 0;
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    total += row.size();
  }
  m.col_indices.reserve(total);
  for (int i = 0; i < rows; ++i) {
    m.col_indices.insert(m.col_indices.end(), adj[i].begin(), adj[i].end());
    m.row_offsets[i + 1] = static_cast<int>(m.col_indices.size());
  }
  m.values.assign(total, 0.0);
  return m;
}

int SparseMatrix::position(int i, int j) const {
  const int lo = row_offsets[i], hi = row_offsets[i + 1];
  const auto begin = col_indices.begin() + lo;
  const auto end = col_indices.begin() + hi;
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(lo + (it - begin));
}

void SparseMatrix::matvec(const double* x, double* y) const {
  for (int i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      sum += values[k] * x[col_indices[k]];
    y[i] = sum;
  }
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols) throw Error("matvec: dimension mismatch");
  std::vector<double> y(rows);
  matvec(x.data(), y.data());
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int i = 0; i < rows && i < cols; ++i) {
    const int pos = position(i, i);
    if (pos >= 0) d[i] = values[pos];
  }
  return d;
}

SparseMatrix csr_add(double alpha, const SparseMatrix& A, double beta, const SparseMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw Error("csr_add: dimension mismatch");
  SparseMatrix m;
  m.rows = A.rows;
  m.cols = A.cols;
  m.row_offsets.assign(A.rows + 1, 0);
  m.col_indices.reserve(std::max(A.col_indices.size(), B.col_indices.size()));
  m.values.reserve(m.col_indices.capacity());
  for (int i = 0; i < A.rows; ++i) {
    int ka = A.row_offsets[i], kb = B.row_offsets[i];
    const int ea = A.row_offsets[i + 1], eb = B.row_offsets[i + 1];
    while (ka < ea || kb < eb) {
      int j;
      double v = 0.0;
      const int ja = ka < ea ? A.col_indices[ka] : A.cols;
      const int jb = kb < eb ? B.col_indices[kb] : B.cols;
      j = std::min(ja, jb);
      if (ja == j) v += alpha * A.values[ka++];
      if (jb == j) v += beta * B.values[kb++];
      m.col_indices.push_back(j);
      m.values.push_back(v);
    }
    m.row_offsets[i + 1] = static_cast<int>(m.col_indices.size());
  }
  return m;
}

bool is_symmetric(const SparseMatrix& A, double tol) {
  if (A.rows != A.cols) return false;
  // Build the transpose pattern walk: for CSR this is a bucket pass.
  std::vector<int> next(A.rows + 1, 0);
  for (const int j : A.col_indices) ++next[j + 1];
  for (int i = 0; i < A.rows; ++i) next[i + 1] += next[i];
  std::vector<int> t_col(A.nnz());
  std::vector<double> t_val(A.nnz());
  std::vector<int> cursor(next.begin(), next.end() - 1);
  for (int i = 0; i < A.rows; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const int pos = cursor[A.col_indices[k]]++;
      t_col[pos] = i;
      t_val[pos] = A.values[k];
    }
  // Transposed rows are sorted because the source rows were scanned in order.
  for (int i = 0; i < A.rows; ++i) {
    const int a0 = A.row_offsets[i], a1 = A.row_offsets[i + 1];
    const int b0 = next[i], b1 = next[i + 1];
    if (a1 - a0 != b1 - b0) return false;
    for (int k = 0; k < a1 - a0; ++k) {
      if (A.col_indices[a0 + k] != t_col[b0 + k]) return false;
      if (std::abs(A.values[a0 + k] - t_val[b0 + k]) > tol) return false;
    }
  }
  return true;
}

}  // namespace ddg
