// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddg/dense.hpp"
#include "ddg/error.hpp"

namespace ddg {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Inverse Jacobi scaling.  If any diagonal entry vanishes the preconditioner
// degrades to the identity rather than dividing by zero.
std::vector<double> jacobi_inverse(const SparseMatrix& A) {
  std::vector<double> d = A.diagonal();
  for (const double v : d)
    if (v == 0.0) {
      std::fill(d.begin(), d.end(), 1.0);
      return d;
    }
  for (double& v : d) v = 1.0 / v;
  return d;
}

// Preconditioner for the GMRES path: incomplete LU on the matrix pattern,
// falling back to Jacobi scaling when the factorisation meets a vanishing
// pivot.  Advection-dominated step operators need the triangular transport
// sweeps; diagonal scaling alone leaves the Krylov iteration crawling through
// thousands of restarts on those systems.
class Preconditioner {
 public:
  explicit Preconditioner(const SparseMatrix& A) : A_(A), y_(A.rows) {
    if (!factor_ilu0()) {
      luval_.clear();
      dinv_ = jacobi_inverse(A);
    }
  }

  void apply(const double* r, double* z) const {
    const int n = A_.rows;
    if (luval_.empty()) {
      for (int i = 0; i < n; ++i) z[i] = dinv_[i] * r[i];
      return;
    }
    // Forward solve L y = r (unit lower), then backward solve U z = y.
    for (int i = 0; i < n; ++i) {
      double s = r[i];
      const int end = diag_pos_[i];
      for (int k = A_.row_offsets[i]; k < end; ++k) s -= luval_[k] * y_[A_.col_indices[k]];
      y_[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y_[i];
      for (int k = diag_pos_[i] + 1; k < A_.row_offsets[i + 1]; ++k) {
        s -= luval_[k] * z[A_.col_indices[k]];
      }
      z[i] = s / luval_[diag_pos_[i]];
    }
  }

 private:
  bool factor_ilu0() {
    const int n = A_.rows;
    diag_pos_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      for (int k = A_.row_offsets[i]; k < A_.row_offsets[i + 1]; ++k) {
        if (A_.col_indices[k] == i) {
          diag_pos_[i] = k;
          break;
        }
      }
      if (diag_pos_[i] < 0) return false;  // structurally missing diagonal
    }
    luval_ = A_.values;
    std::vector<int> pos(n, -1);  // column -> position scratch for row i
    for (int i = 0; i < n; ++i) {
      const int row_begin = A_.row_offsets[i], row_end = A_.row_offsets[i + 1];
      for (int k = row_begin; k < row_end; ++k) pos[A_.col_indices[k]] = k;
      for (int k = row_begin; k < diag_pos_[i]; ++k) {
        const int j = A_.col_indices[k];
        const double ujj = luval_[diag_pos_[j]];
        if (ujj == 0.0) {
          for (int t = row_begin; t < row_end; ++t) pos[A_.col_indices[t]] = -1;
          return false;
        }
        const double lij = luval_[k] / ujj;
        luval_[k] = lij;
        for (int t = diag_pos_[j] + 1; t < A_.row_offsets[j + 1]; ++t) {
          const int p = pos[A_.col_indices[t]];
          if (p >= 0) luval_[p] -= lij * luval_[t];
        }
      }
      const bool pivot_ok = luval_[diag_pos_[i]] != 0.0;
      for (int k = row_begin; k < row_end; ++k) pos[A_.col_indices[k]] = -1;
      if (!pivot_ok) return false;
    }
    return true;
  }

  const SparseMatrix& A_;
  std::vector<double> luval_;    // empty means the Jacobi fallback is active
  std::vector<int> diag_pos_;
  std::vector<double> dinv_;
  mutable std::vector<double> y_;
};

struct IterationOutcome {
  std::vector<double> x;
  double residual = 0.0;  // absolute true residual at exit
  bool converged = false;
};

// Right-preconditioned restarted GMRES: solve A M^{-1} y = b, x = M^{-1} y,
// so the monitored residual is the true residual of the original system.
IterationOutcome gmres(const SparseMatrix& A, const std::vector<double>& b,
                       const Preconditioner& M, double abs_tol, long max_iter,
                       std::vector<double> x) {
  constexpr int kRestart = 50;
  const int n = A.rows;
  std::vector<std::vector<double>> V;
  std::vector<double> H((kRestart + 1) * kRestart, 0.0);
  std::vector<double> cs(kRestart), sn(kRestart), g(kRestart + 1);
  std::vector<double> r(n), w(n), z(n);

  long used = 0;
  while (true) {
    A.matvec(x.data(), r.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    if (beta <= abs_tol) return {std::move(x), beta, true};
    if (used >= max_iter) return {std::move(x), beta, false};

    V.assign(1, r);
    for (int i = 0; i < n; ++i) V[0][i] /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    std::fill(H.begin(), H.end(), 0.0);

    int k = 0;
    for (; k < kRestart && used < max_iter; ++k) {
      ++used;  // counted up front so breakdown exits still consume budget
      M.apply(V[k].data(), z.data());
      A.matvec(z.data(), w.data());
      // Modified Gram-Schmidt.
      for (int j = 0; j <= k; ++j) {
        const double hjk = dot_vec(w, V[j]);
        H[j * kRestart + k] = hjk;
        for (int i = 0; i < n; ++i) w[i] -= hjk * V[j][i];
      }
      const double hkk = norm2(w);
      // Apply stored Givens rotations to the new column.
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * H[j * kRestart + k] + sn[j] * H[(j + 1) * kRestart + k];
        H[(j + 1) * kRestart + k] =
            -sn[j] * H[j * kRestart + k] + cs[j] * H[(j + 1) * kRestart + k];
        H[j * kRestart + k] = t;
      }
      const double denom = std::hypot(H[k * kRestart + k], hkk);
      if (denom == 0.0) {  // exact breakdown: residual already minimal
        ++k;
        break;
      }
      cs[k] = H[k * kRestart + k] / denom;
      sn[k] = hkk / denom;
      H[k * kRestart + k] = denom;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (hkk != 0.0) {
        V.push_back(w);
        for (int i = 0; i < n; ++i) V[k + 1][i] /= hkk;
      } else {
        ++k;  // happy breakdown: basis is invariant, solve and exit the cycle
        break;
      }
      if (std::abs(g[k + 1]) <= abs_tol) {
        ++k;
        break;
      }
    }
    if (k == 0) return {std::move(x), beta, false};
    // Back-substitute H y = g on the k columns built so far.
    std::vector<double> y(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i * kRestart + j] * y[j];
      y[i] = (H[i * kRestart + i] != 0.0) ? s / H[i * kRestart + i] : 0.0;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) z[i] += V[j][i] * y[j];
    M.apply(z.data(), w.data());
    for (int i = 0; i < n; ++i) x[i] += w[i];
    // Loop continues: the true residual is recomputed at the top, so the
    // Givens estimate never substitutes for the contract.
  }
}

// Jacobi-preconditioned conjugate gradients with explicit residual tracking.
IterationOutcome conjugate_gradient(const SparseMatrix& A, const std::vector<double>& b,
                                    const std::vector<double>& dinv, double abs_tol,
                                    long max_iter, std::vector<double> x) {
  const int n = A.rows;
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A.matvec(x.data(), r.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  if (rnorm <= abs_tol) return {std::move(x), rnorm, true};
  for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot_vec(r, z);
  for (long it = 0; it < max_iter; ++it) {
    A.matvec(p.data(), Ap.data());
    const double pAp = dot_vec(p, Ap);
    if (pAp <= 0.0) break;  // not SPD after all; let the caller fall back
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
    // Guard against drift of the recurrence residual.
    if ((it + 1) % 256 == 0) {
      A.matvec(x.data(), r.data());
      for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    }
    rnorm = norm2(r);
    if (rnorm <= abs_tol) {
      A.matvec(x.data(), r.data());
      for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
      rnorm = norm2(r);
      if (rnorm <= abs_tol) return {std::move(x), rnorm, true};
    }
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot_vec(r, z);
    for (int i = 0; i < n; ++i) p[i] = z[i] + (rz_new / rz) * p[i];
    rz = rz_new;
  }
  return {std::move(x), rnorm, false};
}

std::vector<double> lu_fallback(const SparseMatrix& A, const std::vector<double>& b,
                                double abs_tol, double iterative_residual) {
  DenseMatrix D(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      D(i, A.col_indices[k]) = A.values[k];
  std::vector<double> x;
  try {
    x = dense_solve(std::move(D), b);
  } catch (const Error& e) {
    throw Error("solve_linear: iterative solver stalled (residual " +
                std::to_string(iterative_residual) + ") and the dense fallback failed: " +
                e.what());
  }
  std::vector<double> r = A.apply(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double res = norm2(r);
  if (res > abs_tol)
    throw Error("solve_linear: no convergence (final residual " + std::to_string(res) +
                " above tolerance; system may be singular or inconsistent)");
  return x;
}

}  // namespace

std::vector<double> solve_linear(const SparseMatrix& A, const std::vector<double>& b,
                                 const SolveOptions& opts) {
  if (A.rows != A.cols) throw Error("solve_linear: matrix must be square");
  if (static_cast<int>(b.size()) != A.rows) throw Error("solve_linear: dimension mismatch");
  const double bnorm = norm2(b);
  const double abs_tol = opts.rel_tol * bnorm;
  std::vector<double> x(A.rows, 0.0);
  if (opts.x0) {
    if (opts.x0->size() != b.size()) throw Error("solve_linear: warm start dimension mismatch");
    x = *opts.x0;
  }
  if (bnorm == 0.0) return std::vector<double>(A.rows, 0.0);

  IterationOutcome out;
  if (opts.use_cg_when_symmetric && is_symmetric(A, 1e-14)) {
    const std::vector<double> dinv = jacobi_inverse(A);
    out = conjugate_gradient(A, b, dinv, abs_tol, opts.max_iter, std::move(x));
    if (!out.converged) {  // CG may bail on indefiniteness; give GMRES the rest
      const Preconditioner M(A);
      out = gmres(A, b, M, abs_tol, opts.max_iter, std::move(out.x));
    }
  } else {
    const Preconditioner M(A);
    out = gmres(A, b, M, abs_tol, opts.max_iter, std::move(x));
  }
  if (out.converged) return std::move(out.x);
  if (A.rows <= 2000) return lu_fallback(A, b, abs_tol, out.residual);
  throw Error("solve_linear: no convergence within " + std::to_string(opts.max_iter) +
              " iterations (relative residual " +
              std::to_string(out.residual / (bnorm > 0 ? bnorm : 1.0)) + ")");
}

std::vector<double> solve_linear(const SparseMatrix& A, const std::vector<double>& b,
                                 double rel_tol, long max_iter) {
  SolveOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_iter = max_iter;
  return solve_linear(A, b, opts);
}

}  // namespace ddg
