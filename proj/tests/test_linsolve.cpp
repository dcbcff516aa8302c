// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "ddg/dense.hpp"
#include "ddg/error.hpp"
#include "ddg/linsolve.hpp"
#include "ddg/sparse.hpp"
#include "doctest.h"

using namespace ddg;

namespace {

double residual_norm(const SparseMatrix& A, const std::vector<double>& x,
                     const std::vector<double>& b) {
  std::vector<double> r = A.apply(x);
  double s = 0.0;
  for (size_t i = 0; i < b.size(); ++i) s += (b[i] - r[i]) * (b[i] - r[i]);
  return std::sqrt(s);
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("dense LU reproduces a hand-checked solution and rejects singular input") {
  DenseMatrix A(2, 2);
  A(0, 0) = 2.0;
  A(0, 1) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 3.0;
  const std::vector<double> x = dense_solve(A, {5.0, 10.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));

  DenseMatrix S(2, 2);
  S(0, 0) = 1.0;
  S(0, 1) = 2.0;
  S(1, 0) = 2.0;
  S(1, 1) = 4.0;
  CHECK_THROWS_AS(dense_solve(S, {1.0, 1.0}), Error);
}

TEST_CASE("the sparse solver matches dense LU on small random systems") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    DenseMatrix D(n, n);
    std::vector<std::tuple<int, int, double>> trip;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = u(rng);
        if (i == j) v += 4.0;  // keep it comfortably invertible
        D(i, j) = v;
        trip.emplace_back(i, j, v);
      }
    const SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(trip));
    std::vector<double> b(n);
    for (double& v : b) v = u(rng);
    const std::vector<double> x = solve_linear(A, b, 1e-13, 2000);
    const std::vector<double> y = dense_solve(D, b);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-9));
  }
}

TEST_CASE("the solver meets its true-residual contract on a stiff symmetric system") {
  // 1D Laplacian, condition number ~ (n/pi)^2.  n is kept moderate so that
  // the demanded residual stays above the floating-point floor eps*|A||x|.
  const int n = 100;
  std::vector<std::tuple<int, int, double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0);
    if (i > 0) trip.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) trip.emplace_back(i, i + 1, -1.0);
  }
  const SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(trip));
  std::vector<double> b(n, 1.0);
  b[n / 3] = -2.0;
  const double tol = 1e-12;
  const std::vector<double> x = solve_linear(A, b, tol, 20000);
  CHECK(residual_norm(A, x, b) <= tol * vec_norm(b));
}

TEST_CASE("a nonsymmetric advection-like system is solved to tolerance") {
  const int n = 300;
  std::vector<std::tuple<int, int, double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 3.0);
    if (i > 0) trip.emplace_back(i, i - 1, -2.0);
    if (i + 1 < n) trip.emplace_back(i, i + 1, -0.5);
  }
  const SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(trip));
  std::vector<double> b(n, 0.0);
  b[0] = 1.0;
  b[n - 1] = -1.0;
  const double tol = 1e-12;
  const std::vector<double> x = solve_linear(A, b, tol, 20000);
  CHECK(residual_norm(A, x, b) <= tol * vec_norm(b));
}

TEST_CASE("warm starts are accepted and do not change the answer") {
  const int n = 50;
  std::vector<std::tuple<int, int, double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0);
    if (i > 0) trip.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) trip.emplace_back(i, i + 1, -1.0);
  }
  const SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(trip));
  std::vector<double> b(n, 1.0);
  const std::vector<double> cold = solve_linear(A, b, 1e-13, 10000);
  SolveOptions opts;
  opts.rel_tol = 1e-13;
  opts.x0 = &cold;
  const std::vector<double> warm = solve_linear(A, b, opts);
  CHECK(residual_norm(A, warm, b) <= 1e-13 * vec_norm(b));
}

TEST_CASE("a singular system raises a descriptive error") {
  // Second row is identically zero.
  const SparseMatrix A = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {2, 2, 1.0}});
  const std::vector<double> b = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(solve_linear(A, b, 1e-12, 200), Error);
}

TEST_CASE("a zero right-hand side returns the zero vector") {
  const SparseMatrix A = SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 2.0}});
  const std::vector<double> x = solve_linear(A, {0.0, 0.0}, 1e-12, 10);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}
