// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include <cmath>
#include <random>
#include <vector>

#include "ddg/dense.hpp"
#include "ddg/diagnostics.hpp"
#include "ddg/mesh.hpp"
#include "ddg/potential.hpp"
#include "ddg/space.hpp"
#include "ddg/stepping.hpp"
#include "doctest.h"
#include "support/oracle.hpp"

using namespace ddg;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Polynomial potential whose facet drift grad(psi).n stays one-signed on the
// uniform grids (see the matching helper in test_forms.cpp), so both the
// library rule and the oracle rule integrate |grad(psi).n| exactly.
Potential monotone_potential() {
  return Potential::analytic(
      [](double x, double y, double t) { return 2.0 * x * x + x + y + t * x; },
      [](double x, double, double t) { return Vec2{4.0 * x + 1.0 + t, 1.0}; },
      [](double, double, double) { return 4.0; });
}

// Dense single-step oracle: assembles the same scheme from the independent
// dense forms, replaces boundary rows by the identity with g values, and
// solves directly.
std::vector<double> dense_step_oracle(const SpacePtr& space, const std::vector<double>& u_prev,
                                      const Potential& psi, const StepConfig& cfg, Scheme scheme,
                                      double t_new) {
  const int n = space->num_dofs();
  const bool cn = scheme == Scheme::crank_nicolson;
  const double w = cn ? 0.5 * cfg.tau : cfg.tau;
  const double t_form = cn ? t_new - 0.5 * cfg.tau : t_new;

  const DenseMatrix M = testing::dense_mass(space);
  const DenseMatrix A = testing::dense_sip(space, cfg.sigma);
  const DenseMatrix B = testing::dense_upwind(space, psi, cfg.mu, t_form);

  DenseMatrix lhs(n, n);
  std::vector<double> rhs(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lhs(i, j) = M(i, j) + w * (A(i, j) + B(i, j));
      const double r = cn ? M(i, j) - w * (A(i, j) + B(i, j)) : M(i, j);
      rhs[i] += r * u_prev[j];
    }
  }
  if (cfg.forcing) {
    const std::vector<double> load = testing::dense_load(space, cfg.forcing, t_form);
    for (int i = 0; i < n; ++i) rhs[i] += cfg.tau * load[i];
  }
  for (int i = 0; i < n; ++i) {
    if (!space->boundary_mask[i]) continue;
    for (int j = 0; j < n; ++j) lhs(i, j) = (i == j) ? 1.0 : 0.0;
    const Vec2 x = space->node_coords[i];
    rhs[i] = cfg.dirichlet ? cfg.dirichlet(x.x, x.y, t_new, space->boundary_marker[i]) : 0.0;
  }
  return dense_solve(lhs, rhs);
}

}  // namespace

TEST_CASE("a pure diffusion step shrinks the solution") {
  const Mesh mesh = build_uniform_square(4, MeshPattern::right_diagonal);
  const SpacePtr space = create_space(mesh, 1);
  const Field u0 =
      l2_project(space, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });

  StepConfig cfg;
  cfg.tau = 0.01;
  const Potential psi = Potential::zero();

  const Field be = step_backward_euler(u0, psi, cfg, cfg.tau);
  CHECK(l2_norm(be) < l2_norm(u0));
  const Field cn = step_crank_nicolson(u0, psi, cfg, cfg.tau);
  CHECK(l2_norm(cn) <= l2_norm(u0));
}

TEST_CASE("both schemes match a dense one-step oracle on the two-cell mesh") {
  const Mesh mesh = build_uniform_square(1, MeshPattern::right_diagonal);
  const Potential psi = monotone_potential();
  StepConfig cfg;
  cfg.tau = 0.08;
  cfg.sigma = 10.0;
  cfg.mu = 1.0;
  cfg.forcing = [](double x, double y, double t) { return x + 2.0 * y - t; };
  cfg.dirichlet = [](double x, double y, double t, int) { return x + y + 0.5 * t; };
  cfg.solver.rel_tol = 1e-13;

  for (int degree : {1, 2}) {
    const SpacePtr space = create_space(mesh, degree);
    const Field u_prev(space, random_vector(space->num_dofs(), 21));
    const double t_new = 0.37;

    const Field be = step_backward_euler(u_prev, psi, cfg, t_new);
    const std::vector<double> be_oracle =
        dense_step_oracle(space, u_prev.coeffs, psi, cfg, Scheme::backward_euler, t_new);
    CHECK(max_abs_diff(be.coeffs, be_oracle) <= 1e-10);

    const Field cn = step_crank_nicolson(u_prev, psi, cfg, t_new);
    const std::vector<double> cn_oracle =
        dense_step_oracle(space, u_prev.coeffs, psi, cfg, Scheme::crank_nicolson, t_new);
    CHECK(max_abs_diff(cn.coeffs, cn_oracle) <= 1e-10);
  }
}

TEST_CASE("a vanishing step leaves the state unchanged") {
  const Mesh mesh = build_uniform_square(4, MeshPattern::right_diagonal);
  const SpacePtr space = create_space(mesh, 1);
  Field u0 =
      l2_project(space, [](double x, double y) { return x * (1.0 - x) * y * (1.0 - y); });
  // Start from data that already satisfies the homogeneous boundary condition
  // exactly; otherwise the step legitimately snaps the boundary DOFs to g.
  for (int i = 0; i < space->num_dofs(); ++i)
    if (space->boundary_mask[i]) u0.coeffs[i] = 0.0;

  StepConfig cfg;
  cfg.tau = 1e-10;
  cfg.solver.rel_tol = 1e-13;
  const Field u1 = step_crank_nicolson(u0, monotone_potential(), cfg, cfg.tau);

  Field diff(space);
  for (int i = 0; i < space->num_dofs(); ++i) diff.coeffs[i] = u1.coeffs[i] - u0.coeffs[i];
  CHECK(l2_norm(diff) <= 1e-6);
}

TEST_CASE("the discrete L2 norm decays monotonically when lap(psi) <= 0") {
  // Potential with strictly negative Laplacian; homogeneous data and no
  // forcing, so every step must shrink the L2 norm.
  const Potential psi = Potential::analytic(
      [](double x, double y, double) { return 10.0 * (x + y) - x * x - y * y; },
      [](double x, double y, double) { return Vec2{10.0 - 2.0 * x, 10.0 - 2.0 * y}; },
      [](double, double, double) { return -4.0; }, false);
  const Mesh mesh = build_uniform_square(4, MeshPattern::criss_cross);
  const SpacePtr space = create_space(mesh, 1);

  for (Scheme scheme : {Scheme::backward_euler, Scheme::crank_nicolson}) {
    StepConfig cfg;
    cfg.tau = 0.02;
    cfg.scheme = scheme;
    Stepper stepper(space, cfg);

    Field u = l2_project(space, [](double x, double y) {
      return std::sin(kPi * x) * std::sin(kPi * y) + 0.3 * std::sin(3.0 * kPi * x);
    });
    double prev = l2_norm(u);
    for (int n = 1; n <= 10; ++n) {
      u = stepper.advance(u, psi, n * cfg.tau);
      const double now = l2_norm(u);
      CHECK(now <= prev * (1.0 + 1e-13));
      prev = now;
    }
  }
}

TEST_CASE("the solved step satisfies its own algebraic residual contract") {
  const Mesh mesh = build_uniform_square(3, MeshPattern::right_diagonal);
  const SpacePtr space = create_space(mesh, 2);
  StepConfig cfg;
  cfg.tau = 0.05;
  cfg.forcing = [](double x, double y, double) { return 1.0 + x * y; };
  cfg.dirichlet = [](double x, double, double t, int) { return t * x; };
  Stepper stepper(space, cfg);

  const Field u_prev(space, random_vector(space->num_dofs(), 33));
  const Potential psi = monotone_potential();
  const double t_new = 0.2;

  StepSystem sys;
  stepper.build_system(u_prev, psi, t_new, sys);
  const Field u_new = stepper.advance(u_prev, psi, t_new);

  const std::vector<double> Ax = sys.lhs.apply(u_new.coeffs);
  double rnorm = 0.0, bnorm = 0.0;
  for (size_t i = 0; i < sys.rhs.size(); ++i) {
    rnorm += (sys.rhs[i] - Ax[i]) * (sys.rhs[i] - Ax[i]);
    bnorm += sys.rhs[i] * sys.rhs[i];
  }
  CHECK(std::sqrt(rnorm) <= cfg.solver.rel_tol * std::sqrt(bnorm) * 1.000001);
}

TEST_CASE("rebuilding the system for later times tracks the boundary data") {
  // The same Stepper serves all steps of a run: the elimination must follow
  // the time-dependent g rather than freeze the first step's values.
  const Mesh mesh = build_uniform_square(2, MeshPattern::right_diagonal);
  const SpacePtr space = create_space(mesh, 1);
  StepConfig cfg;
  cfg.tau = 0.125;
  cfg.dirichlet = [](double, double, double t, int) { return std::tanh(8.0 * (2.0 * t - 0.5)); };
  cfg.solver.rel_tol = 1e-13;
  Stepper stepper(space, cfg);

  Field u(space);
  const Potential psi = Potential::zero();
  for (int n = 1; n <= 4; ++n) {
    const double t = n * cfg.tau;
    u = stepper.advance(u, psi, t);
    const double g = std::tanh(8.0 * (2.0 * t - 0.5));
    for (int i = 0; i < space->num_dofs(); ++i) {
      if (space->boundary_mask[i]) CHECK(u.coeffs[i] == doctest::Approx(g).epsilon(1e-12));
    }
  }
}

TEST_CASE("the manufactured drift-diffusion problem reproduces its coarsest error") {
  // u = sin(pi t) sin(pi x) sin(pi y), psi = sin(pi t) cos(pi x) cos(pi y);
  // the forcing below is the closed form of u_t - lap(u) - div(u grad(psi))
  // (scripts/derive_forcing.py rederives it symbolically).  One backward
  // Euler run at h = 1/4, tau = h^2, p = 1 up to T = 1/2.
  const int n = 4;
  const double h = 1.0 / n;
  const Potential psi = Potential::analytic(
      [](double x, double y, double t) {
        return std::sin(kPi * t) * std::cos(kPi * x) * std::cos(kPi * y);
      },
      [](double x, double y, double t) {
        return Vec2{-kPi * std::sin(kPi * t) * std::sin(kPi * x) * std::cos(kPi * y),
                    -kPi * std::sin(kPi * t) * std::cos(kPi * x) * std::sin(kPi * y)};
      },
      [](double x, double y, double t) {
        return -2.0 * kPi * kPi * std::sin(kPi * t) * std::cos(kPi * x) * std::cos(kPi * y);
      });

  StepConfig cfg;
  cfg.tau = h * h;
  cfg.sigma = 10.0;
  cfg.mu = 1.0;
  cfg.forcing = [](double x, double y, double t) {
    const double st = std::sin(kPi * t);
    return kPi * std::cos(kPi * t) * std::sin(kPi * x) * std::sin(kPi * y) +
           2.0 * kPi * kPi * st * std::sin(kPi * x) * std::sin(kPi * y) +
           kPi * kPi * st * st * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
  };

  const Mesh mesh = build_uniform_square(n, MeshPattern::right_diagonal);
  const SpacePtr space = create_space(mesh, 1);
  Stepper stepper(space, cfg);

  Field u(space);  // u(0) = 0
  const int steps = static_cast<int>(std::lround(0.5 / cfg.tau));
  for (int s = 1; s <= steps; ++s) u = stepper.advance(u, psi, s * cfg.tau);

  const double err = error_energy_norm(
      u,
      [](double x, double y, double t) {
        return std::sin(kPi * t) * std::sin(kPi * x) * std::sin(kPi * y);
      },
      [](double x, double y, double t) {
        return Vec2{kPi * std::sin(kPi * t) * std::cos(kPi * x) * std::sin(kPi * y),
                    kPi * std::sin(kPi * t) * std::sin(kPi * x) * std::cos(kPi * y)};
      },
      0.5, cfg.tau, cfg.sigma, cfg.mu, psi);
  CHECK(err == doctest::Approx(0.30108).epsilon(0.10));
}
