// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "ddg/forms.hpp"
#include "ddg/linsolve.hpp"
#include "ddg/potential.hpp"
#include "ddg/space.hpp"
#include "ddg/sparse.hpp"

namespace ddg {

enum class Scheme { backward_euler, crank_nicolson };

// Parameters of one implicit time step.  forcing and dirichlet may be left
// empty for f = 0 and homogeneous boundary values.
struct StepConfig {
  double tau = 0.0;
  double sigma = 10.0;
  double mu = 1.0;
  Scheme scheme = Scheme::backward_euler;
  TimeScalarFn forcing;
  BoundaryFn dirichlet;
  // Residual contract for the inner linear solves.  The default is looser
  // than the solver's own: step systems are stiffness-dominated while their
  // right-hand sides carry a mass-matrix factor, so demanding 1e-12 of
  // ||b - Ax|| / ||b|| can sit below the attainable floating-point floor on
  // fine meshes.  1e-10 stays orders of magnitude under discretisation error.
  SolveOptions solver{.rel_tol = 1e-10, .max_iter = 200000};
};

// The eliminated linear system of one implicit step: lhs u = rhs.
struct StepSystem {
  SparseMatrix lhs;
  std::vector<double> rhs;
};

// Drives (M + w(A + B)) u_new = rhs over a fixed space and config, caching
// the sparsity pattern, facet quadrature, mass and SIP values, and the
// Dirichlet elimination between steps.  The weight w is tau for backward
// Euler and tau/2 for Crank-Nicolson; the drift form B and the forcing are
// evaluated at t_new (backward Euler) or t_new - tau/2 (Crank-Nicolson),
// boundary values always at t_new, where the new state lives.
class Stepper {
 public:
  Stepper(SpacePtr space, StepConfig cfg);

  const SpacePtr& space() const { return space_; }
  const StepConfig& config() const { return cfg_; }
  const SystemAssembler& forms() const { return forms_; }
  const std::vector<int>& boundary_dofs() const { return elim_.boundary_dofs(); }
  std::vector<double> boundary_values(double t) const { return elim_.boundary_values(t); }

  // Assembles the eliminated system whose solution is the state at t_new;
  // u_prev is the state at t_new - tau.  sys is recycled when its pattern
  // already matches.  Backward Euler:
  //   (M + tau (A + B)) u = M u_prev + tau load(f)
  // Crank-Nicolson:
  //   (M + (tau/2)(A + B)) u = (M - (tau/2)(A + B)) u_prev + tau load(f)
  void build_system(const Field& u_prev, const Potential& psi, double t_new, StepSystem& sys);

  // Builds and solves the step system, warm-started from u_prev.
  Field advance(const Field& u_prev, const Potential& psi, double t_new);

 private:
  SpacePtr space_;
  StepConfig cfg_;
  SystemAssembler forms_;
  DirichletEliminator elim_;
  SparseMatrix drift_;   // B(psi, t) on the shared pattern
  SparseMatrix rhs_op_;  // Crank-Nicolson right-hand operator
  StepSystem work_;      // advance's system storage
};

// Single-step entry points (one-shot assembly; loops should hold a Stepper).
// cfg.scheme is ignored; the function name selects the scheme.
Field step_backward_euler(const Field& u_prev, const Potential& psi, const StepConfig& cfg,
                          double t_new);
Field step_crank_nicolson(const Field& u_prev, const Potential& psi, const StepConfig& cfg,
                          double t_new);

}  // namespace ddg
