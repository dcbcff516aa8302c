// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <vector>

#include "ddg/space.hpp"
#include "ddg/sparse.hpp"
#include "ddg/stepping.hpp"

namespace ddg {

// Per-DOF box constraints; -inf / +inf entries disable a side.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

enum class BoundsKind {
  positivity,          // [0, +inf)
  two_sided,           // [0, max coefficient of the initial data]
  time_varying_upper,  // [0, max coefficient of the previous iterate];
                       // the caller rebuilds these each step
};

// The nodal box for a constrained run.  u0 supplies the upper limit for the
// two-sided kinds; space fixes the DOF count.
Bounds make_bounds(BoundsKind kind, const Field& u0, const SpacePtr& space);

// Componentwise clamp of x into [lower, upper].
std::vector<double> project_nodal(const std::vector<double>& x, const Bounds& bounds);

struct ExtragradConfig {
  double gamma = 1e-5;     // projected-gradient step size
  double tol = 1e-6;       // termination threshold on the iterate increment
  long max_iter = 1000000;
  // Termination metric for the increment u^m - u^{m-1}; empty means its
  // l2 norm.  (Callers can supply max-abs or a mass-weighted L2 instead.)
  std::function<double(const std::vector<double>&)> increment_norm;
};

struct ExtragradResult {
  std::vector<double> x;
  long iterations = 0;
  // min over 100 random feasible directions v of <Ax - L, v - x>; the
  // discrete variational-inequality test passes when this is >= vi_threshold
  // (= -1e-6 (1 + ||L||)).  Sampling uses a fixed seed so repeat runs agree.
  double vi_certificate = 0.0;
  double vi_threshold = 0.0;

  bool vi_ok() const { return vi_certificate >= vi_threshold; }
};

// Projected extragradient iteration for the box-constrained system
//   find x in [lower, upper] with <A x - L, v - x> >= 0 for all feasible v:
//   v^m = P(u^{m-1} - gamma (A u^{m-1} - L)),
//   u^m = P(u^{m-1} - gamma (A v^m - L)).
// Termination requires both that the increment norm of u^m - u^{m-1} drops
// below cfg.tol and that the returned iterate passes the sampled
// variational-inequality test (vi_certificate >= vi_threshold); a small
// increment alone can leave too much residual on the free DOFs for the
// returned x to be trusted.  x0 is projected before use.  Exhausting
// max_iter throws an Error carrying the last increment norm.
ExtragradResult extragradient_solve(const SparseMatrix& A, const std::vector<double>& L,
                                    const Bounds& bounds, const std::vector<double>& x0,
                                    const ExtragradConfig& cfg);

// Primal-dual active-set refinement of a seed for the box VI.  Each sweep
// classifies every DOF as free or bound-active by the complementarity test
// (scaled by the operator diagonal), pins the active DOFs to their bounds,
// and re-solves the free equations; it stops when the active set repeats or
// max_sweeps is hit.  The result is a feasible point whose free-DOF residual
// sits at the linear-solver tolerance, which makes it an effective starting
// iterate: the extragradient iteration then terminates almost immediately
// instead of spending O(condition number) sweeps flushing smooth error modes.
std::vector<double> active_set_refine(const SparseMatrix& A, const std::vector<double>& L,
                                      const Bounds& bounds, std::vector<double> x,
                                      const SolveOptions& solver, int max_sweeps = 40);

struct ConstrainedStepResult {
  Field u;
  long iterations = 0;
  double vi_certificate = 0.0;
  double vi_threshold = 0.0;
};

// One bound-preserving implicit step: assembles the same operator and
// right-hand side as the unconstrained scheme, pins each Dirichlet DOF to its
// boundary value (the box is overridden there so strong boundary data wins),
// seeds the iteration with the unconstrained solution sharpened by an
// active-set refinement, and runs the extragradient method.  The configured
// gamma is honoured up to a stability cap of 0.45 over the geometric mean of
// the operator's max row and column sums (an upper bound for its spectral
// norm; collapsed-box DOFs excluded), since the iteration diverges beyond the
// reciprocal spectral norm.  Holds per-step workspace; reuse across a run.
class ConstrainedStepper {
 public:
  ConstrainedStepper(SpacePtr space, StepConfig cfg);

  Stepper& stepper() { return stepper_; }
  const Stepper& stepper() const { return stepper_; }

  ConstrainedStepResult advance(const Field& u_prev, const Potential& psi, const Bounds& bounds,
                                const ExtragradConfig& ecfg, double t_new);

 private:
  Stepper stepper_;
  StepSystem sys_;
  Bounds pinned_;  // bounds with Dirichlet DOFs collapsed to [g, g]
};

// One-shot wrapper over ConstrainedStepper::advance.
Field constrained_step(const Field& u_prev, const Potential& psi, const StepConfig& cfg,
                       const Bounds& bounds, const ExtragradConfig& ecfg, double t_new);

}  // namespace ddg
