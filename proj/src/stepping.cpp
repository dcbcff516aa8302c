// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/stepping.hpp"

#include <utility>

#include "ddg/error.hpp"

namespace ddg {

namespace {

StepConfig validated(StepConfig cfg) {
  if (!(cfg.tau > 0.0)) throw Error("stepper: tau must be positive");
  if (cfg.sigma < 0.0) throw Error("stepper: sigma must be nonnegative");
  if (cfg.mu < 0.0) throw Error("stepper: mu must be nonnegative");
  return cfg;
}

BoundaryFn or_zero(const BoundaryFn& g) {
  if (g) return g;
  return [](double, double, double, int) { return 0.0; };
}

}  // namespace

Stepper::Stepper(SpacePtr space, StepConfig cfg)
    : space_(std::move(space)),
      cfg_(validated(std::move(cfg))),
      forms_(space_, cfg_.sigma, cfg_.mu),
      elim_(space_, or_zero(cfg_.dirichlet)),
      drift_(forms_.zero_like()),
      rhs_op_(forms_.zero_like()) {}

void Stepper::build_system(const Field& u_prev, const Potential& psi, double t_new,
                           StepSystem& sys) {
  if (u_prev.space.get() != space_.get()) {
    throw Error("stepper: field does not live on the stepper's space");
  }
  const bool cn = cfg_.scheme == Scheme::crank_nicolson;
  const double w = cn ? 0.5 * cfg_.tau : cfg_.tau;
  const double t_form = cn ? t_new - 0.5 * cfg_.tau : t_new;

  forms_.assemble_upwind_into(psi, t_form, drift_);
  if (sys.lhs.rows != drift_.rows || sys.lhs.nnz() != drift_.nnz()) {
    sys.lhs = forms_.zero_like();
  }
  forms_.compose(w, drift_, sys.lhs);

  const int n = space_->num_dofs();
  sys.rhs.assign(n, 0.0);
  if (cn) {
    forms_.compose_negative(w, drift_, rhs_op_);
    rhs_op_.matvec(u_prev.coeffs.data(), sys.rhs.data());
  } else {
    forms_.mass().matvec(u_prev.coeffs.data(), sys.rhs.data());
  }
  if (cfg_.forcing) {
    const std::vector<double> load = assemble_load(space_, cfg_.forcing, t_form);
    for (int i = 0; i < n; ++i) sys.rhs[i] += cfg_.tau * load[i];
  }

  elim_.eliminate(sys.lhs);
  elim_.apply_rhs(sys.rhs, t_new);
}

Field Stepper::advance(const Field& u_prev, const Potential& psi, double t_new) {
  build_system(u_prev, psi, t_new, work_);
  SolveOptions opts = cfg_.solver;
  opts.x0 = &u_prev.coeffs;
  return Field(space_, solve_linear(work_.lhs, work_.rhs, opts));
}

Field step_backward_euler(const Field& u_prev, const Potential& psi, const StepConfig& cfg,
                          double t_new) {
  StepConfig c = cfg;
  c.scheme = Scheme::backward_euler;
  Stepper stepper(u_prev.space, std::move(c));
  return stepper.advance(u_prev, psi, t_new);
}

Field step_crank_nicolson(const Field& u_prev, const Potential& psi, const StepConfig& cfg,
                          double t_new) {
  StepConfig c = cfg;
  c.scheme = Scheme::crank_nicolson;
  Stepper stepper(u_prev.space, std::move(c));
  return stepper.advance(u_prev, psi, t_new);
}

}  // namespace ddg
