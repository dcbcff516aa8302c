// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/pnp.hpp"

#include <utility>

#include "ddg/error.hpp"
#include "ddg/forms.hpp"

namespace ddg {

namespace {

PnpConfig validated(PnpConfig cfg) {
  if (!(cfg.eps > 0.0)) throw Error("pnp: eps must be positive");
  return cfg;
}

BoundaryFn zero_boundary() {
  return [](double, double, double, int) { return 0.0; };
}

// rhs = M (rho - nu) + load(f, t)
std::vector<double> charge_rhs(const SparseMatrix& mass, const SpacePtr& space, const Field& rho,
                               const Field& nu, const TimeScalarFn& f, double t) {
  const int n = space->num_dofs();
  std::vector<double> net(n);
  for (int i = 0; i < n; ++i) net[i] = rho.coeffs[i] - nu.coeffs[i];
  std::vector<double> rhs(n, 0.0);
  mass.matvec(net.data(), rhs.data());
  if (f) {
    const std::vector<double> load = assemble_load(space, f, t);
    for (int i = 0; i < n; ++i) rhs[i] += load[i];
  }
  return rhs;
}

}  // namespace

Field solve_poisson(const SpacePtr& space, const Field& rho, const Field& nu,
                    const TimeScalarFn& f, double eps, double sigma, double t) {
  if (!(eps > 0.0)) throw Error("solve_poisson: eps must be positive");
  if (rho.space.get() != space.get() || nu.space.get() != space.get()) {
    throw Error("solve_poisson: fields do not live on the given space");
  }
  SparseMatrix A = assemble_sip(space, sigma);
  for (double& v : A.values) v *= eps;
  const SparseMatrix mass = assemble_mass(space);
  std::vector<double> rhs = charge_rhs(mass, space, rho, nu, f, t);
  apply_strong_dirichlet(A, rhs, space, zero_boundary(), t);
  return Field(space, solve_linear(A, rhs));
}

PnpStepper::PnpStepper(SpacePtr space, PnpConfig cfg)
    : space_(std::move(space)),
      cfg_(validated(std::move(cfg))),
      cstep_(space_, cfg_.step),
      poisson_(cstep_.stepper().forms().sip()),
      poisson_elim_(space_, zero_boundary()) {
  for (double& v : poisson_.values) v *= cfg_.eps;
  poisson_elim_.eliminate(poisson_);
}

Field PnpStepper::solve_potential(const Field& rho, const Field& nu, const Field* warm_start,
                                  double t) {
  std::vector<double> rhs =
      charge_rhs(cstep_.stepper().forms().mass(), space_, rho, nu, cfg_.background, t);
  poisson_elim_.apply_rhs(rhs, t);
  SolveOptions opts = cfg_.poisson_solver;
  if (warm_start != nullptr) opts.x0 = &warm_start->coeffs;
  return Field(space_, solve_linear(poisson_, rhs, opts));
}

void PnpStepper::refresh_bounds(const PnpState& state) {
  if (have_bounds_ && cfg_.bounds_kind != BoundsKind::time_varying_upper) return;
  rho_bounds_ = make_bounds(cfg_.bounds_kind, state.rho, space_);
  nu_bounds_ = make_bounds(cfg_.bounds_kind, state.nu, space_);
  have_bounds_ = true;
}

PnpState PnpStepper::initialise(Field rho0, Field nu0) {
  PnpState state;
  state.rho = std::move(rho0);
  state.nu = std::move(nu0);
  state.t = 0.0;
  refresh_bounds(state);
  state.psi = solve_potential(state.rho, state.nu, nullptr, 0.0);
  return state;
}

PnpState PnpStepper::advance(const PnpState& state) {
  const double t_new = state.t + cfg_.step.tau;
  refresh_bounds(state);

  // Both species drift against the previous step's potential; the refreshed
  // potential enters only the next step.
  const Potential drift = Potential::discrete(state.psi);
  ConstrainedStepResult r = cstep_.advance(state.rho, drift, rho_bounds_, cfg_.extragrad, t_new);
  rho_info_ = {r.iterations, r.vi_certificate, r.vi_threshold};
  ConstrainedStepResult n =
      cstep_.advance(state.nu, drift.negated(), nu_bounds_, cfg_.extragrad, t_new);
  nu_info_ = {n.iterations, n.vi_certificate, n.vi_threshold};

  PnpState next;
  next.rho = std::move(r.u);
  next.nu = std::move(n.u);
  next.psi = solve_potential(next.rho, next.nu, &state.psi, t_new);
  next.t = t_new;
  return next;
}

PnpState pnp_step(const PnpState& state, const PnpConfig& cfg) {
  if (!state.rho.space) throw Error("pnp_step: state has no space");
  PnpStepper stepper(state.rho.space, cfg);
  return stepper.advance(state);
}

}  // namespace ddg
