// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include "ddg/bounds.hpp"
#include "ddg/linsolve.hpp"
#include "ddg/stepping.hpp"

namespace ddg {

// Two species concentrations and the electric potential they induce.
struct PnpState {
  Field rho;  // positive species
  Field nu;   // negative species
  Field psi;  // potential
  double t = 0.0;
};

struct PnpConfig {
  double eps = 1.0;         // permittivity
  TimeScalarFn background;  // fixed charge density f (may be signed); empty = 0
  StepConfig step;          // concentration step parameters
  ExtragradConfig extragrad;
  BoundsKind bounds_kind = BoundsKind::positivity;
  // The Poisson matrix carries a sigma/h^2 conditioning, so its attainable
  // relative residual sits well above the drift steps'.
  SolveOptions poisson_solver{.rel_tol = 1e-9, .max_iter = 200000};
};

// Solves eps * a_h(psi, chi) = <rho - nu, chi> + <f, chi> for all chi, with
// homogeneous strong Dirichlet data.  One-shot assembly; loops should use
// PnpStepper, which eliminates the (static) Poisson matrix only once.
Field solve_poisson(const SpacePtr& space, const Field& rho, const Field& nu,
                    const TimeScalarFn& f, double eps, double sigma, double t = 0.0);

// Decoupled Poisson--Nernst--Planck stepping: each step advances rho with
// drift +grad(psi), nu with -grad(psi) -- both against the previous step's
// discrete potential -- by the bound-preserving scheme, then refreshes psi
// from the new concentrations.
class PnpStepper {
 public:
  PnpStepper(SpacePtr space, PnpConfig cfg);

  const SpacePtr& space() const { return space_; }
  const PnpConfig& config() const { return cfg_; }
  ConstrainedStepper& species_stepper() { return cstep_; }

  // Poisson solve for given concentrations, optionally warm-started.
  Field solve_potential(const Field& rho, const Field& nu, const Field* warm_start = nullptr,
                        double t = 0.0);

  // t = 0: only the potential needs solving; concentrations are the data.
  // Also fixes the nodal boxes for the two-sided bound kinds.
  PnpState initialise(Field rho0, Field nu0);

  PnpState advance(const PnpState& state);

  struct SpeciesInfo {
    long iterations = 0;
    double vi_certificate = 0.0;
    double vi_threshold = 0.0;
  };
  const SpeciesInfo& rho_info() const { return rho_info_; }
  const SpeciesInfo& nu_info() const { return nu_info_; }

 private:
  SpacePtr space_;
  PnpConfig cfg_;
  ConstrainedStepper cstep_;
  SparseMatrix poisson_;  // eps * sip, Dirichlet rows eliminated once
  DirichletEliminator poisson_elim_;
  Bounds rho_bounds_, nu_bounds_;
  bool have_bounds_ = false;
  SpeciesInfo rho_info_, nu_info_;

  void refresh_bounds(const PnpState& state);
};

// One-shot wrapper over PnpStepper::advance.
PnpState pnp_step(const PnpState& state, const PnpConfig& cfg);

}  // namespace ddg
