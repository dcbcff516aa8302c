// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>

#include "ddg/forms.hpp"
#include "ddg/potential.hpp"
#include "ddg/space.hpp"

namespace ddg {

// Exact-solution gradient g(x, y, t).
using TimeVec2Fn = std::function<Vec2(double, double, double)>;

// sqrt of the cellwise integral of the squared field.
double l2_norm(const Field& field);

// sqrt of ||grad_h w||^2 + sum_F (sigma/h_F) int [w]^2 over interior facets.
double sip_norm(const Field& field, double sigma);

// sqrt of ||w||^2 + tau ||w||_sip^2 + (tau mu/2) sum_F int |grad(psi).n| [w]^2.
// star additionally includes tau sum_F int |grad(psi).n| {w}^2.
double energy_norm(const Field& field, double tau, double sigma, double mu, const Potential& psi,
                   double t, bool star = false);

// Energy norm of (exact - field) at time t, with the exact solution entering
// the facet terms with zero jumps (it is continuous) and the cell terms
// through its value and gradient.
double error_energy_norm(const Field& field, const TimeScalarFn& exact,
                         const TimeVec2Fn& grad_exact, double t, double tau, double sigma,
                         double mu, const Potential& psi);

// Signed per-step energy balance with non-homogeneous boundary data:
//   1/2 ||u_new||^2 - 1/2 ||u_prev||^2
//     - tau * sum over boundary facets of int ( u grad(u).n + 1/2 u^2 grad(psi).n ) ds,
// boundary traces of u = u_new taken from the owning cells.
double boundary_energy_change(const Field& u_new, const Field& u_prev, double tau,
                              const Potential& psi, double t);

// | w^T B w - ( sum_K -1/2 int w^2 lap(psi) + (mu/2) sum_F int |grad(psi).n| [w]^2 ) |
// with B the assembled upwind drift form and the right-hand side integrated
// with the same quadrature rules assembly uses.  Meaningful for fields whose
// boundary DOFs vanish (the integration by parts drops boundary fluxes).
double upwind_energy_identity_residual(const Field& field, const Potential& psi, double mu,
                                       double t);

}  // namespace ddg
