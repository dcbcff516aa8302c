// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/potential.hpp"

namespace ddg {

double Potential::discrete_laplacian(int cell) const {
  const Field& f = *field_;
  const Space& s = *f.space;
  if (s.degree == 1) return 0.0;
  // P2: the Laplacian is constant per cell.  With phi_v = l(2l-1) and
  // phi_e = 4 l_a l_b, lap(phi_v) = 4 grad(l).grad(l) and
  // lap(phi_e) = 8 grad(l_a).grad(l_b).
  const CellGeometry geom = s.mesh->geometry(cell);
  double lap = 0.0;
  for (int i = 0; i < 3; ++i)
    lap += f.coeffs[s.dof(cell, i)] * 4.0 * dot(geom.grad_l[i], geom.grad_l[i]);
  for (int e = 0; e < 3; ++e)
    lap += f.coeffs[s.dof(cell, 3 + e)] * 8.0 * dot(geom.grad_l[e], geom.grad_l[(e + 1) % 3]);
  return lap;
}

}  // namespace ddg
