// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ddg/potential.hpp"
#include "ddg/space.hpp"
#include "ddg/sparse.hpp"

namespace ddg {

// Time-dependent scalar data f(x, y, t).
using TimeScalarFn = std::function<double(double, double, double)>;
// Dirichlet data g(x, y, t, marker).
using BoundaryFn = std::function<double(double, double, double, int)>;

// Block-diagonal mass matrix <phi_j, phi_i>.
SparseMatrix assemble_mass(const SpacePtr& space);

// Symmetric interior penalty form: cell gradients, facet consistency and
// symmetry terms with vector jumps against averaged gradients, and the
// (sigma/h_F) jump penalty.  Boundary facets contribute nothing (strong BCs).
SparseMatrix assemble_sip(const SpacePtr& space, double sigma);

// Upwind-stabilised drift form for potential psi at time t:
//   sum_K int w grad(psi).grad(v)
//   - sum_F int ( (grad(psi).n) {w} [w] - (mu/2) |grad(psi).n| [w][v] )
// with scalar jump [w] = w|owner - w|neighbour and n the owner normal.  For a
// discrete psi the facet value of grad(psi).n averages the one-sided traces.
SparseMatrix assemble_upwind(const SpacePtr& space, const Potential& psi, double mu, double t);

// Load vector <f(., t), phi_i>.
std::vector<double> assemble_load(const SpacePtr& space, const TimeScalarFn& f, double t);

// Symmetric elimination of boundary DOFs: unit rows, RHS entries g(node), and
// column couplings moved onto the RHS so symmetric systems stay symmetric.
// Applied to the summed system matrix only, never to raw forms.
void apply_strong_dirichlet(SparseMatrix& A, std::vector<double>& b, const SpacePtr& space,
                            const BoundaryFn& g, double t);

// Reusable elimination: captures the boundary columns of a system matrix once
// so later right-hand sides (possibly with time-varying g) cost O(captured).
class DirichletEliminator {
 public:
  DirichletEliminator(SpacePtr space, BoundaryFn g);

  // Replaces boundary rows/columns in A (values only; pattern preserved) and
  // records the eliminated couplings for apply_rhs.
  void eliminate(SparseMatrix& A);

  // b_j -= sum_i A_ji g_i over captured couplings, then b_i = g_i.
  void apply_rhs(std::vector<double>& b, double t) const;

  const std::vector<int>& boundary_dofs() const { return bdofs_; }
  std::vector<double> boundary_values(double t) const;

 private:
  SpacePtr space_;
  BoundaryFn g_;
  std::vector<int> bdofs_;
  struct Coupling {
    int row;
    int bdof_index;  // into bdofs_
    double value;
  };
  std::vector<Coupling> captured_;
};

// Assembles mass, SIP, and upwind matrices over one shared sparsity pattern
// (cell blocks plus facet coupling blocks) so per-step system composition is
// pure value arithmetic.  Used by the time-stepping drivers; the one-shot
// assemble_* functions above are independent of this cache.
class SystemAssembler {
 public:
  SystemAssembler(SpacePtr space, double sigma, double mu);

  const SpacePtr& space() const { return space_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& sip() const { return sip_; }

  // Rewrites B's values (pattern must come from zero_like()).
  void assemble_upwind_into(const Potential& psi, double t, SparseMatrix& B) const;
  SparseMatrix zero_like() const;

  // out = mass + w*(sip + B); all three share zero_like()'s pattern.
  void compose(double w, const SparseMatrix& B, SparseMatrix& out) const;
  // out = mass - w*(sip + B) (Crank-Nicolson right-hand operator).
  void compose_negative(double w, const SparseMatrix& B, SparseMatrix& out) const;

 private:
  struct FacetQp {
    Bary bary_a;
    Bary bary_b;
    Vec2 point;
    double weight;  // includes facet length
  };
  struct FacetCache {
    int cell_a, edge_a, cell_b, edge_b;
    Vec2 normal;
    double h_f;
    std::vector<FacetQp> qps;
  };

  SpacePtr space_;
  double sigma_, mu_;
  int cell_rule_degree_analytic_, cell_rule_degree_discrete_;
  SparseMatrix mass_, sip_;
  std::vector<FacetCache> facets_analytic_;  // rule degree 2p+4
  std::vector<FacetCache> facets_discrete_;  // rule degree 2p+p
  std::vector<std::vector<int>> cell_positions_;   // dpc*dpc CSR value slots
  std::vector<std::vector<int>> facet_positions_;  // (2dpc)^2 CSR value slots

  void build_facet_cache(int degree, std::vector<FacetCache>& out) const;
};

}  // namespace ddg
