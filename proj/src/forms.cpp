// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <tuple>

#include "ddg/error.hpp"
#include "ddg/quadrature.hpp"

namespace ddg {
namespace {

constexpr int kMaxDpc = 6;

// One facet quadrature point with both-side barycentric coordinates; weight
// already includes the facet length.
struct FacetPoint {
  Bary bary_a;
  Bary bary_b;
  Vec2 point;
  double weight;
};

struct FacetGeom {
  int cell_a, edge_a, cell_b, edge_b;
  Vec2 normal;
  double h_f;
  std::vector<FacetPoint> qps;
};

FacetGeom make_facet_geom(const Mesh& mesh, const InteriorFacet& f, const FacetRule& rule) {
  FacetGeom g;
  g.cell_a = f.cell_a;
  g.edge_a = f.edge_a;
  g.cell_b = f.cell_b;
  g.edge_b = f.edge_b;
  g.normal = mesh.outward_normal(f.cell_a, f.edge_a);
  g.h_f = mesh.facet_h(f);
  const double len = mesh.edge_length(f.cell_a, f.edge_a);
  const CellGeometry geom_b = mesh.geometry(f.cell_b);
  g.qps.resize(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    FacetPoint& p = g.qps[q];
    p.point = mesh.edge_point(f.cell_a, f.edge_a, s);
    p.bary_a = {0.0, 0.0, 0.0};
    p.bary_a[f.edge_a] = 1.0 - s;
    p.bary_a[(f.edge_a + 1) % 3] = s;
    p.bary_b = geom_b.barycentric(p.point);
    p.weight = rule.weights[q] * len;
  }
  return g;
}

std::vector<FacetGeom> all_facet_geoms(const Mesh& mesh, int degree) {
  const FacetRule rule = facet_rule(degree);
  std::vector<FacetGeom> out;
  out.reserve(mesh.interior_facets.size());
  for (const auto& f : mesh.interior_facets) out.push_back(make_facet_geom(mesh, f, rule));
  return out;
}

// Basis values at every rule point, row-major nq x dpc.
std::vector<double> value_table(int degree, int dpc, const QuadratureRule& rule) {
  std::vector<double> t(rule.points.size() * dpc);
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    Space::basis_values(degree, rule.points[q], &t[q * dpc]);
  return t;
}

// sink(cell, local) with local a dpc x dpc row-major block, row = test index.
template <class Sink>
void mass_cell_terms(const Space& s, Sink&& sink) {
  const int dpc = s.dofs_per_cell;
  const QuadratureRule rule = triangle_rule(2 * s.degree);
  const std::vector<double> table = value_table(s.degree, dpc, rule);
  std::vector<double> local(dpc * dpc);
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const double jac = 2.0 * s.mesh->geometry(c).area;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * jac;
      const double* v = &table[q * dpc];
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j) local[i * dpc + j] += w * v[i] * v[j];
    }
    sink(c, local.data());
  }
}

template <class Sink>
void sip_cell_terms(const Space& s, Sink&& sink) {
  const int dpc = s.dofs_per_cell;
  const QuadratureRule rule = triangle_rule(2 * s.degree);
  std::vector<double> local(dpc * dpc);
  Vec2 grads[kMaxDpc];
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const CellGeometry geom = s.mesh->geometry(c);
    const double jac = 2.0 * geom.area;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Space::basis_gradients(s.degree, geom, rule.points[q], grads);
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j) local[i * dpc + j] += w * dot(grads[i], grads[j]);
    }
    sink(c, local.data());
  }
}

template <class Sink>
void upwind_cell_terms(const Space& s, const Potential& psi, double t, int degree, Sink&& sink) {
  const int dpc = s.dofs_per_cell;
  const QuadratureRule rule = triangle_rule(degree);
  const std::vector<double> table = value_table(s.degree, dpc, rule);
  std::vector<double> local(dpc * dpc);
  Vec2 grads[kMaxDpc];
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const CellGeometry geom = s.mesh->geometry(c);
    const double jac = 2.0 * geom.area;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Bary& l = rule.points[q];
      const Vec2 x = geom.physical(l);
      const Vec2 gpsi = psi.gradient(x, t, c, l);
      Space::basis_gradients(s.degree, geom, l, grads);
      const double w = rule.weights[q] * jac;
      const double* v = &table[q * dpc];
      for (int i = 0; i < dpc; ++i) {
        const double gi = w * dot(gpsi, grads[i]);
        for (int j = 0; j < dpc; ++j) local[i * dpc + j] += gi * v[j];
      }
    }
    sink(c, local.data());
  }
}

// sink(facet_index, facet, local) with local (2dpc)^2 row-major over the
// combined DOF list [cell_a locals..., cell_b locals...]; row = test index.
template <class FacetT, class Sink>
void sip_facet_terms(const Space& s, double sigma, const std::vector<FacetT>& facets,
                     Sink&& sink) {
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  std::vector<double> local(m * m);
  double vals_a[kMaxDpc], vals_b[kMaxDpc];
  Vec2 grads_a[kMaxDpc], grads_b[kMaxDpc];
  double jump[2 * kMaxDpc], gn[2 * kMaxDpc];
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    const auto& fg = facets[fi];
    const CellGeometry ga = s.mesh->geometry(fg.cell_a);
    const CellGeometry gb = s.mesh->geometry(fg.cell_b);
    const double pen = sigma / fg.h_f;
    std::fill(local.begin(), local.end(), 0.0);
    for (const auto& qp : fg.qps) {
      Space::basis_values(s.degree, qp.bary_a, vals_a);
      Space::basis_values(s.degree, qp.bary_b, vals_b);
      Space::basis_gradients(s.degree, ga, qp.bary_a, grads_a);
      Space::basis_gradients(s.degree, gb, qp.bary_b, grads_b);
      for (int k = 0; k < m; ++k) {
        // Each basis function lives on one side; its trace from the other
        // side is zero.  Jump sign: owner side +, neighbour side -.
        jump[k] = k < dpc ? vals_a[k] : -vals_b[k - dpc];
        gn[k] = k < dpc ? dot(grads_a[k], fg.normal) : dot(grads_b[k - dpc], fg.normal);
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          local[i * m + j] +=
              qp.weight * (-0.5 * (jump[j] * gn[i] + jump[i] * gn[j]) + pen * jump[i] * jump[j]);
    }
    sink(static_cast<int>(fi), fg, local.data());
  }
}

template <class FacetT, class Sink>
void upwind_facet_terms(const Space& s, const Potential& psi, double mu, double t,
                        const std::vector<FacetT>& facets, Sink&& sink) {
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  const bool discrete = psi.is_discrete();
  std::vector<double> local(m * m);
  double vals_a[kMaxDpc], vals_b[kMaxDpc];
  double trace[2 * kMaxDpc], jump[2 * kMaxDpc];
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    const auto& fg = facets[fi];
    std::fill(local.begin(), local.end(), 0.0);
    for (const auto& qp : fg.qps) {
      double gpn;  // grad(psi).n at the quadrature point
      if (discrete) {
        gpn = 0.5 * (dot(psi.gradient(qp.point, t, fg.cell_a, qp.bary_a), fg.normal) +
                     dot(psi.gradient(qp.point, t, fg.cell_b, qp.bary_b), fg.normal));
      } else {
        gpn = dot(psi.gradient(qp.point, t, fg.cell_a, qp.bary_a), fg.normal);
      }
      Space::basis_values(s.degree, qp.bary_a, vals_a);
      Space::basis_values(s.degree, qp.bary_b, vals_b);
      for (int k = 0; k < m; ++k) {
        trace[k] = k < dpc ? vals_a[k] : vals_b[k - dpc];
        jump[k] = k < dpc ? trace[k] : -trace[k];
      }
      const double stab = 0.5 * mu * std::abs(gpn);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          local[i * m + j] +=
              qp.weight * (-gpn * 0.5 * trace[j] * jump[i] + stab * jump[j] * jump[i]);
    }
    sink(static_cast<int>(fi), fg, local.data());
  }
}

int upwind_rule_degree(const Space& s, const Potential& psi) {
  return 2 * s.degree + (psi.is_discrete() ? s.degree : 4);
}

}  // namespace

SparseMatrix assemble_mass(const SpacePtr& space) {
  const Space& s = *space;
  const int dpc = s.dofs_per_cell;
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(static_cast<std::size_t>(s.mesh->num_cells()) * dpc * dpc);
  mass_cell_terms(s, [&](int c, const double* local) {
    for (int i = 0; i < dpc; ++i)
      for (int j = 0; j < dpc; ++j) trip.emplace_back(s.dof(c, i), s.dof(c, j), local[i * dpc + j]);
  });
  return SparseMatrix::from_triplets(s.num_dofs(), s.num_dofs(), std::move(trip));
}

SparseMatrix assemble_sip(const SpacePtr& space, double sigma) {
  const Space& s = *space;
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(static_cast<std::size_t>(s.mesh->num_cells()) * dpc * dpc +
               s.mesh->interior_facets.size() * m * m);
  sip_cell_terms(s, [&](int c, const double* local) {
    for (int i = 0; i < dpc; ++i)
      for (int j = 0; j < dpc; ++j) trip.emplace_back(s.dof(c, i), s.dof(c, j), local[i * dpc + j]);
  });
  const auto facets = all_facet_geoms(*s.mesh, 2 * s.degree);
  sip_facet_terms(s, sigma, facets, [&](int, const FacetGeom& fg, const double* local) {
    for (int i = 0; i < m; ++i) {
      const int gi = i < dpc ? s.dof(fg.cell_a, i) : s.dof(fg.cell_b, i - dpc);
      for (int j = 0; j < m; ++j) {
        const int gj = j < dpc ? s.dof(fg.cell_a, j) : s.dof(fg.cell_b, j - dpc);
        trip.emplace_back(gi, gj, local[i * m + j]);
      }
    }
  });
  return SparseMatrix::from_triplets(s.num_dofs(), s.num_dofs(), std::move(trip));
}

SparseMatrix assemble_upwind(const SpacePtr& space, const Potential& psi, double mu, double t) {
  const Space& s = *space;
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  const int degree = upwind_rule_degree(s, psi);
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(static_cast<std::size_t>(s.mesh->num_cells()) * dpc * dpc +
               s.mesh->interior_facets.size() * m * m);
  upwind_cell_terms(s, psi, t, degree, [&](int c, const double* local) {
    for (int i = 0; i < dpc; ++i)
      for (int j = 0; j < dpc; ++j) trip.emplace_back(s.dof(c, i), s.dof(c, j), local[i * dpc + j]);
  });
  const auto facets = all_facet_geoms(*s.mesh, degree);
  upwind_facet_terms(s, psi, mu, t, facets, [&](int, const FacetGeom& fg, const double* local) {
    for (int i = 0; i < m; ++i) {
      const int gi = i < dpc ? s.dof(fg.cell_a, i) : s.dof(fg.cell_b, i - dpc);
      for (int j = 0; j < m; ++j) {
        const int gj = j < dpc ? s.dof(fg.cell_a, j) : s.dof(fg.cell_b, j - dpc);
        trip.emplace_back(gi, gj, local[i * m + j]);
      }
    }
  });
  return SparseMatrix::from_triplets(s.num_dofs(), s.num_dofs(), std::move(trip));
}

std::vector<double> assemble_load(const SpacePtr& space, const TimeScalarFn& f, double t) {
  const Space& s = *space;
  const int dpc = s.dofs_per_cell;
  const QuadratureRule rule = triangle_rule(2 * s.degree + 8);
  const std::vector<double> table = value_table(s.degree, dpc, rule);
  std::vector<double> load(s.num_dofs(), 0.0);
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const CellGeometry geom = s.mesh->geometry(c);
    const double jac = 2.0 * geom.area;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = geom.physical(rule.points[q]);
      const double w = rule.weights[q] * jac * f(x.x, x.y, t);
      const double* v = &table[q * dpc];
      for (int i = 0; i < dpc; ++i) load[s.dof(c, i)] += w * v[i];
    }
  }
  return load;
}

void apply_strong_dirichlet(SparseMatrix& A, std::vector<double>& b, const SpacePtr& space,
                            const BoundaryFn& g, double t) {
  DirichletEliminator elim(space, g);
  elim.eliminate(A);
  elim.apply_rhs(b, t);
}

DirichletEliminator::DirichletEliminator(SpacePtr space, BoundaryFn g)
    : space_(std::move(space)), g_(std::move(g)) {
  for (int d = 0; d < space_->num_dofs(); ++d)
    if (space_->boundary_mask[d]) bdofs_.push_back(d);
}

void DirichletEliminator::eliminate(SparseMatrix& A) {
  if (A.rows != space_->num_dofs() || A.cols != A.rows)
    throw Error("dirichlet eliminate: matrix size does not match space");
  captured_.clear();
  std::vector<int> index_of(space_->num_dofs(), -1);
  for (std::size_t i = 0; i < bdofs_.size(); ++i) index_of[bdofs_[i]] = static_cast<int>(i);
  for (int r = 0; r < A.rows; ++r) {
    const bool row_boundary = index_of[r] >= 0;
    for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k) {
      const int c = A.col_indices[k];
      if (row_boundary) {
        A.values[k] = (c == r) ? 1.0 : 0.0;
      } else if (index_of[c] >= 0) {
        if (A.values[k] != 0.0) captured_.push_back({r, index_of[c], A.values[k]});
        A.values[k] = 0.0;
      }
    }
  }
}

void DirichletEliminator::apply_rhs(std::vector<double>& b, double t) const {
  if (static_cast<int>(b.size()) != space_->num_dofs())
    throw Error("dirichlet apply_rhs: vector size does not match space");
  const std::vector<double> g = boundary_values(t);
  for (const Coupling& c : captured_) b[c.row] -= c.value * g[c.bdof_index];
  for (std::size_t i = 0; i < bdofs_.size(); ++i) b[bdofs_[i]] = g[i];
}

std::vector<double> DirichletEliminator::boundary_values(double t) const {
  std::vector<double> g(bdofs_.size());
  for (std::size_t i = 0; i < bdofs_.size(); ++i) {
    const int d = bdofs_[i];
    const Vec2 p = space_->node_coords[d];
    g[i] = g_(p.x, p.y, t, space_->boundary_marker[d]);
  }
  return g;
}

SystemAssembler::SystemAssembler(SpacePtr space, double sigma, double mu)
    : space_(std::move(space)), sigma_(sigma), mu_(mu) {
  const Space& s = *space_;
  const Mesh& mesh = *s.mesh;
  const int p = s.degree;
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  const int n = s.num_dofs();
  cell_rule_degree_analytic_ = 2 * p + 4;
  cell_rule_degree_discrete_ = 3 * p;

  std::vector<std::vector<int>> blocks;
  blocks.reserve(mesh.num_cells() + mesh.interior_facets.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    std::vector<int> block(dpc);
    for (int i = 0; i < dpc; ++i) block[i] = s.dof(c, i);
    blocks.push_back(std::move(block));
  }
  for (const auto& f : mesh.interior_facets) {
    std::vector<int> block(m);
    for (int i = 0; i < dpc; ++i) {
      block[i] = s.dof(f.cell_a, i);
      block[dpc + i] = s.dof(f.cell_b, i);
    }
    blocks.push_back(std::move(block));
  }
  SparseMatrix pattern = SparseMatrix::from_blocks(n, n, blocks);

  cell_positions_.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& pos = cell_positions_[c];
    pos.resize(dpc * dpc);
    for (int i = 0; i < dpc; ++i)
      for (int j = 0; j < dpc; ++j) pos[i * dpc + j] = pattern.position(s.dof(c, i), s.dof(c, j));
  }
  facet_positions_.resize(mesh.interior_facets.size());
  for (std::size_t fi = 0; fi < mesh.interior_facets.size(); ++fi) {
    const auto& f = mesh.interior_facets[fi];
    auto& pos = facet_positions_[fi];
    pos.resize(m * m);
    for (int i = 0; i < m; ++i) {
      const int gi = i < dpc ? s.dof(f.cell_a, i) : s.dof(f.cell_b, i - dpc);
      for (int j = 0; j < m; ++j) {
        const int gj = j < dpc ? s.dof(f.cell_a, j) : s.dof(f.cell_b, j - dpc);
        pos[i * m + j] = pattern.position(gi, gj);
      }
    }
  }

  build_facet_cache(cell_rule_degree_analytic_, facets_analytic_);
  build_facet_cache(cell_rule_degree_discrete_, facets_discrete_);

  mass_ = pattern;
  mass_cell_terms(s, [&](int c, const double* local) {
    const auto& pos = cell_positions_[c];
    for (int k = 0; k < dpc * dpc; ++k) mass_.values[pos[k]] += local[k];
  });

  sip_ = std::move(pattern);
  sip_cell_terms(s, [&](int c, const double* local) {
    const auto& pos = cell_positions_[c];
    for (int k = 0; k < dpc * dpc; ++k) sip_.values[pos[k]] += local[k];
  });
  const auto sip_facets = all_facet_geoms(mesh, 2 * p);
  sip_facet_terms(s, sigma_, sip_facets, [&](int fi, const FacetGeom&, const double* local) {
    const auto& pos = facet_positions_[fi];
    for (int k = 0; k < m * m; ++k) sip_.values[pos[k]] += local[k];
  });
}

void SystemAssembler::build_facet_cache(int degree, std::vector<FacetCache>& out) const {
  const Mesh& mesh = *space_->mesh;
  const FacetRule rule = facet_rule(degree);
  out.clear();
  out.reserve(mesh.interior_facets.size());
  for (const auto& f : mesh.interior_facets) {
    FacetGeom g = make_facet_geom(mesh, f, rule);
    FacetCache c;
    c.cell_a = g.cell_a;
    c.edge_a = g.edge_a;
    c.cell_b = g.cell_b;
    c.edge_b = g.edge_b;
    c.normal = g.normal;
    c.h_f = g.h_f;
    c.qps.resize(g.qps.size());
    for (std::size_t q = 0; q < g.qps.size(); ++q)
      c.qps[q] = {g.qps[q].bary_a, g.qps[q].bary_b, g.qps[q].point, g.qps[q].weight};
    out.push_back(std::move(c));
  }
}

void SystemAssembler::assemble_upwind_into(const Potential& psi, double t,
                                           SparseMatrix& B) const {
  if (B.nnz() != mass_.nnz() || B.rows != mass_.rows)
    throw Error("assembler: target pattern does not match (use zero_like())");
  B.set_zero();
  const Space& s = *space_;
  const int dpc = s.dofs_per_cell;
  const int m = 2 * dpc;
  const bool discrete = psi.is_discrete();
  const int degree = discrete ? cell_rule_degree_discrete_ : cell_rule_degree_analytic_;
  upwind_cell_terms(s, psi, t, degree, [&](int c, const double* local) {
    const auto& pos = cell_positions_[c];
    for (int k = 0; k < dpc * dpc; ++k) B.values[pos[k]] += local[k];
  });
  const auto& facets = discrete ? facets_discrete_ : facets_analytic_;
  upwind_facet_terms(s, psi, mu_, t, facets, [&](int fi, const FacetCache&, const double* local) {
    const auto& pos = facet_positions_[fi];
    for (int k = 0; k < m * m; ++k) B.values[pos[k]] += local[k];
  });
}

SparseMatrix SystemAssembler::zero_like() const {
  SparseMatrix z = mass_;
  z.set_zero();
  return z;
}

void SystemAssembler::compose(double w, const SparseMatrix& B, SparseMatrix& out) const {
  if (out.nnz() != mass_.nnz() || B.nnz() != mass_.nnz())
    throw Error("assembler compose: pattern mismatch");
  for (int k = 0; k < mass_.nnz(); ++k)
    out.values[k] = mass_.values[k] + w * (sip_.values[k] + B.values[k]);
}

void SystemAssembler::compose_negative(double w, const SparseMatrix& B,
                                       SparseMatrix& out) const {
  if (out.nnz() != mass_.nnz() || B.nnz() != mass_.nnz())
    throw Error("assembler compose: pattern mismatch");
  for (int k = 0; k < mass_.nnz(); ++k)
    out.values[k] = mass_.values[k] - w * (sip_.values[k] + B.values[k]);
}

}  // namespace ddg
