// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/space.hpp"

#include <algorithm>
#include <cmath>

#include "ddg/dense.hpp"
#include "ddg/error.hpp"
#include "ddg/quadrature.hpp"

namespace ddg {

Bary Space::reference_node(int degree, int local) {
  static const Bary vertex[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  if (local < 3) return vertex[local];
  if (degree == 2 && local < 6) {
    const int e = local - 3;  // midpoint of edge e = (vertex e, vertex e+1)
    Bary b{0, 0, 0};
    b[e] = 0.5;
    b[(e + 1) % 3] = 0.5;
    return b;
  }
  throw Error("Space::reference_node: local index out of range");
}

void Space::basis_values(int degree, const Bary& l, double* vals) {
  if (degree == 1) {
    vals[0] = l[0];
    vals[1] = l[1];
    vals[2] = l[2];
    return;
  }
  for (int i = 0; i < 3; ++i) vals[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int e = 0; e < 3; ++e) vals[3 + e] = 4.0 * l[e] * l[(e + 1) % 3];
}

void Space::basis_gradients(int degree, const CellGeometry& geom, const Bary& l, Vec2* grads) {
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) grads[i] = geom.grad_l[i];
    return;
  }
  for (int i = 0; i < 3; ++i) grads[i] = (4.0 * l[i] - 1.0) * geom.grad_l[i];
  for (int e = 0; e < 3; ++e) {
    const int a = e, b = (e + 1) % 3;
    grads[3 + e] = 4.0 * (l[a] * geom.grad_l[b] + l[b] * geom.grad_l[a]);
  }
}

SpacePtr create_space(std::shared_ptr<const Mesh> mesh, int degree) {
  if (degree != 1 && degree != 2)
    throw Error("create_space: unsupported degree " + std::to_string(degree) +
                " (only 1 and 2 are available)");
  auto space = std::make_shared<Space>();
  space->mesh = std::move(mesh);
  space->degree = degree;
  space->dofs_per_cell = (degree + 1) * (degree + 2) / 2;
  const Mesh& m = *space->mesh;
  const int dpc = space->dofs_per_cell;
  space->node_coords.resize(static_cast<size_t>(m.num_cells()) * dpc);
  space->boundary_mask.assign(space->node_coords.size(), 0);
  space->boundary_marker.assign(space->node_coords.size(), -1);

  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry geom = m.geometry(c);
    for (int j = 0; j < dpc; ++j)
      space->node_coords[space->dof(c, j)] = geom.physical(Space::reference_node(degree, j));
  }

  // A node is a boundary node iff it sits on a boundary facet of its own
  // cell: physical distance from the facet line below 1e-12.  The opposite
  // barycentric coordinate scaled by 2*area/edge_length is that distance.
  for (const auto& bf : m.boundary_facets) {
    const CellGeometry geom = m.geometry(bf.cell);
    const double scale = 2.0 * geom.area / m.edge_length(bf.cell, bf.edge);
    const int opposite = (bf.edge + 2) % 3;
    for (int j = 0; j < dpc; ++j) {
      const Bary l = Space::reference_node(degree, j);
      if (std::abs(l[opposite]) * scale <= 1e-12) {
        const int g = space->dof(bf.cell, j);
        space->boundary_mask[g] = 1;
        if (space->boundary_marker[g] < 0 || bf.marker < space->boundary_marker[g])
          space->boundary_marker[g] = bf.marker;  // smaller marker wins conflicts
      }
    }
  }
  return space;
}

SpacePtr create_space(const Mesh& mesh, int degree) {
  return create_space(std::make_shared<const Mesh>(mesh), degree);
}

Field interpolate(const SpacePtr& space, const ScalarFn& f, Sampling sampling) {
  Field field(space);
  const Mesh& m = *space->mesh;
  const int dpc = space->dofs_per_cell;
  for (int c = 0; c < m.num_cells(); ++c) {
    const Vec2 centre = m.centroid(c);
    for (int j = 0; j < dpc; ++j) {
      const int g = space->dof(c, j);
      Vec2 p = space->node_coords[g];
      if (sampling == Sampling::into_cell) p += 1e-8 * (centre - p);
      field.coeffs[g] = f(p.x, p.y);
    }
  }
  return field;
}

Field l2_project(const SpacePtr& space, const ScalarFn& f) {
  Field field(space);
  const Mesh& m = *space->mesh;
  const int p = space->degree;
  const int dpc = space->dofs_per_cell;
  const QuadratureRule mass_rule = triangle_rule(2 * p);
  const QuadratureRule load_rule = triangle_rule(2 * p + 8);

  std::vector<double> vals(dpc);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry geom = m.geometry(c);
    const double jac = 2.0 * geom.area;  // reference measure is 1/2
    DenseMatrix mass(dpc, dpc);
    for (size_t q = 0; q < mass_rule.points.size(); ++q) {
      Space::basis_values(p, mass_rule.points[q], vals.data());
      const double w = mass_rule.weights[q] * jac;
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j) mass(i, j) += w * vals[i] * vals[j];
    }
    std::vector<double> rhs(dpc, 0.0);
    for (size_t q = 0; q < load_rule.points.size(); ++q) {
      Space::basis_values(p, load_rule.points[q], vals.data());
      const Vec2 x = geom.physical(load_rule.points[q]);
      const double w = load_rule.weights[q] * jac * f(x.x, x.y);
      for (int i = 0; i < dpc; ++i) rhs[i] += w * vals[i];
    }
    std::vector<double> sol;
    try {
      sol = dense_solve(mass, rhs);
    } catch (const Error&) {
      throw Error("l2_project: singular local mass block on cell " + std::to_string(c) +
                  " (mesh corruption?)");
    }
    // Contract: element-local relative residual at most 1e-12.
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < dpc; ++i) {
      double ax = 0.0;
      for (int j = 0; j < dpc; ++j) ax += mass(i, j) * sol[j];
      rnorm += (ax - rhs[i]) * (ax - rhs[i]);
      bnorm += rhs[i] * rhs[i];
    }
    if (rnorm > 1e-24 * std::max(bnorm, 1e-300))
      throw Error("l2_project: local solve residual above tolerance on cell " +
                  std::to_string(c));
    for (int i = 0; i < dpc; ++i) field.coeffs[space->dof(c, i)] = sol[i];
  }
  return field;
}

double evaluate(const Field& field, int cell, const Bary& point) {
  const Space& s = *field.space;
  if (cell < 0 || cell >= s.mesh->num_cells()) throw Error("evaluate: cell index out of range");
  double vals[6];
  Space::basis_values(s.degree, point, vals);
  double sum = 0.0;
  for (int j = 0; j < s.dofs_per_cell; ++j) sum += field.coeffs[s.dof(cell, j)] * vals[j];
  return sum;
}

Vec2 evaluate_gradient(const Field& field, int cell, const Bary& point) {
  const Space& s = *field.space;
  if (cell < 0 || cell >= s.mesh->num_cells())
    throw Error("evaluate_gradient: cell index out of range");
  Vec2 grads[6];
  Space::basis_gradients(s.degree, s.mesh->geometry(cell), point, grads);
  Vec2 sum;
  for (int j = 0; j < s.dofs_per_cell; ++j) sum += field.coeffs[s.dof(cell, j)] * grads[j];
  return sum;
}

std::pair<double, double> nodal_extrema(const Field& field) {
  const auto [lo, hi] = std::minmax_element(field.coeffs.begin(), field.coeffs.end());
  return {*lo, *hi};
}

}  // namespace ddg
