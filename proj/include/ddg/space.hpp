// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ddg/mesh.hpp"

namespace ddg {

// Scalar data sampled in physical coordinates.
using ScalarFn = std::function<double(double, double)>;

// How interpolate samples f at a Lagrange node.  Data that is discontinuous
// exactly on mesh lines must be sampled slightly inside the owning cell so
// each element sees a well-defined one-sided value.
enum class Sampling { at_node, into_cell };

// Discontinuous Lagrange space of degree 1 or 2: every cell carries its own
// copy of the reference nodes (vertices, plus edge midpoints for P2), so
// global DOF = cell * dofs_per_cell + local.
struct Space {
  std::shared_ptr<const Mesh> mesh;
  int degree = 1;
  int dofs_per_cell = 3;
  std::vector<Vec2> node_coords;        // per-DOF physical node position
  std::vector<uint8_t> boundary_mask;   // node lies on a boundary facet of its own cell
  std::vector<int> boundary_marker;     // smallest such facet marker; -1 if interior

  int num_dofs() const { return static_cast<int>(node_coords.size()); }
  int dof(int cell, int local) const { return cell * dofs_per_cell + local; }

  // Reference Lagrange node of a local DOF, in barycentric coordinates.
  static Bary reference_node(int degree, int local);
  // Values of all local basis functions at a barycentric point.
  static void basis_values(int degree, const Bary& l, double* vals);
  // Physical gradients of all local basis functions for a given cell geometry.
  static void basis_gradients(int degree, const CellGeometry& geom, const Bary& l, Vec2* grads);
};

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr create_space(std::shared_ptr<const Mesh> mesh, int degree);
SpacePtr create_space(const Mesh& mesh, int degree);  // copies the mesh

struct Field {
  SpacePtr space;
  std::vector<double> coeffs;

  Field() = default;
  explicit Field(SpacePtr s) : space(std::move(s)), coeffs(space->num_dofs(), 0.0) {}
  Field(SpacePtr s, std::vector<double> c) : space(std::move(s)), coeffs(std::move(c)) {}
};

Field interpolate(const SpacePtr& space, const ScalarFn& f,
                  Sampling sampling = Sampling::at_node);

// L2-orthogonal projection onto the space via element-local mass solves.
Field l2_project(const SpacePtr& space, const ScalarFn& f);

double evaluate(const Field& field, int cell, const Bary& point);

// Gradient of the field restricted to one cell, at a barycentric point.
Vec2 evaluate_gradient(const Field& field, int cell, const Bary& point);

std::pair<double, double> nodal_extrema(const Field& field);

}  // namespace ddg
