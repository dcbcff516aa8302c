// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <string>
#include <vector>

#include "ddg/geometry.hpp"

namespace ddg {

// Facet shared by two cells; cell_a < cell_b always, and cell_a is the
// "owner": stored normals and scalar-jump signs are expressed from its side.
struct InteriorFacet {
  int cell_a = -1;
  int edge_a = -1;
  int cell_b = -1;
  int edge_b = -1;
};

struct BoundaryFacet {
  int cell = -1;
  int edge = -1;
  int marker = 1;
};

// Conforming triangulation with full facet connectivity.  Local edge k of a
// cell runs from its vertex k to vertex (k+1)%3; cells are CCW so the outward
// normal of edge tangent t is (t.y, -t.x)/|t|.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<InteriorFacet> interior_facets;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<double> h;  // per-cell diameter (longest edge)

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  std::array<int, 2> edge_vertices(int cell, int edge) const {
    return {cells[cell][edge], cells[cell][(edge + 1) % 3]};
  }
  Vec2 edge_point(int cell, int edge, double s) const {
    const auto ev = edge_vertices(cell, edge);
    return vertices[ev[0]] + s * (vertices[ev[1]] - vertices[ev[0]]);
  }
  double edge_length(int cell, int edge) const {
    const auto ev = edge_vertices(cell, edge);
    return norm(vertices[ev[1]] - vertices[ev[0]]);
  }
  Vec2 outward_normal(int cell, int edge) const {
    const auto ev = edge_vertices(cell, edge);
    const Vec2 t = vertices[ev[1]] - vertices[ev[0]];
    const double len = norm(t);
    return {t.y / len, -t.x / len};
  }
  Vec2 centroid(int cell) const {
    const auto& c = cells[cell];
    return (vertices[c[0]] + vertices[c[1]] + vertices[c[2]]) * (1.0 / 3.0);
  }
  double signed_area(int cell) const {
    const auto& c = cells[cell];
    const Vec2 e1 = vertices[c[1]] - vertices[c[0]];
    const Vec2 e2 = vertices[c[2]] - vertices[c[0]];
    return 0.5 * (e1.x * e2.y - e1.y * e2.x);
  }
  CellGeometry geometry(int cell) const {
    const auto& c = cells[cell];
    return CellGeometry({vertices[c[0]], vertices[c[1]], vertices[c[2]]});
  }
  // Penalty weight h_F on a shared facet: min of the neighbouring diameters.
  double facet_h(const InteriorFacet& f) const { return std::min(h[f.cell_a], h[f.cell_b]); }
};

enum class MeshPattern { right_diagonal, criss_cross };

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

// n x n grid of squares split into triangles: 2 per square (diagonal from
// lower-left to upper-right) or 4 per square (split by the centre point).
Mesh build_uniform_square(int n, MeshPattern pattern, const Rect& extent = {});

// Line-oriented ASCII format; see the repository README for the grammar.
Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

// Returns one message per violated Mesh invariant; empty means healthy.
std::vector<std::string> validate(const Mesh& mesh);

}  // namespace ddg
