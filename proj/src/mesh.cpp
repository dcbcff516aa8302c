// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "ddg/error.hpp"

namespace ddg {

namespace {

uint64_t edge_key(int a, int b, int num_vertices) {
  const uint64_t lo = static_cast<uint64_t>(std::min(a, b));
  const uint64_t hi = static_cast<uint64_t>(std::max(a, b));
  return lo * static_cast<uint64_t>(num_vertices) + hi;
}

void compute_diameters(Mesh& mesh) {
  mesh.h.resize(mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    double hmax = 0.0;
    for (int e = 0; e < 3; ++e) hmax = std::max(hmax, mesh.edge_length(c, e));
    mesh.h[c] = hmax;
  }
}

// Rebuild interior/boundary facet lists from cell connectivity alone.
// Boundary facets receive the default marker 1.
void build_facets(Mesh& mesh) {
  mesh.interior_facets.clear();
  mesh.boundary_facets.clear();
  std::unordered_map<uint64_t, std::pair<int, int>> first_side;
  std::unordered_map<uint64_t, int> incidence;
  first_side.reserve(mesh.cells.size() * 2);
  incidence.reserve(mesh.cells.size() * 2);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const auto ev = mesh.edge_vertices(c, e);
      const uint64_t key = edge_key(ev[0], ev[1], mesh.num_vertices());
      const int count = ++incidence[key];
      if (count == 1) {
        first_side[key] = {c, e};
      } else if (count == 2) {
        const auto [ca, ea] = first_side[key];
        mesh.interior_facets.push_back({ca, ea, c, e});
      } else {
        throw Error("mesh: facet between vertices " + std::to_string(ev[0]) + " and " +
                    std::to_string(ev[1]) + " is shared by more than two cells (non-manifold)");
      }
    }
  }
  std::sort(mesh.interior_facets.begin(), mesh.interior_facets.end(),
            [](const InteriorFacet& a, const InteriorFacet& b) {
              return std::tie(a.cell_a, a.edge_a) < std::tie(b.cell_a, b.edge_a);
            });
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const auto ev = mesh.edge_vertices(c, e);
      if (incidence[edge_key(ev[0], ev[1], mesh.num_vertices())] == 1)
        mesh.boundary_facets.push_back({c, e, 1});
    }
  }
}

}  // namespace

Mesh build_uniform_square(int n, MeshPattern pattern, const Rect& extent) {
  if (n < 1) throw Error("build_uniform_square: n must be >= 1");
  if (!(extent.x1 > extent.x0) || !(extent.y1 > extent.y0))
    throw Error("build_uniform_square: degenerate extent");
  Mesh mesh;
  const double dx = (extent.x1 - extent.x0) / n;
  const double dy = (extent.y1 - extent.y0) / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({extent.x0 + i * dx, extent.y0 + j * dy});
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  if (pattern == MeshPattern::right_diagonal) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        mesh.cells.push_back({v00, v10, v11});
        mesh.cells.push_back({v00, v11, v01});
      }
    }
  } else {
    // One centre vertex per square, four triangles around it.
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        mesh.vertices.push_back(
            {extent.x0 + (i + 0.5) * dx, extent.y0 + (j + 0.5) * dy});
    const int centre0 = (n + 1) * (n + 1);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        const int ctr = centre0 + j * n + i;
        mesh.cells.push_back({v00, v10, ctr});
        mesh.cells.push_back({v10, v11, ctr});
        mesh.cells.push_back({v11, v01, ctr});
        mesh.cells.push_back({v01, v00, ctr});
      }
    }
  }
  build_facets(mesh);
  compute_diameters(mesh);
  return mesh;
}

namespace {

// Line-oriented reader that strips '#' comments and tracks line numbers for
// error reporting.
class LineTokens {
 public:
  LineTokens(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  // Returns false at EOF; otherwise fills tokens with a non-empty line.
  bool next_line(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      tokens.clear();
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(path_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

  long parse_int(const std::string& tok) const {
    try {
      size_t pos = 0;
      const long v = std::stol(tok, &pos);
      if (pos != tok.size()) fail("expected integer, got '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("expected integer, got '" + tok + "'");
    }
  }

  double parse_real(const std::string& tok) const {
    try {
      size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) fail("expected real, got '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("expected real, got '" + tok + "'");
    }
  }

 private:
  std::istream& in_;
  std::string path_;
  int lineno_ = 0;
};

}  // namespace

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_mesh: cannot open '" + path + "'");
  LineTokens lt(in, path);
  std::vector<std::string> tok;

  if (!lt.next_line(tok) || tok.size() != 2 || tok[0] != "mesh2d" || tok[1] != "1")
    lt.fail("expected header 'mesh2d 1'");

  Mesh mesh;
  if (!lt.next_line(tok) || tok.size() != 2 || tok[0] != "vertices")
    lt.fail("expected 'vertices N'");
  const long nv = lt.parse_int(tok[1]);
  if (nv < 3) lt.fail("vertex count must be >= 3");
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!lt.next_line(tok) || tok.size() != 2) lt.fail("expected vertex line 'x y'");
    mesh.vertices.push_back({lt.parse_real(tok[0]), lt.parse_real(tok[1])});
  }

  if (!lt.next_line(tok) || tok.size() != 2 || tok[0] != "cells")
    lt.fail("expected 'cells M'");
  const long nc = lt.parse_int(tok[1]);
  if (nc < 1) lt.fail("cell count must be >= 1");
  mesh.cells.reserve(nc);
  for (long c = 0; c < nc; ++c) {
    if (!lt.next_line(tok) || tok.size() != 3) lt.fail("expected cell line 'i j k'");
    std::array<int, 3> cell;
    for (int k = 0; k < 3; ++k) {
      const long v = lt.parse_int(tok[k]);
      if (v < 0 || v >= nv) lt.fail("vertex index " + std::to_string(v) + " out of range");
      cell[k] = static_cast<int>(v);
    }
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2])
      lt.fail("degenerate cell with repeated vertices");
    mesh.cells.push_back(cell);
    if (mesh.signed_area(static_cast<int>(c)) <= 0.0)
      lt.fail("cell " + std::to_string(c) + " has non-positive area (inverted or degenerate)");
  }

  build_facets(mesh);
  compute_diameters(mesh);

  if (!lt.next_line(tok) || tok.size() != 2 || tok[0] != "boundary")
    lt.fail("expected 'boundary B'");
  const long nb = lt.parse_int(tok[1]);
  // Map (cell, edge) -> position in boundary_facets for marker assignment.
  std::unordered_map<uint64_t, int> bpos;
  for (int i = 0; i < static_cast<int>(mesh.boundary_facets.size()); ++i) {
    const auto& bf = mesh.boundary_facets[i];
    bpos[static_cast<uint64_t>(bf.cell) * 3 + bf.edge] = i;
  }
  for (long i = 0; i < nb; ++i) {
    if (!lt.next_line(tok) || tok.size() != 3)
      lt.fail("expected boundary line 'cell local_edge marker'");
    const long c = lt.parse_int(tok[0]);
    const long e = lt.parse_int(tok[1]);
    const long m = lt.parse_int(tok[2]);
    if (c < 0 || c >= nc) lt.fail("boundary cell index out of range");
    if (e < 0 || e > 2) lt.fail("boundary local edge must be 0, 1, or 2");
    const auto it = bpos.find(static_cast<uint64_t>(c) * 3 + e);
    if (it == bpos.end())
      lt.fail("edge " + std::to_string(e) + " of cell " + std::to_string(c) +
              " is not a boundary facet");
    mesh.boundary_facets[it->second].marker = static_cast<int>(m);
  }
  return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_mesh: cannot open '" + path + "' for writing");
  out.precision(17);
  out << "mesh2d 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  for (const auto& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  out << "cells " << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells) out << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "boundary " << mesh.boundary_facets.size() << "\n";
  for (const auto& b : mesh.boundary_facets)
    out << b.cell << " " << b.edge << " " << b.marker << "\n";
  if (!out) throw Error("write_mesh: write to '" + path + "' failed");
}

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> report;
  const auto complain = [&report](const std::string& msg) { report.push_back(msg); };

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int k = 0; k < 3; ++k)
      if (cell[k] < 0 || cell[k] >= mesh.num_vertices()) {
        complain("cell " + std::to_string(c) + " has out-of-range vertex index");
        return report;  // nothing else is checkable
      }
    if (mesh.signed_area(c) <= 0.0)
      complain("cell " + std::to_string(c) + " has non-positive signed area");
  }

  // Recompute edge incidence and compare with the stored facet lists.
  std::unordered_map<uint64_t, int> incidence;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int e = 0; e < 3; ++e) {
      const auto ev = mesh.edge_vertices(c, e);
      const int count = ++incidence[edge_key(ev[0], ev[1], mesh.num_vertices())];
      if (count == 3)
        complain("facet between vertices " + std::to_string(std::min(ev[0], ev[1])) + " and " +
                 std::to_string(std::max(ev[0], ev[1])) + " shared by more than two cells");
    }
  std::unordered_map<uint64_t, int> stored;
  int listed_interior = 0, listed_boundary = 0;
  for (const auto& f : mesh.interior_facets) {
    if (f.cell_a >= f.cell_b)
      complain("interior facet not ordered cell_a < cell_b");
    const auto ea = mesh.edge_vertices(f.cell_a, f.edge_a);
    const auto eb = mesh.edge_vertices(f.cell_b, f.edge_b);
    if (edge_key(ea[0], ea[1], mesh.num_vertices()) != edge_key(eb[0], eb[1], mesh.num_vertices()))
      complain("interior facet sides reference different vertex pairs");
    ++stored[edge_key(ea[0], ea[1], mesh.num_vertices())];
    ++listed_interior;
    const Vec2 na = mesh.outward_normal(f.cell_a, f.edge_a);
    const Vec2 nb = mesh.outward_normal(f.cell_b, f.edge_b);
    if (std::abs(na.x + nb.x) > 1e-14 || std::abs(na.y + nb.y) > 1e-14)
      complain("interior facet normals are not opposite");
    const Vec2 ma = mesh.edge_point(f.cell_a, f.edge_a, 0.5);
    const Vec2 mb = mesh.edge_point(f.cell_b, f.edge_b, 0.5);
    if (std::abs(ma.x - mb.x) > 1e-14 || std::abs(ma.y - mb.y) > 1e-14)
      complain("interior facet midpoints do not coincide");
  }
  for (const auto& b : mesh.boundary_facets) {
    const auto ev = mesh.edge_vertices(b.cell, b.edge);
    ++stored[edge_key(ev[0], ev[1], mesh.num_vertices())];
    ++listed_boundary;
  }
  int derived_interior = 0, derived_boundary = 0;
  for (const auto& [key, count] : incidence) {
    if (count == 2) ++derived_interior;
    if (count == 1) ++derived_boundary;
    const auto it = stored.find(key);
    const int have = (it == stored.end()) ? 0 : it->second;
    if (count <= 2 && have != 1)
      complain("facet lists disagree with cell connectivity (an edge is listed " +
               std::to_string(have) + " times)");
  }
  if (listed_interior != derived_interior)
    complain("interior facet count " + std::to_string(listed_interior) +
             " does not match connectivity (" + std::to_string(derived_interior) + ")");
  if (listed_boundary != derived_boundary)
    complain("boundary facet count " + std::to_string(listed_boundary) +
             " does not match connectivity (" + std::to_string(derived_boundary) + ")");

  if (mesh.h.size() != mesh.cells.size()) {
    complain("per-cell diameter array has wrong length");
  } else {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      double hmax = 0.0;
      for (int e = 0; e < 3; ++e) hmax = std::max(hmax, mesh.edge_length(c, e));
      if (std::abs(mesh.h[c] - hmax) > 1e-15 * std::max(1.0, hmax))
        complain("cell " + std::to_string(c) + " diameter differs from its longest edge");
    }
  }
  return report;
}

}  // namespace ddg
