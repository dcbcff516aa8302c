// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "support/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ddg::testing {
namespace {

// 7-point Gauss-Legendre rule on (0,1), nodes/weights from the literature.
constexpr int kNq = 7;
const double kGx[kNq] = {0.5 - 0.5 * 0.9491079123427585245262,
                         0.5 - 0.5 * 0.7415311855993944398639,
                         0.5 - 0.5 * 0.4058451513773971669066,
                         0.5,
                         0.5 + 0.5 * 0.4058451513773971669066,
                         0.5 + 0.5 * 0.7415311855993944398639,
                         0.5 + 0.5 * 0.9491079123427585245262};
const double kGw[kNq] = {0.5 * 0.1294849661688696932706, 0.5 * 0.2797053914892766679015,
                         0.5 * 0.3818300505051189449504, 0.5 * 0.4179591836734693877551,
                         0.5 * 0.3818300505051189449504, 0.5 * 0.2797053914892766679015,
                         0.5 * 0.1294849661688696932706};

// Monomials 1, x, y, x^2, xy, y^2.
double mono(int k, double x, double y) {
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return y;
    case 3: return x * x;
    case 4: return x * y;
    default: return y * y;
  }
}

Vec2 dmono(int k, double x, double y) {
  switch (k) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, 1.0};
    case 3: return {2.0 * x, 0.0};
    case 4: return {y, x};
    default: return {0.0, 2.0 * y};
  }
}

// Gauss-Jordan inverse of an n x n matrix (row-major), partial pivoting.
void invert(double* a, int n) {
  double inv[36];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i * n + j] = (i == j) ? 1.0 : 0.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) throw std::runtime_error("oracle: singular Vandermonde");
    for (int j = 0; j < n; ++j) {
      std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(inv[c * n + j], inv[piv * n + j]);
    }
    const double d = 1.0 / a[c * n + c];
    for (int j = 0; j < n; ++j) {
      a[c * n + j] *= d;
      inv[c * n + j] *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  for (int i = 0; i < n * n; ++i) a[i] = inv[i];
}

// Per-cell basis as monomial coefficients: value(j, x) = sum_k c[k][j] m_k(x).
struct MonoBasis {
  int dpc = 0;
  double c[6][6] = {};

  static MonoBasis build(const Space& s, int cell) {
    MonoBasis b;
    b.dpc = s.dofs_per_cell;
    double v[36];
    for (int i = 0; i < b.dpc; ++i) {
      const Vec2 p = s.node_coords[s.dof(cell, i)];
      for (int k = 0; k < b.dpc; ++k) v[i * b.dpc + k] = mono(k, p.x, p.y);
    }
    invert(v, b.dpc);  // column j now holds basis j's coefficients
    for (int k = 0; k < b.dpc; ++k)
      for (int j = 0; j < b.dpc; ++j) b.c[k][j] = v[k * b.dpc + j];
    return b;
  }

  double value(int j, double x, double y) const {
    double s = 0.0;
    for (int k = 0; k < dpc; ++k) s += c[k][j] * mono(k, x, y);
    return s;
  }
  Vec2 gradient(int j, double x, double y) const {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < dpc; ++k) g += c[k][j] * dmono(k, x, y);
    return g;
  }
};

// Gradient of a discrete field at x inside `cell`, through the monomial
// representation (not through the library's barycentric evaluation).
Vec2 field_gradient(const Field& f, int cell, double x, double y) {
  const MonoBasis b = MonoBasis::build(*f.space, cell);
  Vec2 g{0.0, 0.0};
  for (int j = 0; j < b.dpc; ++j) g += f.coeffs[f.space->dof(cell, j)] * b.gradient(j, x, y);
  return g;
}

Vec2 drift_gradient(const Potential& psi, int cell, double x, double y, double t) {
  if (psi.is_discrete()) return psi.sign() * field_gradient(psi.discrete_field(), cell, x, y);
  return psi.gradient({x, y}, t, cell, Bary{1.0, 0.0, 0.0});
}

// Applies fn(x, w) over a collapsed-product rule on the cell; the collapse
// direction differs from the library's rule on purpose.
template <class Fn>
void for_cell_points(const Mesh& mesh, int cell, Fn&& fn) {
  const auto& cv = mesh.cells[cell];
  const Vec2 A = mesh.vertices[cv[0]], B = mesh.vertices[cv[1]], C = mesh.vertices[cv[2]];
  const Vec2 e1 = B - A, e2 = C - A;
  const double det = e1.x * e2.y - e1.y * e2.x;
  for (int qa = 0; qa < kNq; ++qa)
    for (int qb = 0; qb < kNq; ++qb) {
      const double a = kGx[qa], b = kGx[qb];
      const double xi = a * (1.0 - b), eta = b;
      const Vec2 x = A + xi * e1 + eta * e2;
      fn(x, det * kGw[qa] * kGw[qb] * (1.0 - b));
    }
}

double longest_edge(const Mesh& mesh, int cell) {
  const auto& cv = mesh.cells[cell];
  double h = 0.0;
  for (int e = 0; e < 3; ++e)
    h = std::max(h, norm(mesh.vertices[cv[(e + 1) % 3]] - mesh.vertices[cv[e]]));
  return h;
}

struct FacetSide {
  Vec2 q0, q1;   // neighbour-side edge endpoints
  Vec2 n;        // owner outward normal
  double len;
  double h_f;
};

FacetSide facet_side(const Mesh& mesh, const InteriorFacet& f) {
  FacetSide fs;
  const auto ev = mesh.edge_vertices(f.cell_b, f.edge_b);
  fs.q0 = mesh.vertices[ev[0]];
  fs.q1 = mesh.vertices[ev[1]];
  const Vec2 t = fs.q1 - fs.q0;
  fs.len = norm(t);
  // (t.y, -t.x)/len points out of cell_b; the owner normal is its negation.
  fs.n = Vec2{-t.y, t.x} * (1.0 / fs.len);
  fs.h_f = std::min(longest_edge(mesh, f.cell_a), longest_edge(mesh, f.cell_b));
  return fs;
}

}  // namespace

DenseMatrix dense_mass(const SpacePtr& space) {
  const Space& s = *space;
  const int n = s.num_dofs(), dpc = s.dofs_per_cell;
  DenseMatrix M(n, n);
  for (int cell = 0; cell < s.mesh->num_cells(); ++cell) {
    const MonoBasis b = MonoBasis::build(s, cell);
    for_cell_points(*s.mesh, cell, [&](const Vec2& x, double w) {
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j)
          M(s.dof(cell, i), s.dof(cell, j)) += w * b.value(i, x.x, x.y) * b.value(j, x.x, x.y);
    });
  }
  return M;
}

DenseMatrix dense_sip(const SpacePtr& space, double sigma) {
  const Space& s = *space;
  const Mesh& mesh = *s.mesh;
  const int n = s.num_dofs(), dpc = s.dofs_per_cell;
  DenseMatrix A(n, n);
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const MonoBasis b = MonoBasis::build(s, cell);
    for_cell_points(mesh, cell, [&](const Vec2& x, double w) {
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j)
          A(s.dof(cell, i), s.dof(cell, j)) +=
              w * dot(b.gradient(i, x.x, x.y), b.gradient(j, x.x, x.y));
    });
  }
  for (const auto& f : mesh.interior_facets) {
    const FacetSide fs = facet_side(mesh, f);
    const MonoBasis ba = MonoBasis::build(s, f.cell_a);
    const MonoBasis bb = MonoBasis::build(s, f.cell_b);
    const int m = 2 * dpc;
    // Literal zero-extended traces: basis k lives on side a for k < dpc.
    auto trace_a = [&](int k, const Vec2& x) { return k < dpc ? ba.value(k, x.x, x.y) : 0.0; };
    auto trace_b = [&](int k, const Vec2& x) { return k < dpc ? 0.0 : bb.value(k - dpc, x.x, x.y); };
    auto grad_avg_n = [&](int k, const Vec2& x) {
      const Vec2 g = k < dpc ? ba.gradient(k, x.x, x.y) : bb.gradient(k - dpc, x.x, x.y);
      return 0.5 * dot(g, fs.n);
    };
    auto gdof = [&](int k) { return k < dpc ? s.dof(f.cell_a, k) : s.dof(f.cell_b, k - dpc); };
    for (int q = 0; q < kNq; ++q) {
      const Vec2 x = fs.q0 + kGx[q] * (fs.q1 - fs.q0);
      const double w = kGw[q] * fs.len;
      for (int i = 0; i < m; ++i) {
        const double ji = trace_a(i, x) - trace_b(i, x);
        for (int j = 0; j < m; ++j) {
          const double jj = trace_a(j, x) - trace_b(j, x);
          A(gdof(i), gdof(j)) += w * (-(jj * grad_avg_n(i, x) + ji * grad_avg_n(j, x)) +
                                      (sigma / fs.h_f) * ji * jj);
        }
      }
    }
  }
  return A;
}

DenseMatrix dense_upwind(const SpacePtr& space, const Potential& psi, double mu, double t) {
  const Space& s = *space;
  const Mesh& mesh = *s.mesh;
  const int n = s.num_dofs(), dpc = s.dofs_per_cell;
  DenseMatrix B(n, n);
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const MonoBasis b = MonoBasis::build(s, cell);
    for_cell_points(mesh, cell, [&](const Vec2& x, double w) {
      const Vec2 gpsi = drift_gradient(psi, cell, x.x, x.y, t);
      for (int i = 0; i < dpc; ++i)
        for (int j = 0; j < dpc; ++j)
          B(s.dof(cell, i), s.dof(cell, j)) +=
              w * b.value(j, x.x, x.y) * dot(gpsi, b.gradient(i, x.x, x.y));
    });
  }
  for (const auto& f : mesh.interior_facets) {
    const FacetSide fs = facet_side(mesh, f);
    const MonoBasis ba = MonoBasis::build(s, f.cell_a);
    const MonoBasis bb = MonoBasis::build(s, f.cell_b);
    const int m = 2 * dpc;
    auto trace_a = [&](int k, const Vec2& x) { return k < dpc ? ba.value(k, x.x, x.y) : 0.0; };
    auto trace_b = [&](int k, const Vec2& x) { return k < dpc ? 0.0 : bb.value(k - dpc, x.x, x.y); };
    auto gdof = [&](int k) { return k < dpc ? s.dof(f.cell_a, k) : s.dof(f.cell_b, k - dpc); };
    for (int q = 0; q < kNq; ++q) {
      const Vec2 x = fs.q0 + kGx[q] * (fs.q1 - fs.q0);
      const double w = kGw[q] * fs.len;
      double gpn;
      if (psi.is_discrete()) {
        gpn = 0.5 * dot(drift_gradient(psi, f.cell_a, x.x, x.y, t) +
                            drift_gradient(psi, f.cell_b, x.x, x.y, t),
                        fs.n);
      } else {
        gpn = dot(drift_gradient(psi, f.cell_a, x.x, x.y, t), fs.n);
      }
      for (int i = 0; i < m; ++i) {
        const double ji = trace_a(i, x) - trace_b(i, x);
        for (int j = 0; j < m; ++j) {
          const double avg_j = 0.5 * (trace_a(j, x) + trace_b(j, x));
          const double jj = trace_a(j, x) - trace_b(j, x);
          B(gdof(i), gdof(j)) += w * (-gpn * avg_j * ji + 0.5 * mu * std::abs(gpn) * jj * ji);
        }
      }
    }
  }
  return B;
}

std::vector<double> dense_load(const SpacePtr& space, const TimeScalarFn& f, double t) {
  const Space& s = *space;
  const int dpc = s.dofs_per_cell;
  std::vector<double> L(s.num_dofs(), 0.0);
  for (int cell = 0; cell < s.mesh->num_cells(); ++cell) {
    const MonoBasis b = MonoBasis::build(s, cell);
    for_cell_points(*s.mesh, cell, [&](const Vec2& x, double w) {
      const double fx = f(x.x, x.y, t);
      for (int i = 0; i < dpc; ++i) L[s.dof(cell, i)] += w * fx * b.value(i, x.x, x.y);
    });
  }
  return L;
}

double integrate(const Mesh& mesh, const std::function<double(double, double)>& f) {
  double total = 0.0;
  for (int cell = 0; cell < mesh.num_cells(); ++cell)
    for_cell_points(mesh, cell, [&](const Vec2& x, double w) { total += w * f(x.x, x.y); });
  return total;
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      d(r, a.col_indices[k]) += a.values[k];
  return d;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace ddg::testing
