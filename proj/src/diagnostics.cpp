// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#include "ddg/diagnostics.hpp"

#include <cmath>
#include <cstdlib>

#include "ddg/quadrature.hpp"

namespace ddg {
namespace {

// Cellwise integral of fn(cell, bary, x) over the mesh.
template <class Fn>
double sum_cells(const Space& s, int degree, Fn&& fn) {
  const QuadratureRule rule = triangle_rule(degree);
  double acc = 0.0;
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const CellGeometry geom = s.mesh->geometry(c);
    const double jac = 2.0 * geom.area;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Bary& l = rule.points[q];
      acc += rule.weights[q] * jac * fn(c, l, geom.physical(l));
    }
  }
  return acc;
}

// Interior-facet integral of fn(facet, bary_a, bary_b, x, normal, h_f).
template <class Fn>
double sum_interior_facets(const Space& s, int degree, Fn&& fn) {
  const Mesh& mesh = *s.mesh;
  const FacetRule rule = facet_rule(degree);
  double acc = 0.0;
  for (const InteriorFacet& f : mesh.interior_facets) {
    const Vec2 normal = mesh.outward_normal(f.cell_a, f.edge_a);
    const double h_f = mesh.facet_h(f);
    const double len = mesh.edge_length(f.cell_a, f.edge_a);
    const CellGeometry geom_b = mesh.geometry(f.cell_b);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double sp = rule.points[q];
      const Vec2 x = mesh.edge_point(f.cell_a, f.edge_a, sp);
      Bary bary_a = {0.0, 0.0, 0.0};
      bary_a[f.edge_a] = 1.0 - sp;
      bary_a[(f.edge_a + 1) % 3] = sp;
      const Bary bary_b = geom_b.barycentric(x);
      acc += rule.weights[q] * len * fn(f, bary_a, bary_b, x, normal, h_f);
    }
  }
  return acc;
}

// Facet value of grad(psi).n: one analytic evaluation on the owner side, or
// the average of the two one-sided traces when psi is a discrete field --
// matching the assembly of the upwind form.
double facet_drift_normal(const Potential& psi, const InteriorFacet& f, const Bary& bary_a,
                          const Bary& bary_b, const Vec2& x, const Vec2& normal, double t) {
  if (!psi.is_discrete()) return dot(psi.gradient(x, t, f.cell_a, bary_a), normal);
  return 0.5 * (dot(psi.gradient(x, t, f.cell_a, bary_a), normal) +
                dot(psi.gradient(x, t, f.cell_b, bary_b), normal));
}

double sq(double v) { return v * v; }

// Quadrature degree the upwind assembly uses for a given potential; the
// diagnostics that reproduce assembled quantities must integrate on the same
// points (kept in sync with the drift assembly).
int upwind_rule_degree(const Space& s, const Potential& psi) {
  return 2 * s.degree + (psi.is_discrete() ? s.degree : 4);
}

double l2_norm_sq(const Field& field) {
  const Space& s = *field.space;
  return sum_cells(s, 2 * s.degree, [&](int c, const Bary& l, const Vec2&) {
    return sq(evaluate(field, c, l));
  });
}

double sip_norm_sq(const Field& field, double sigma) {
  const Space& s = *field.space;
  const double grad_part = sum_cells(s, 2 * s.degree, [&](int c, const Bary& l, const Vec2&) {
    const Vec2 g = evaluate_gradient(field, c, l);
    return dot(g, g);
  });
  const double jump_part = sum_interior_facets(
      s, 2 * s.degree,
      [&](const InteriorFacet& f, const Bary& la, const Bary& lb, const Vec2&, const Vec2&,
          double h_f) {
        return (sigma / h_f) * sq(evaluate(field, f.cell_a, la) - evaluate(field, f.cell_b, lb));
      });
  return grad_part + jump_part;
}

}  // namespace

double l2_norm(const Field& field) { return std::sqrt(l2_norm_sq(field)); }

double sip_norm(const Field& field, double sigma) { return std::sqrt(sip_norm_sq(field, sigma)); }

double energy_norm(const Field& field, double tau, double sigma, double mu, const Potential& psi,
                   double t, bool star) {
  const Space& s = *field.space;
  const int fdeg = 2 * s.degree + (psi.is_discrete() ? s.degree : 8);
  const double drift_part = sum_interior_facets(
      s, fdeg,
      [&](const InteriorFacet& f, const Bary& la, const Bary& lb, const Vec2& x,
          const Vec2& normal, double) {
        const double gpn = facet_drift_normal(psi, f, la, lb, x, normal, t);
        const double wa = evaluate(field, f.cell_a, la);
        const double wb = evaluate(field, f.cell_b, lb);
        double term = 0.5 * mu * std::abs(gpn) * sq(wa - wb);
        if (star) term += std::abs(gpn) * sq(0.5 * (wa + wb));
        return term;
      });
  return std::sqrt(l2_norm_sq(field) + tau * sip_norm_sq(field, sigma) + tau * drift_part);
}

double error_energy_norm(const Field& field, const TimeScalarFn& exact,
                         const TimeVec2Fn& grad_exact, double t, double tau, double sigma,
                         double mu, const Potential& psi) {
  const Space& s = *field.space;
  const int cdeg = 2 * s.degree + 8;
  const double l2_part = sum_cells(s, cdeg, [&](int c, const Bary& l, const Vec2& x) {
    return sq(exact(x.x, x.y, t) - evaluate(field, c, l));
  });
  const double grad_part = sum_cells(s, cdeg, [&](int c, const Bary& l, const Vec2& x) {
    const Vec2 g = grad_exact(x.x, x.y, t) - evaluate_gradient(field, c, l);
    return dot(g, g);
  });
  // The exact solution is continuous, so the error's facet jumps are the
  // (negated) jumps of the discrete field; the sign drops under the square.
  const int fdeg = 2 * s.degree + (psi.is_discrete() ? s.degree : 8);
  const double facet_part = sum_interior_facets(
      s, fdeg,
      [&](const InteriorFacet& f, const Bary& la, const Bary& lb, const Vec2& x,
          const Vec2& normal, double h_f) {
        const double jump = evaluate(field, f.cell_a, la) - evaluate(field, f.cell_b, lb);
        const double gpn = facet_drift_normal(psi, f, la, lb, x, normal, t);
        return (sigma / h_f) * sq(jump) + 0.5 * mu * std::abs(gpn) * sq(jump);
      });
  return std::sqrt(l2_part + tau * (grad_part + facet_part));
}

double boundary_energy_change(const Field& u_new, const Field& u_prev, double tau,
                              const Potential& psi, double t) {
  const Space& s = *u_new.space;
  const Mesh& mesh = *s.mesh;
  const FacetRule rule = facet_rule(2 * s.degree + 8);
  double flux = 0.0;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    const Vec2 normal = mesh.outward_normal(f.cell, f.edge);
    const double len = mesh.edge_length(f.cell, f.edge);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double sp = rule.points[q];
      const Vec2 x = mesh.edge_point(f.cell, f.edge, sp);
      Bary l = {0.0, 0.0, 0.0};
      l[f.edge] = 1.0 - sp;
      l[(f.edge + 1) % 3] = sp;
      const double u = evaluate(u_new, f.cell, l);
      const double un = dot(evaluate_gradient(u_new, f.cell, l), normal);
      const double gpn = dot(psi.gradient(x, t, f.cell, l), normal);
      flux += rule.weights[q] * len * (u * un + 0.5 * u * u * gpn);
    }
  }
  return 0.5 * l2_norm_sq(u_new) - 0.5 * l2_norm_sq(u_prev) - tau * flux;
}

double upwind_energy_identity_residual(const Field& field, const Potential& psi, double mu,
                                       double t) {
  const Space& s = *field.space;
  const SparseMatrix B = assemble_upwind(field.space, psi, mu, t);
  const std::vector<double> Bw = B.apply(field.coeffs);
  double quad = 0.0;
  for (int i = 0; i < s.num_dofs(); ++i) quad += field.coeffs[i] * Bw[i];

  const int deg = upwind_rule_degree(s, psi);
  const double cell_part = sum_cells(s, deg, [&](int c, const Bary& l, const Vec2& x) {
    return -0.5 * sq(evaluate(field, c, l)) * psi.laplacian(x, t, c, l);
  });
  const double facet_part = sum_interior_facets(
      s, deg,
      [&](const InteriorFacet& f, const Bary& la, const Bary& lb, const Vec2& x,
          const Vec2& normal, double) {
        const double gpn = facet_drift_normal(psi, f, la, lb, x, normal, t);
        const double jump = evaluate(field, f.cell_a, la) - evaluate(field, f.cell_b, lb);
        return 0.5 * mu * std::abs(gpn) * sq(jump);
      });
  return std::abs(quad - (cell_part + facet_part));
}

}  // namespace ddg
