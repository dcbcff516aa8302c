// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>

namespace ddg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

// Barycentric coordinates (l0, l1, l2) with l0 + l1 + l2 = 1.
using Bary = std::array<double, 3>;

// Affine geometry of one triangle: physical map x(l) = sum_i l_i * v_i and its
// inverse.  Gradients of barycentric coordinates are constant per cell.
struct CellGeometry {
  std::array<Vec2, 3> v;       // vertex coordinates, CCW
  double area = 0.0;           // positive for CCW cells
  std::array<Vec2, 3> grad_l;  // physical gradient of each barycentric coord

  explicit CellGeometry(const std::array<Vec2, 3>& verts) : v(verts) {
    const Vec2 e1 = v[1] - v[0];
    const Vec2 e2 = v[2] - v[0];
    const double det = e1.x * e2.y - e1.y * e2.x;  // 2*area, signed
    area = 0.5 * det;
    // grad l1 = (e2.y, -e2.x)/det rotated from the inverse Jacobian transpose
    grad_l[1] = Vec2(e2.y / det, -e2.x / det);
    grad_l[2] = Vec2(-e1.y / det, e1.x / det);
    grad_l[0] = Vec2(-grad_l[1].x - grad_l[2].x, -grad_l[1].y - grad_l[2].y);
  }

  Vec2 physical(const Bary& l) const {
    return v[0] * l[0] + v[1] * l[1] + v[2] * l[2];
  }

  Bary barycentric(const Vec2& p) const {
    // l1, l2 solve [e1 e2] [l1 l2]^T = p - v0; l0 closes the partition.
    const Vec2 e1 = v[1] - v[0];
    const Vec2 e2 = v[2] - v[0];
    const Vec2 r = p - v[0];
    const double det = e1.x * e2.y - e1.y * e2.x;
    const double l1 = (r.x * e2.y - r.y * e2.x) / det;
    const double l2 = (e1.x * r.y - e1.y * r.x) / det;
    return {1.0 - l1 - l2, l1, l2};
  }
};

}  // namespace ddg
