// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "ddg/space.hpp"

namespace ddg {

// Drift potential: either an analytic triple (value, gradient, Laplacian) or
// a discrete Field.  Discrete evaluation needs the cell context because the
// field is double-valued on facets; assembly resolves facet traces itself.
class Potential {
 public:
  using ValueFn = std::function<double(double, double, double)>;  // (x, y, t)
  using GradFn = std::function<Vec2(double, double, double)>;

  static Potential analytic(ValueFn value, GradFn gradient, ValueFn laplacian,
                            bool time_dependent = true) {
    Potential p;
    p.value_ = std::move(value);
    p.gradient_ = std::move(gradient);
    p.laplacian_ = std::move(laplacian);
    p.time_dependent_ = time_dependent;
    return p;
  }

  static Potential zero() {
    return analytic([](double, double, double) { return 0.0; },
                    [](double, double, double) { return Vec2{0, 0}; },
                    [](double, double, double) { return 0.0; }, false);
  }

  static Potential discrete(Field psi) {
    Potential p;
    p.field_ = std::move(psi);
    p.time_dependent_ = false;
    return p;
  }

  // Same potential with the opposite sign (the negative species' drift).
  Potential negated() const {
    Potential p = *this;
    p.sign_ = -p.sign_;
    return p;
  }

  bool is_discrete() const { return field_.has_value(); }
  bool is_time_dependent() const { return time_dependent_; }
  const Field& discrete_field() const { return *field_; }
  double sign() const { return sign_; }

  double value(const Vec2& x, double t, int cell, const Bary& l) const {
    if (field_) return sign_ * evaluate(*field_, cell, l);
    return sign_ * value_(x.x, x.y, t);
  }
  Vec2 gradient(const Vec2& x, double t, int cell, const Bary& l) const {
    if (field_) return sign_ * evaluate_gradient(*field_, cell, l);
    return sign_ * gradient_(x.x, x.y, t);
  }
  double laplacian(const Vec2& x, double t, int cell, const Bary&) const {
    if (field_) return sign_ * discrete_laplacian(cell);
    return sign_ * laplacian_(x.x, x.y, t);
  }

 private:
  Potential() = default;
  double discrete_laplacian(int cell) const;

  ValueFn value_;
  GradFn gradient_;
  ValueFn laplacian_;
  std::optional<Field> field_;
  bool time_dependent_ = false;
  double sign_ = 1.0;
};

}  // namespace ddg
