// Copyright 2026 The mdoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>

#include "mdoc/control_set.hpp"

namespace mdoc {

class Trajectory;

/// Strongly convex regularizer h on the control set, with its gradient,
/// Hessian and modulus sigma_h (D_h(v|u) >= sigma_h/2 |v-u|^2).
///
/// The same h also enters the regularized cost as tau * h(u).
class MirrorMap {
 public:
  enum class Kind { Quadratic, QuarticAugmented, Custom };

  using ScalarFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;
  using MatrixFn = std::function<Matrix(const Vector&)>;

  /// h(u) = |u|^2 / 2, sigma_h = 1.
  static MirrorMap quadratic();
  /// h(u) = |u|^2 / 2 + (epsilon/4) |u|^4, sigma_h = 1. Requires epsilon >= 0.
  static MirrorMap quartic_augmented(double epsilon);
  /// User supplied map. The Hessian is used by the Newton prox solver.
  static MirrorMap custom(ScalarFn h, VectorFn grad, MatrixFn hessian,
                          double strong_convexity);

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double strong_convexity() const { return sigma_; }
  std::string name() const;

  double value(const Vector& u) const;
  Vector gradient(const Vector& u) const;
  Matrix hessian(const Vector& u) const;

 private:
  MirrorMap() = default;

  Kind kind_ = Kind::Quadratic;
  double epsilon_ = 0.0;
  double sigma_ = 1.0;
  ScalarFn h_;
  VectorFn grad_;
  MatrixFn hess_;
};

/// D_h(v|u) = h(v) - h(u) - grad h(u).(v - u).
double bregman_pointwise(const MirrorMap& map, const Vector& v, const Vector& u);

/// Trapezoidal quadrature of D_h(v_t|u_t) over the grid nodes.
double bregman_integrated(const MirrorMap& map, const Trajectory& v,
                          const Trajectory& u);

/// Options for the Newton prox solver used by non-quadratic maps.
struct ProxOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
};

/// Solves argmax_{v in U} { xi.(v - u) - lambda D_h(v|u) }.
///
/// Quadratic maps use the closed form Pi_U(u + xi/lambda). Other maps run a
/// projected damped Newton iteration on lambda h(v) - eta.v with
/// eta = xi + lambda grad h(u). Throws ProxFailure if the natural residual
/// stays above the tolerance, InvalidArgument for a non-quadratic map over a
/// convex-oracle set.
Vector mirror_step_pointwise(const MirrorMap& map, const ControlSet& set,
                             const Vector& u, const Vector& xi, double lambda,
                             const ProxOptions& options = {});

/// Natural residual |v - Pi_U(v - (lambda grad h(v) - eta))| of the mirror
/// step optimality condition. Zero exactly at the maximizer.
double prox_residual(const MirrorMap& map, const ControlSet& set,
                     const Vector& u, const Vector& xi, double lambda,
                     const Vector& v);

/// Slack of the three-point inequality,
///   [xi.(ubar-u) - lambda D(ubar|u) - lambda D(w|ubar)] - [xi.(w-u) - lambda D(w|u)],
/// where ubar is the mirror step output. Nonnegative up to round-off.
double three_point_check(const MirrorMap& map, const ControlSet& set,
                         const Vector& u, const Vector& ustar, const Vector& w,
                         const Vector& xi, double lambda);

}  // namespace mdoc
