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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mdoc/control_set.hpp"
#include "mdoc/mirror.hpp"

namespace mdoc {

/// Lipschitz and curvature bounds used by the constants ledger.
struct SmoothnessData {
  double lipschitz_M = 0.0;
  double hess_bound_buu = 0.0;
  double hess_bound_fuu = 0.0;
};

/// Finite-horizon deterministic control problem
///   x' = b_t(x, u), x(0) = x0,  J(u) = int f_t(x, u) dt + g(x_T)
/// with analytic first derivatives of b, f and g.
///
/// Callbacks must be pure; a ProblemSpec may be shared between threads.
struct ProblemSpec {
  using VecFn = std::function<Vector(double, VecRef, VecRef)>;
  using MatFn = std::function<Matrix(double, VecRef, VecRef)>;
  using ScalarFn = std::function<double(double, VecRef, VecRef)>;

  std::string name;
  int state_dim = 0;
  int control_dim = 0;
  double horizon = 0.0;
  Vector initial_state;

  VecFn drift;
  MatFn drift_jac_x;  // d x d
  MatFn drift_jac_u;  // d x m
  ScalarFn running_cost;
  VecFn running_grad_x;
  VecFn running_grad_u;
  std::function<double(VecRef)> terminal_cost;
  std::function<Vector(VecRef)> terminal_grad;

  ControlSet control_set;
  bool convex = false;  // declared, not verified
  std::optional<SmoothnessData> smoothness;

  /// Throws InvalidArgument if dimensions, horizon or callbacks are missing
  /// or inconsistent.
  void validate() const;
};

/// H0 = p.b_t(x,u) - f_t(x,u).
double hamiltonian0(const ProblemSpec& problem, double t, VecRef x, VecRef p,
                    VecRef u);

/// grad_u H^tau = grad_u b^T p - grad_u f - tau grad h(u).
Vector grad_u_hamiltonian_tau(const ProblemSpec& problem, const MirrorMap& mirror,
                              double tau, double t, VecRef x, VecRef p, VecRef u);

/// grad_x H0 = grad_x b^T p - grad_x f.
Vector grad_x_hamiltonian0(const ProblemSpec& problem, double t, VecRef x,
                           VecRef p, VecRef u);

/// x' = a x + u, f = q x^2 / 2, g = s x^2 / 2, unconstrained.
ProblemSpec make_lq(double a, double q, double s, double x0, double T);

/// x' = u, x0 = 0, f = 0, g = x^4 / 4, unconstrained.
ProblemSpec make_quartic(double T);

struct HighDimParams {
  double q = 1.0;
  double s = 5.0;
  double gamma = 1.0;
  double T = 1.0;
};

/// Matrices and vectors of the coupled sine system.
struct HighDimData {
  Matrix A, B, C;
  Vector x_init, x_target;
  HighDimParams params;
};

/// Deterministic draw of the coupled sine system data.
///
/// Entries of M1, M2, M3 (filled in that order, row-major) are standard
/// normals from std::mt19937_64 seeded with `seed`, transformed by the
/// Box-Muller method (both outputs of each pair are used). Uniforms are
/// formed from the top 53 bits of each draw, shifted into (0, 1].
HighDimData highdim_data(int d, std::uint64_t seed, const HighDimParams& params);

/// x' = A x + B u + gamma sin(C x), f = q/(2d) |x|^2,
/// g = s/(2d) |x - x_tar|^2, unconstrained, control dimension d.
ProblemSpec make_highdim(int d, std::uint64_t seed, const HighDimParams& params);
ProblemSpec make_highdim(std::shared_ptr<const HighDimData> data);

}  // namespace mdoc
