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

#include <optional>
#include <vector>

#include "mdoc/mirror.hpp"
#include "mdoc/problem.hpp"
#include "mdoc/trajectory.hpp"

namespace mdoc {

/// Closed-form solution of the scalar Riccati equation
///   P' = P^2 / tau - 2 a P - q,  P(T) = s
/// of the one-dimensional LQ problem.
struct RiccatiSolution {
  double a = 0.0, q = 0.0, s = 0.0, tau = 0.0, T = 0.0;
  double gamma = 0.0;    // sqrt(a^2 + q/tau)
  double p_plus = 0.0;   // tau (a + gamma)
  double p_minus = 0.0;  // tau (a - gamma)
  double kappa = 0.0;    // (s - p_plus) / (s - p_minus)
};

/// Throws InvalidArgument unless tau > 0, q >= 0, s >= 0, T > 0.
RiccatiSolution make_riccati(double a, double q, double s, double tau, double T);

/// P(t); throws OutOfRange outside [0, T].
double riccati_P(const RiccatiSolution& sol, double t);

/// Optimal value 1/2 P(0) x0^2.
double lq_value(const RiccatiSolution& sol, double x0);

struct LqReference {
  Trajectory u_star;
  Trajectory x_star;
  double J_star;
};

/// Optimal state x*_t = x0 exp(int_0^t (a - P/tau)), control u* = -(P/tau) x*,
/// both sampled on `grid`. The exponent and J* use trapezoidal quadrature on
/// a 10x refined grid.
LqReference lq_reference(const RiccatiSolution& sol, double x0, const TimeGrid& grid);

/// alpha_{n+1} = alpha_n - (T^3 alpha_n^3 + tau alpha_n) / lambda, returned
/// for n = 0..n_iters.
std::vector<double> quartic_recursion(double alpha0, double T, double lambda, double tau,
                                      int n_iters);

/// Gradient of the discrete cost under the trapezoidal inner product,
/// obtained by a reverse (adjoint) sweep through the RK4 state scheme: the
/// returned G satisfies dJ(u)(du) = <G, du>_trap to round-off. In the
/// continuous limit G_t = -grad_u H^tau(x_t, p_t, u_t).
Trajectory adjoint_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                            double tau, const Trajectory& u);

/// -grad_u H^tau(x_t, p_t, u_t) at the nodes, with x and p from
/// integrate_state / integrate_adjoint (the field the solver steps along).
Trajectory hamiltonian_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                                double tau, const Trajectory& u);

/// [J(u + eps d) - J(u - eps d)] / (2 eps). Throws InvalidArgument if a
/// perturbed control leaves U.
double fd_gradient(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                   const Trajectory& u, const Trajectory& direction, double eps = 1e-4);

struct FdSweep {
  std::vector<double> eps;
  std::vector<double> values;
  /// Index of the step whose value changes least relative to its neighbours.
  std::size_t plateau = 0;
};

/// fd_gradient over eps in {1e-3, 1e-4, 1e-5, 1e-6}.
FdSweep fd_gradient_sweep(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                          const Trajectory& u, const Trajectory& direction);

/// Directional derivative through the linearized state
///   y' = grad_x b y + grad_u b du,  y(0) = 0,
/// integrated by RK4 jointly with the state, then
///   int (grad_x f.y + grad_u f.du + tau grad h(u).du) dt + grad g(x_T).y_T.
double sensitivity_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                            double tau, const Trajectory& u, const Trajectory& direction);

struct LedgerInputs {
  double M = 0.0;
  double M_buu = 0.0;
  double M_fuu = 0.0;
  double sigma_h = 1.0;
  double tau = 0.0;
  double T = 0.0;
  double x0_norm = 0.0;
};

/// A-priori bounds and the relative-smoothness constant L.
struct ConstantsLedger {
  double M_X = 0.0;
  double M_P = 0.0;
  double C_x = 0.0;
  double C_p = 0.0;
  double C_H = 0.0;
  double L = 0.0;
  LedgerInputs inputs;
};

/// M_X = (|x0| + M T) e^{MT}, M_P = M (1 + T) e^{MT}, C_x = M T e^{MT},
/// C_p = e^{MT} M (C_x + (M_P + 1)(C_x + 1) T),
/// C_H = max{M (M_P + 1), M_P M_buu + M_fuu},
/// L = tau + C_H (C_x + C_p + 1) / sigma_h.
ConstantsLedger constants_ledger(const LedgerInputs& inputs);

/// Ledger from the problem's SmoothnessData, or nullopt when it has none.
std::optional<ConstantsLedger> ledger_for(const ProblemSpec& problem,
                                          const MirrorMap& mirror, double tau);

}  // namespace mdoc
