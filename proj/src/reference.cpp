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

#include "mdoc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mdoc/errors.hpp"

namespace mdoc {

RiccatiSolution make_riccati(double a, double q, double s, double tau, double T) {
  if (!(tau > 0.0)) throw InvalidArgument("Riccati reference requires tau > 0");
  if (q < 0.0 || s < 0.0) throw InvalidArgument("Riccati weights q, s must be >= 0");
  if (!(T > 0.0)) throw InvalidArgument("horizon must be positive");
  RiccatiSolution sol;
  sol.a = a;
  sol.q = q;
  sol.s = s;
  sol.tau = tau;
  sol.T = T;
  sol.gamma = std::sqrt(a * a + q / tau);
  sol.p_plus = tau * (a + sol.gamma);
  sol.p_minus = tau * (a - sol.gamma);
  sol.kappa = (s == sol.p_minus) ? std::numeric_limits<double>::infinity()
                                 : (s - sol.p_plus) / (s - sol.p_minus);
  return sol;
}

double riccati_P(const RiccatiSolution& sol, double t) {
  if (!(sol.tau > 0.0)) throw InvalidArgument("Riccati reference requires tau > 0");
  if (!(t >= 0.0 && t <= sol.T)) throw OutOfRange("Riccati time outside [0, T]");
  // s sits on the equilibrium P_- (e.g. q = s = 0, a >= 0).
  if (sol.s == sol.p_minus) return sol.p_minus;
  if (sol.gamma == 0.0) {
    // a = q = 0: P' = P^2 / tau.
    return sol.s * sol.tau / (sol.tau + sol.s * (sol.T - t));
  }
  const double e = sol.kappa * std::exp(-2.0 * sol.gamma * (sol.T - t));
  return (sol.p_plus - e * sol.p_minus) / (1.0 - e);
}

double lq_value(const RiccatiSolution& sol, double x0) {
  return 0.5 * riccati_P(sol, 0.0) * x0 * x0;
}

LqReference lq_reference(const RiccatiSolution& sol, double x0, const TimeGrid& grid) {
  if (std::abs(grid.horizon() - sol.T) > 1e-12 * std::max(1.0, sol.T)) {
    throw InvalidArgument("grid horizon differs from the Riccati horizon");
  }
  constexpr int kRefine = 10;
  const TimeGrid fine = grid.refined(kRefine);
  const double h = fine.step();
  const Eigen::Index n = fine.node_count();

  Vector P(n);
  for (Eigen::Index k = 0; k < n; ++k) P[k] = riccati_P(sol, fine.node(k));
  Matrix x(1, n), u(1, n);
  double exponent = 0.0;
  x(0, 0) = x0;
  for (Eigen::Index k = 1; k < n; ++k) {
    exponent += 0.5 * h * ((sol.a - P[k - 1] / sol.tau) + (sol.a - P[k] / sol.tau));
    x(0, k) = x0 * std::exp(exponent);
  }
  for (Eigen::Index k = 0; k < n; ++k) u(0, k) = -P[k] / sol.tau * x(0, k);

  const Trajectory u_fine(fine, u), x_fine(fine, x);
  const ProblemSpec lq = make_lq(sol.a, sol.q, sol.s, x0, sol.T);
  const double J = evaluate_cost(lq, MirrorMap::quadratic(), sol.tau, u_fine, x_fine);

  Matrix uc(1, grid.node_count()), xc(1, grid.node_count());
  for (Eigen::Index k = 0; k < grid.node_count(); ++k) {
    uc(0, k) = u(0, kRefine * k);
    xc(0, k) = x(0, kRefine * k);
  }
  return LqReference{Trajectory(grid, std::move(uc)), Trajectory(grid, std::move(xc)), J};
}

std::vector<double> quartic_recursion(double alpha0, double T, double lambda, double tau,
                                      int n_iters) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (n_iters < 0) throw InvalidArgument("iteration count must be >= 0");
  std::vector<double> alpha{alpha0};
  alpha.reserve(static_cast<std::size_t>(n_iters) + 1);
  const double T3 = T * T * T;
  for (int n = 0; n < n_iters; ++n) {
    const double a = alpha.back();
    alpha.push_back(a - (T3 * a * a * a + tau * a) / lambda);
  }
  return alpha;
}

Trajectory adjoint_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                            double tau, const Trajectory& u) {
  const Trajectory x = integrate_state(problem, u);
  const TimeGrid& grid = u.grid();
  const double h = grid.step();
  const Eigen::Index N = grid.steps();
  const int m = problem.control_dim;

  // Cost-side partial derivatives at node k, weighted by the trapezoid rule.
  auto running_x = [&](Eigen::Index k) -> Vector {
    return grid.weight(k) * problem.running_grad_x(grid.node(k), x.at(k), u.at(k));
  };
  auto running_u = [&](Eigen::Index k) -> Vector {
    Vector g = problem.running_grad_u(grid.node(k), x.at(k), u.at(k));
    if (tau != 0.0) g += tau * mirror.gradient(u.at(k));
    return grid.weight(k) * g;
  };

  Matrix gu = Matrix::Zero(m, grid.node_count());
  Vector lam = problem.terminal_grad(x.at(N)) + running_x(N);
  gu.col(N) += running_u(N);

  for (Eigen::Index k = N - 1; k >= 0; --k) {
    const double t = grid.node(k);
    const Vector xk = x.at(k);
    const Vector ua = u.at(k), ub = u.at(k + 1);
    const Vector um = 0.5 * (ua + ub);

    // Recompute the forward stages of step k.
    const Vector K1 = problem.drift(t, xk, ua);
    const Vector X2 = xk + 0.5 * h * K1;
    const Vector K2 = problem.drift(t + 0.5 * h, X2, um);
    const Vector X3 = xk + 0.5 * h * K2;
    const Vector K3 = problem.drift(t + 0.5 * h, X3, um);
    const Vector X4 = xk + h * K3;

    Vector dK1 = (h / 6.0) * lam;
    Vector dK2 = (h / 3.0) * lam;
    Vector dK3 = (h / 3.0) * lam;
    const Vector dK4 = (h / 6.0) * lam;
    Vector dx = lam;

    const Vector dX4 = problem.drift_jac_x(t + h, X4, ub).transpose() * dK4;
    const Vector dub = problem.drift_jac_u(t + h, X4, ub).transpose() * dK4;
    dx += dX4;
    dK3 += h * dX4;

    const Vector dX3 = problem.drift_jac_x(t + 0.5 * h, X3, um).transpose() * dK3;
    Vector dum = problem.drift_jac_u(t + 0.5 * h, X3, um).transpose() * dK3;
    dx += dX3;
    dK2 += 0.5 * h * dX3;

    const Vector dX2 = problem.drift_jac_x(t + 0.5 * h, X2, um).transpose() * dK2;
    dum += problem.drift_jac_u(t + 0.5 * h, X2, um).transpose() * dK2;
    dx += dX2;
    dK1 += 0.5 * h * dX2;

    dx += problem.drift_jac_x(t, xk, ua).transpose() * dK1;
    const Vector dua = problem.drift_jac_u(t, xk, ua).transpose() * dK1;

    gu.col(k) += dua + 0.5 * dum + running_u(k);
    gu.col(k + 1) += dub + 0.5 * dum;
    lam = dx + running_x(k);
    if (!lam.allFinite()) {
      throw NumericalBlowup("discrete adjoint became non-finite at node " + std::to_string(k),
                            static_cast<std::size_t>(k));
    }
  }
  for (Eigen::Index k = 0; k <= N; ++k) gu.col(k) /= grid.weight(k);
  return Trajectory(grid, std::move(gu));
}

Trajectory hamiltonian_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                                double tau, const Trajectory& u) {
  const Trajectory x = integrate_state(problem, u);
  const Trajectory p = integrate_adjoint(problem, u, x);
  const TimeGrid& grid = u.grid();
  Matrix g(problem.control_dim, grid.node_count());
  for (Eigen::Index k = 0; k < grid.node_count(); ++k) {
    g.col(k) = -grad_u_hamiltonian_tau(problem, mirror, tau, grid.node(k), x.at(k),
                                       p.at(k), u.at(k));
  }
  return Trajectory(grid, std::move(g));
}

namespace {

double cost_of(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
               const Trajectory& u) {
  return evaluate_cost(problem, mirror, tau, u, integrate_state(problem, u));
}

void require_feasible(const ProblemSpec& problem, const Trajectory& u) {
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (!problem.control_set.contains(u.at(k), 1e-12)) {
      throw InvalidArgument("perturbed control leaves U at node " + std::to_string(k));
    }
  }
}

}  // namespace

double fd_gradient(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                   const Trajectory& u, const Trajectory& direction, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Trajectory plus = u + eps * direction;
  const Trajectory minus = u - eps * direction;
  require_feasible(problem, plus);
  require_feasible(problem, minus);
  return (cost_of(problem, mirror, tau, plus) - cost_of(problem, mirror, tau, minus)) /
         (2.0 * eps);
}

FdSweep fd_gradient_sweep(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                          const Trajectory& u, const Trajectory& direction) {
  FdSweep sweep;
  sweep.eps = {1e-3, 1e-4, 1e-5, 1e-6};
  for (double e : sweep.eps) {
    sweep.values.push_back(fd_gradient(problem, mirror, tau, u, direction, e));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sweep.values.size(); ++i) {
    const double change = std::abs(sweep.values[i] - sweep.values[i - 1]);
    if (change < best) {
      best = change;
      sweep.plateau = i;
    }
  }
  return sweep;
}

double sensitivity_gradient(const ProblemSpec& problem, const MirrorMap& mirror,
                            double tau, const Trajectory& u, const Trajectory& direction) {
  if (!(u.grid() == direction.grid()) || u.width() != direction.width()) {
    throw InvalidArgument("control and direction must share grid and width");
  }
  if (u.width() != problem.control_dim) throw InvalidArgument("control has wrong width");
  const TimeGrid& grid = u.grid();
  const double h = grid.step();
  const Eigen::Index N = grid.steps();

  Vector x = problem.initial_state;
  Vector y = Vector::Zero(problem.state_dim);
  Vector running(grid.node_count());

  auto node_term = [&](Eigen::Index k) {
    const double t = grid.node(k);
    const Vector uk = u.at(k), dk = direction.at(k);
    double v = problem.running_grad_x(t, x, uk).dot(y) +
               problem.running_grad_u(t, x, uk).dot(dk);
    if (tau != 0.0) v += tau * mirror.gradient(uk).dot(dk);
    return v;
  };

  running[0] = node_term(0);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double t = grid.node(k);
    const Vector ua = u.at(k), ub = u.at(k + 1);
    const Vector um = 0.5 * (ua + ub);
    const Vector da = direction.at(k), db = direction.at(k + 1);
    const Vector dm = 0.5 * (da + db);

    auto tangent = [&](double ts, const Vector& xs, const Vector& ys, const Vector& us,
                       const Vector& ds) -> Vector {
      return problem.drift_jac_x(ts, xs, us) * ys + problem.drift_jac_u(ts, xs, us) * ds;
    };

    const Vector K1 = problem.drift(t, x, ua);
    const Vector L1 = tangent(t, x, y, ua, da);
    const Vector X2 = x + 0.5 * h * K1, Y2 = y + 0.5 * h * L1;
    const Vector K2 = problem.drift(t + 0.5 * h, X2, um);
    const Vector L2 = tangent(t + 0.5 * h, X2, Y2, um, dm);
    const Vector X3 = x + 0.5 * h * K2, Y3 = y + 0.5 * h * L2;
    const Vector K3 = problem.drift(t + 0.5 * h, X3, um);
    const Vector L3 = tangent(t + 0.5 * h, X3, Y3, um, dm);
    const Vector X4 = x + h * K3, Y4 = y + h * L3;
    const Vector K4 = problem.drift(t + h, X4, ub);
    const Vector L4 = tangent(t + h, X4, Y4, ub, db);

    x = x + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    y = y + (h / 6.0) * (L1 + 2.0 * L2 + 2.0 * L3 + L4);
    if (!x.allFinite() || !y.allFinite()) {
      throw NumericalBlowup("linearized state became non-finite at node " +
                                std::to_string(k + 1),
                            static_cast<std::size_t>(k + 1));
    }
    running[k + 1] = node_term(k + 1);
  }
  return trapezoid(grid, running) + problem.terminal_grad(x).dot(y);
}

ConstantsLedger constants_ledger(const LedgerInputs& in) {
  if (!(in.M > 0.0) || !(in.M_buu > 0.0) || !(in.M_fuu > 0.0) || !(in.sigma_h > 0.0) ||
      !(in.T > 0.0)) {
    throw InvalidArgument("ledger inputs M, M_buu, M_fuu, sigma_h, T must be positive");
  }
  if (!(in.tau >= 0.0) || !(in.x0_norm >= 0.0)) {
    throw InvalidArgument("ledger inputs tau and |x0| must be nonnegative");
  }
  ConstantsLedger c;
  c.inputs = in;
  const double growth = std::exp(in.M * in.T);
  c.M_X = (in.x0_norm + in.M * in.T) * growth;
  c.M_P = in.M * (1.0 + in.T) * growth;
  c.C_x = in.M * in.T * growth;
  c.C_p = growth * in.M * (c.C_x + (c.M_P + 1.0) * (c.C_x + 1.0) * in.T);
  c.C_H = std::max(in.M * (c.M_P + 1.0), c.M_P * in.M_buu + in.M_fuu);
  c.L = in.tau + c.C_H * (c.C_x + c.C_p + 1.0) / in.sigma_h;
  return c;
}

std::optional<ConstantsLedger> ledger_for(const ProblemSpec& problem,
                                          const MirrorMap& mirror, double tau) {
  if (!problem.smoothness) return std::nullopt;
  LedgerInputs in;
  in.M = problem.smoothness->lipschitz_M;
  in.M_buu = problem.smoothness->hess_bound_buu;
  in.M_fuu = problem.smoothness->hess_bound_fuu;
  in.sigma_h = mirror.strong_convexity();
  in.tau = tau;
  in.T = problem.horizon;
  in.x0_norm = problem.initial_state.norm();
  return constants_ledger(in);
}

}  // namespace mdoc
