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

#include "mdoc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdoc/errors.hpp"
#include "mdoc/reference.hpp"

namespace mdoc {

namespace {

double cost_of(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
               const Trajectory& u) {
  return evaluate_cost(problem, mirror, tau, u, integrate_state(problem, u));
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Bregman linearization gap J(v) - J(u) - <G(u), v - u>_trap.
double linearization_gap(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                         const Trajectory& u, const Trajectory& v,
                         const GradientOracle& oracle) {
  const Trajectory g = oracle(problem, mirror, tau, u);
  return cost_of(problem, mirror, tau, v) - cost_of(problem, mirror, tau, u) -
         trapezoid_inner(g, v - u);
}

Trajectory project_onto(const ControlSet& set, const Trajectory& u) {
  if (set.is_unconstrained()) return u;
  Matrix values = u.values();
  for (Eigen::Index k = 0; k < u.size(); ++k) values.col(k) = set.project(u.at(k));
  return Trajectory(u.grid(), std::move(values));
}

SuiteResult finish(std::string name, double worst, double tolerance, int trials,
                   bool lower_bound) {
  SuiteResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.tolerance = tolerance;
  r.trials = trials;
  r.passed = std::isfinite(worst) && (lower_bound ? worst >= -tolerance : worst <= tolerance);
  return r;
}

}  // namespace

GradientOracle default_gradient_oracle() {
  return [](const ProblemSpec& problem, const MirrorMap& mirror, double tau,
            const Trajectory& u) { return adjoint_gradient(problem, mirror, tau, u); };
}

Trajectory random_smooth_control(RandomStream& rng, const TimeGrid& grid, int width,
                                 double scale) {
  Matrix c(width, 4);
  for (int i = 0; i < width; ++i)
    for (int j = 0; j < 4; ++j) c(i, j) = scale * rng.normal();
  const double T = grid.horizon();
  return Trajectory::sample(grid, width, [&](double t) -> Vector {
    const double s = t / T;
    return c.col(0) + c.col(1) * std::sin(std::numbers::pi * s) +
           c.col(2) * std::cos(2.0 * std::numbers::pi * s) + c.col(3) * s;
  });
}

TriangleResult gradient_triangle(const ProblemSpec& problem, const MirrorMap& mirror,
                                 double tau, const TimeGrid& grid, int trials,
                                 std::uint64_t seed, double fd_tolerance,
                                 double sensitivity_tolerance,
                                 const GradientOracle& oracle) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  RandomStream rng(seed);
  double worst_fd = 0.0;
  double worst_sens = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Trajectory u = random_smooth_control(rng, grid, problem.control_dim);
    const Trajectory du = random_smooth_control(rng, grid, problem.control_dim);
    const double pairing = trapezoid_inner(oracle(problem, mirror, tau, u), du);
    const FdSweep sweep = fd_gradient_sweep(problem, mirror, tau, u, du);
    const double fd = sweep.values[sweep.plateau];
    const double sens = sensitivity_gradient(problem, mirror, tau, u, du);
    worst_fd = std::max(worst_fd, relative_error(pairing, fd));
    worst_sens = std::max(worst_sens, relative_error(pairing, sens));
  }
  return TriangleResult{
      finish(problem.name + ": adjoint vs central difference", worst_fd, fd_tolerance,
             trials, false),
      finish(problem.name + ": adjoint vs forward sensitivity", worst_sens,
             sensitivity_tolerance, trials, false)};
}

SuiteResult relative_smoothness_suite(const ProblemSpec& problem, const MirrorMap& mirror,
                                      double tau, double L, const TimeGrid& grid,
                                      int trials, std::uint64_t seed, double tolerance,
                                      const GradientOracle& oracle) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  RandomStream rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Trajectory u =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const Trajectory v =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const double gap = linearization_gap(problem, mirror, tau, u, v, oracle);
    worst = std::min(worst, L * bregman_integrated(mirror, v, u) - gap);
  }
  return finish(problem.name + ": relative smoothness", worst, tolerance, trials, true);
}

SuiteResult relative_convexity_suite(const ProblemSpec& problem, const MirrorMap& mirror,
                                     double tau, const TimeGrid& grid, int trials,
                                     std::uint64_t seed, double tolerance,
                                     const GradientOracle& oracle) {
  if (!problem.convex) {
    throw InvalidArgument("relative convexity applies only to problems flagged convex");
  }
  if (trials < 1) throw InvalidArgument("trials must be positive");
  RandomStream rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Trajectory u =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const Trajectory v =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const double gap = linearization_gap(problem, mirror, tau, u, v, oracle);
    worst = std::min(worst, gap - tau * bregman_integrated(mirror, v, u));
  }
  return finish(problem.name + ": relative convexity", worst, tolerance, trials, true);
}

SuiteResult three_point_suite(int trials, std::uint64_t seed, double tolerance) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  RandomStream rng(seed);
  const MirrorMap maps[] = {MirrorMap::quadratic(), MirrorMap::quartic_augmented(1.0)};
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const MirrorMap& map = maps[i % 2];
    const bool boxed = (i / 2) % 2 == 1;
    const int m = 1 + (i / 4) % 3;
    const ControlSet set = boxed ? ControlSet::box(Vector::Constant(m, -1.0),
                                                   Vector::Constant(m, 1.0))
                                 : ControlSet::unconstrained();
    Vector u(m), w(m), xi(m);
    for (int j = 0; j < m; ++j) {
      u[j] = boxed ? rng.uniform(-1.0, 1.0) : 2.0 * rng.normal();
      w[j] = boxed ? rng.uniform(-1.0, 1.0) : 2.0 * rng.normal();
      xi[j] = 5.0 * rng.normal();
    }
    const double lambda = rng.uniform(0.5, 20.0);
    const Vector ubar = mirror_step_pointwise(map, set, u, xi, lambda);
    worst = std::min(worst, three_point_check(map, set, u, ubar, w, xi, lambda));
  }
  return finish("three-point inequality", worst, tolerance, trials, true);
}

SuiteResult stability_suite(const ProblemSpec& problem, double C_x, double C_p,
                            const TimeGrid& grid, int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  RandomStream rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Trajectory u =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const Trajectory v =
        project_onto(problem.control_set, random_smooth_control(rng, grid, problem.control_dim));
    const Trajectory xu = integrate_state(problem, u);
    const Trajectory xv = integrate_state(problem, v);
    const Trajectory pu = integrate_adjoint(problem, u, xu);
    const Trajectory pv = integrate_adjoint(problem, v, xv);
    const double dist = (v - u).l2_norm();
    worst = std::min(worst, C_x * dist - (xv - xu).l2_norm());
    worst = std::min(worst, C_p * dist - (pv - pu).l2_norm());
  }
  return finish(problem.name + ": state/adjoint stability", worst, 0.0, trials, true);
}

RunChecks run_checks(const SolveReport& report, double lambda, std::optional<double> L,
                     double dissipation_tolerance, double certificate_tolerance,
                     double admissibility_tolerance) {
  double certificate = std::numeric_limits<double>::infinity();
  double admissibility = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const auto& r : report.records) {
    if (!std::isfinite(r.cost)) continue;
    certificate = std::min(certificate, r.descent_certificate);
    admissibility = std::min(admissibility, r.admissibility_slack);
    ++count;
  }
  const double dissipation = check_dissipation(report.records, lambda, L);
  return RunChecks{
      finish("energy dissipation", dissipation, dissipation_tolerance, count, true),
      finish("descent certificate", certificate, certificate_tolerance, count, true),
      finish("admissibility modulus", admissibility, admissibility_tolerance, count, true)};
}

}  // namespace mdoc
