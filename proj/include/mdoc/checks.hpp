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
#include <optional>
#include <string>
#include <vector>

#include "mdoc/mirror.hpp"
#include "mdoc/problem.hpp"
#include "mdoc/random.hpp"
#include "mdoc/solver.hpp"
#include "mdoc/trajectory.hpp"

namespace mdoc {

/// Outcome of a randomized inequality or agreement suite. `worst` is the
/// smallest slack (or largest error for agreement suites).
struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  int trials = 0;
};

/// Gradient representer t -> G_t with dJ(u)(du) = <G, du>_trap.
using GradientOracle = std::function<Trajectory(const ProblemSpec&, const MirrorMap&,
                                                double, const Trajectory&)>;

/// The default oracle, reference::adjoint_gradient.
GradientOracle default_gradient_oracle();

/// Smooth random control c0 + c1 sin(pi t/T) + c2 cos(2 pi t/T) + c3 t/T
/// (per component) with N(0, scale^2) coefficients.
Trajectory random_smooth_control(RandomStream& rng, const TimeGrid& grid, int width,
                                 double scale = 1.0);

/// Adjoint pairing vs central differences (relative error) and vs the
/// forward-sensitivity derivative (relative error) on `trials` random (u, du).
/// The central difference is taken at the plateau of fd_gradient_sweep.
struct TriangleResult {
  SuiteResult vs_fd;
  SuiteResult vs_sensitivity;
};
TriangleResult gradient_triangle(const ProblemSpec& problem, const MirrorMap& mirror,
                                 double tau, const TimeGrid& grid, int trials,
                                 std::uint64_t seed, double fd_tolerance = 1e-6,
                                 double sensitivity_tolerance = 1e-8,
                                 const GradientOracle& oracle = default_gradient_oracle());

/// slack = L D(v|u) - [J(v) - J(u) - dJ(u)(v - u)] >= -tolerance.
SuiteResult relative_smoothness_suite(const ProblemSpec& problem, const MirrorMap& mirror,
                                      double tau, double L, const TimeGrid& grid,
                                      int trials, std::uint64_t seed,
                                      double tolerance = 1e-8,
                                      const GradientOracle& oracle = default_gradient_oracle());

/// slack = J(v) - J(u) - dJ(u)(v - u) - tau D(v|u) >= -tolerance.
SuiteResult relative_convexity_suite(const ProblemSpec& problem, const MirrorMap& mirror,
                                     double tau, const TimeGrid& grid, int trials,
                                     std::uint64_t seed, double tolerance = 1e-8,
                                     const GradientOracle& oracle = default_gradient_oracle());

/// Pointwise three-point inequality on random (u, xi, w, lambda) over the
/// quadratic and quartic-augmented maps, unconstrained and box sets.
SuiteResult three_point_suite(int trials, std::uint64_t seed, double tolerance = 1e-9);

/// State/adjoint stability ||x^v - x^u|| <= C_x ||v - u|| and
/// ||p^v - p^u|| <= C_p ||v - u|| (trapezoidal L2) on random pairs.
/// `worst` is the smallest of C ||v-u|| - ||x^v - x^u|| over both bounds.
SuiteResult stability_suite(const ProblemSpec& problem, double C_x, double C_p,
                            const TimeGrid& grid, int trials, std::uint64_t seed);

/// Per-iteration checks of a finished run: dissipation against L (or
/// monotone decrease without L), the descent certificate and the
/// admissibility modulus.
struct RunChecks {
  SuiteResult dissipation;
  SuiteResult descent_certificate;
  SuiteResult admissibility;
};
RunChecks run_checks(const SolveReport& report, double lambda, std::optional<double> L,
                     double dissipation_tolerance = 1e-8,
                     double certificate_tolerance = 1e-8,
                     double admissibility_tolerance = 1e-10);

}  // namespace mdoc
