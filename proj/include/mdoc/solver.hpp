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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdoc/csv.hpp"
#include "mdoc/mirror.hpp"
#include "mdoc/problem.hpp"
#include "mdoc/trajectory.hpp"

namespace mdoc {

struct SolverConfig {
  double lambda = 1.0;
  double tau = 0.0;
  int max_iters = 100;
  TimeGrid grid{1.0, 500};
  /// Stop once the stationarity residual is <= this value.
  double stop_residual = 1e-10;
  /// Stop once |J(u^n) - J(u^{n-1})| <= this value (0 disables).
  double stop_cost_delta = 0.0;
  /// Keep every control iterate in the report.
  bool record_trajectories = false;
  ProxOptions prox;
};

/// Diagnostics of iterate n. The step quantities refer to u^{n+1} computed
/// from u^n, including on the final record where the step is not applied.
struct IterateRecord {
  int iter = 0;
  double cost = 0.0;                // J^tau(u^n)
  double bregman_step = 0.0;        // D_h(u^{n+1} | u^n), integrated
  double residual = 0.0;            // max_t |u_t^{n+1} - u_t^n|
  double sup_control_change = 0.0;  // max_t max_i |u_{t,i}^{n+1} - u_{t,i}^n|
  /// int xi.(u^{n+1} - u^n) dt - lambda D_h(u^{n+1}|u^n); >= 0 up to round-off.
  double descent_certificate = 0.0;
  /// admissibility_modulus_check of the step.
  double admissibility_slack = 0.0;
};

enum class Termination { MaxIters, ResidualMet, CostDeltaMet, Blowup };

std::string to_string(Termination termination);

struct SolveReport {
  std::vector<IterateRecord> records;
  Trajectory final_control;
  Trajectory final_state;
  Trajectory final_adjoint;
  Termination termination = Termination::MaxIters;
  std::optional<double> fitted_geometric_factor;
  std::optional<double> fitted_loglog_slope;
  /// Relative-smoothness constant from the ledger, when the problem carries
  /// SmoothnessData.
  std::optional<double> ledger_L;
  std::vector<std::string> warnings;
  /// u^0, u^1, ... when SolverConfig::record_trajectories is set.
  std::vector<Trajectory> controls;
  std::string blowup_message;
};

/// Called after each iterate with (n, u^n, x^n, p^n).
using IterateObserver =
    std::function<void(int, const Trajectory&, const Trajectory&, const Trajectory&)>;

/// Mirror-descent method of successive approximations: forward state solve,
/// backward adjoint solve, pointwise mirror step at every grid node.
///
/// Throws InvalidArgument if u0 is not on config.grid or leaves U, and
/// propagates ProxFailure. Non-finite trajectories end the run with
/// Termination::Blowup.
SolveReport run(const ProblemSpec& problem, const MirrorMap& mirror,
                const SolverConfig& config, const Trajectory& u0,
                const IterateObserver& observer = {});

/// Per-node quantities of one mirror step.
struct MirrorStep {
  Trajectory next;  // u^{n+1}
  Trajectory xi;    // grad_u H^tau at (x^n, p^n, u^n)
  Trajectory eta;   // xi + lambda grad h(u^n)
};

MirrorStep mirror_step(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                       double lambda, const Trajectory& u, const Trajectory& x,
                       const Trajectory& p, const ProxOptions& prox = {});

/// max_t |mirror_step(u_t) - u_t|; zero exactly at discrete maximum-condition
/// points.
double stationarity_residual(const ProblemSpec& problem, const MirrorMap& mirror,
                             double tau, double lambda, const Trajectory& u,
                             const Trajectory& x, const Trajectory& p);

/// min_n [J(u^n) - J(u^{n+1}) - (lambda - L) D_h(u^{n+1}|u^n)]. Without L
/// only monotone decrease is checked. Returns 0 for fewer than two records.
double check_dissipation(std::span<const IterateRecord> records, double lambda,
                         std::optional<double> L);

/// Inclusive index range [first, last] into an error sequence whose index is
/// the iteration number.
struct IterWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Least squares of log(error) against n over the window.
LineFit fit_semilog(std::span<const double> errors, IterWindow window);
/// exp of the semilog slope: the per-iteration contraction factor.
double fit_geometric_factor(std::span<const double> errors, IterWindow window);
/// Least-squares slope of log(error) against log(n); window.first >= 1.
double fit_loglog_slope(std::span<const double> errors, IterWindow window);

/// min over adjacent nodes of (1/(lambda sigma_h))|eta_t - eta_s| - |u_t - u_s|.
double admissibility_modulus_check(const Trajectory& u_next, const Trajectory& eta,
                                   double lambda, double sigma_h);

/// Trace table `iter,cost[,cost_error],bregman_step,residual,sup_control_change`.
/// cost_error = |J(u^n) - reference| is included when a reference is given.
CsvTable trace_table(std::span<const IterateRecord> records,
                     std::optional<double> reference_cost);

}  // namespace mdoc
