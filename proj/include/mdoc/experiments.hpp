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
#include <optional>
#include <string>
#include <vector>

#include "mdoc/checks.hpp"
#include "mdoc/solver.hpp"

namespace mdoc {

enum class ExperimentKind { Lq, Quartic, Highdim, Gradcheck, Custom };

std::string to_string(ExperimentKind kind);
/// Throws InvalidArgument for an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);

/// Experiment parameters. Unset optionals take per-experiment defaults in
/// resolve_config; the JSON keys match the field names.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Lq;
  std::optional<double> tau;
  std::optional<double> lambda;
  std::optional<int> nt;
  std::optional<int> max_iters;
  std::vector<int> dims;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  std::optional<IterWindow> tail_window;

  // Used by the custom experiment only.
  std::string problem = "lq";
  std::string mirror = "quadratic";
  double epsilon = 1.0;
  std::optional<std::pair<double, double>> box;
  double u0 = 1.0;
};

/// Fills every unset field with the experiment's default and validates the
/// result. Throws InvalidArgument on an invalid configuration.
ExperimentConfig resolve_config(const ExperimentConfig& config);

/// Parses a JSON object; unknown keys and ill-typed values throw
/// InvalidArgument.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct RunSummary {
  std::string label;
  double final_cost = 0.0;
  double final_residual = 0.0;
  int iterations = 0;
  std::string termination;
  std::optional<double> fitted_geometric_factor;
  std::optional<double> fitted_loglog_slope;
  std::optional<double> r_squared;
  /// First n with error <= 1e-6 (high-dim surrogate gap).
  std::optional<int> iterations_to_tolerance;
  double wall_seconds = 0.0;
  std::string trace_file;
  std::string error;
};

struct ExperimentSummary {
  ExperimentConfig config;  // resolved
  std::vector<RunSummary> runs;
  std::vector<SuiteResult> checks;
  std::vector<std::string> warnings;

  bool passed() const;
};

/// Summary as JSON: the resolved config, per-run results and checks.
std::string summary_to_json(const ExperimentSummary& summary);

/// LQ benchmark against the Riccati optimum with the geometric-rate bound
/// checked at every iteration.
ExperimentSummary run_lq(const ExperimentConfig& config);

/// Quartic terminal-cost benchmark for tau = 0 and the configured tau > 0,
/// compared node-for-node with the scalar recursion.
ExperimentSummary run_quartic(const ExperimentConfig& config);

/// High-dimensional sine system for each requested d; per-d runs execute
/// concurrently and a failure in one does not stop the others.
ExperimentSummary run_highdim(const ExperimentConfig& config);

/// Gradient triangle plus the inequality suites.
ExperimentSummary run_gradcheck(const ExperimentConfig& config);

/// Solver run on a named built-in problem with a chosen mirror map and set.
ExperimentSummary run_custom(const ExperimentConfig& config);

/// Runs the configured experiment and also writes
/// <output_dir>/<experiment>_summary.json.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace mdoc
