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

#include "mdoc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mdoc/errors.hpp"
#include "mdoc/reference.hpp"

namespace mdoc {

using nlohmann::json;

namespace {

constexpr double kLqA = 1.0;
constexpr double kLqQ = 1.0;
constexpr double kLqS = 1.0;
constexpr double kLqX0 = 0.5;
constexpr double kHorizon = 1.0;
constexpr double kGapTolerance = 1e-6;

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

SuiteResult check(std::string name, double worst, double tolerance, bool lower_bound = true) {
  SuiteResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.tolerance = tolerance;
  r.trials = 1;
  r.passed = std::isfinite(worst) && (lower_bound ? worst >= -tolerance : worst <= tolerance);
  return r;
}

SuiteResult check_flag(std::string name, bool ok) {
  SuiteResult r;
  r.name = std::move(name);
  r.passed = ok;
  r.worst = ok ? 0.0 : 1.0;
  r.trials = 1;
  return r;
}

std::filesystem::path output_path(const ExperimentConfig& config, const std::string& file) {
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  return dir / file;
}

// n, error, log n, log error; rows with n = 0 or error <= 0 get NaN logs.
CsvTable plot_table(const std::vector<double>& errors, const std::vector<double>& bound) {
  CsvTable t;
  t.header = {"n", "error", "log_n", "log_error"};
  if (!bound.empty()) t.header.emplace_back("bound");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n < errors.size(); ++n) {
    std::vector<double> row{static_cast<double>(n), errors[n],
                            n > 0 ? std::log(static_cast<double>(n)) : nan,
                            errors[n] > 0.0 ? std::log(errors[n]) : nan};
    if (!bound.empty()) row.push_back(bound[n]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string write_traces(const ExperimentConfig& config, const std::string& stem,
                         const SolveReport& report, std::optional<double> reference,
                         const std::vector<double>& errors,
                         const std::vector<double>& bound = {}) {
  const auto trace = output_path(config, stem + "_trace.csv");
  write_csv(trace, trace_table(report.records, reference));
  write_csv(output_path(config, stem + "_plot.csv"), plot_table(errors, bound));
  return trace.string();
}

RunSummary summarize(const std::string& label, const SolveReport& report) {
  RunSummary s;
  s.label = label;
  s.final_cost = report.records.back().cost;
  s.final_residual = report.records.back().residual;
  s.iterations = report.records.back().iter;
  s.termination = to_string(report.termination);
  s.fitted_geometric_factor = report.fitted_geometric_factor;
  s.fitted_loglog_slope = report.fitted_loglog_slope;
  return s;
}

// Clamps a window to the recorded range; nullopt if fewer than two points remain.
std::optional<IterWindow> clamp_window(IterWindow w, std::size_t size, std::size_t min_first) {
  if (size == 0) return std::nullopt;
  w.first = std::max(w.first, min_first);
  w.last = std::min(w.last, size - 1);
  if (w.last < w.first + 1) return std::nullopt;
  return w;
}

bool positive_on(const std::vector<double>& e, IterWindow w) {
  for (std::size_t i = w.first; i <= w.last; ++i)
    if (!(e[i] > 0.0) || !std::isfinite(e[i])) return false;
  return true;
}

Trajectory constant_control(const TimeGrid& grid, int width, double value) {
  return Trajectory::constant(grid, Vector::Constant(width, value));
}

void append_run_checks(ExperimentSummary& summary, const std::string& prefix,
                       const SolveReport& report, double lambda) {
  const std::optional<double> L =
      report.ledger_L && lambda >= *report.ledger_L ? report.ledger_L : std::nullopt;
  RunChecks rc = run_checks(report, lambda, L);
  for (SuiteResult* r : {&rc.dissipation, &rc.descent_certificate, &rc.admissibility}) {
    r->name = prefix + ": " + r->name;
    summary.checks.push_back(*r);
  }
}

void append_warnings(ExperimentSummary& summary, const std::string& prefix,
                     const SolveReport& report) {
  for (const auto& w : report.warnings) summary.warnings.push_back(prefix + ": " + w);
}

json window_json(const std::optional<IterWindow>& w) {
  if (!w) return nullptr;
  return json::array({w->first, w->last});
}

json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Lq:
      return "lq";
    case ExperimentKind::Quartic:
      return "quartic";
    case ExperimentKind::Highdim:
      return "highdim";
    case ExperimentKind::Gradcheck:
      return "gradcheck";
    case ExperimentKind::Custom:
      return "custom";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto kind : {ExperimentKind::Lq, ExperimentKind::Quartic, ExperimentKind::Highdim,
                    ExperimentKind::Gradcheck, ExperimentKind::Custom}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown experiment '" + name + "'");
}

ExperimentConfig resolve_config(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  switch (c.experiment) {
    case ExperimentKind::Lq:
      if (!c.tau) c.tau = 1.0;
      if (!c.lambda) c.lambda = 30.0;
      if (!c.max_iters) c.max_iters = 200;
      if (!c.tail_window) c.tail_window = IterWindow{10, 100};
      break;
    case ExperimentKind::Quartic:
      if (!c.tau) c.tau = 0.5;
      if (!c.lambda) c.lambda = 10.0;
      if (!c.max_iters) c.max_iters = 10000;
      if (!c.tail_window) {
        const auto n = static_cast<std::size_t>(*c.max_iters);
        c.tail_window = IterWindow{std::max<std::size_t>(1, n / 10), n};
      }
      break;
    case ExperimentKind::Highdim:
      if (!c.tau) c.tau = 0.5;
      if (!c.lambda) c.lambda = 20.0;
      if (!c.max_iters) c.max_iters = 1000;
      if (c.dims.empty()) c.dims = {5, 10, 20};
      if (!c.tail_window) c.tail_window = IterWindow{20, 200};
      break;
    case ExperimentKind::Gradcheck:
      if (!c.tau) c.tau = 1.0;
      if (!c.lambda) c.lambda = 30.0;
      if (!c.max_iters) c.max_iters = 50;
      if (!c.nt) c.nt = 2000;
      break;
    case ExperimentKind::Custom:
      if (!c.tau) c.tau = 0.0;
      if (!c.lambda) c.lambda = 10.0;
      if (!c.max_iters) c.max_iters = 100;
      if (!c.tail_window) c.tail_window = IterWindow{10, 100};
      break;
  }
  if (!c.nt) c.nt = 500;

  if (!(*c.tau >= 0.0) || !std::isfinite(*c.tau)) throw InvalidArgument("tau must be >= 0");
  if (!(*c.lambda > 0.0) || !std::isfinite(*c.lambda)) {
    throw InvalidArgument("lambda must be positive");
  }
  if (*c.nt < 1) throw InvalidArgument("nt must be positive");
  if (*c.max_iters < 1) throw InvalidArgument("max_iters must be positive");
  if (c.tail_window && c.tail_window->last < c.tail_window->first + 1) {
    throw InvalidArgument("tail_window must be [first, last] with last > first");
  }
  if (c.experiment == ExperimentKind::Lq && !(*c.tau > 0.0)) {
    throw InvalidArgument("the LQ experiment needs tau > 0");
  }
  if (c.experiment == ExperimentKind::Highdim) {
    for (int d : c.dims)
      if (d < 1) throw InvalidArgument("dims must be positive");
  }
  if (c.output_dir.empty()) throw InvalidArgument("output_dir must not be empty");
  if (c.experiment == ExperimentKind::Custom) {
    if (c.problem != "lq" && c.problem != "quartic" && c.problem != "highdim") {
      throw InvalidArgument("custom problem must be lq, quartic or highdim");
    }
    if (c.mirror != "quadratic" && c.mirror != "quartic") {
      throw InvalidArgument("custom mirror must be quadratic or quartic");
    }
    if (c.mirror == "quartic" && !(c.epsilon > 0.0)) {
      throw InvalidArgument("epsilon must be positive");
    }
    if (c.box && !(c.box->first <= c.box->second)) {
      throw InvalidArgument("box must satisfy lower <= upper");
    }
    if (c.problem == "highdim" && c.dims.empty()) c.dims = {5};
  }
  return c;
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    if (key == "experiment") {
      c.experiment = parse_experiment_kind(get_as<std::string>(value, key));
    } else if (key == "tau") {
      c.tau = get_as<double>(value, key);
    } else if (key == "lambda") {
      c.lambda = get_as<double>(value, key);
    } else if (key == "nt") {
      c.nt = get_as<int>(value, key);
    } else if (key == "max_iters") {
      c.max_iters = get_as<int>(value, key);
    } else if (key == "dims") {
      c.dims = get_as<std::vector<int>>(value, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(value, key);
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(value, key);
    } else if (key == "tail_window") {
      const auto w = get_as<std::vector<std::size_t>>(value, key);
      if (w.size() != 2) throw InvalidArgument("tail_window must have two entries");
      c.tail_window = IterWindow{w[0], w[1]};
    } else if (key == "problem") {
      c.problem = get_as<std::string>(value, key);
    } else if (key == "mirror") {
      c.mirror = get_as<std::string>(value, key);
    } else if (key == "epsilon") {
      c.epsilon = get_as<double>(value, key);
    } else if (key == "box") {
      const auto b = get_as<std::vector<double>>(value, key);
      if (b.size() != 2) throw InvalidArgument("box must have two entries");
      c.box = std::make_pair(b[0], b[1]);
    } else if (key == "u0") {
      c.u0 = get_as<double>(value, key);
    } else {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
  return c;
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["nt"] = c.nt ? json(*c.nt) : json(nullptr);
  j["max_iters"] = c.max_iters ? json(*c.max_iters) : json(nullptr);
  j["dims"] = c.dims;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["tail_window"] = window_json(c.tail_window);
  if (c.experiment == ExperimentKind::Custom) {
    j["problem"] = c.problem;
    j["mirror"] = c.mirror;
    j["epsilon"] = c.epsilon;
    j["box"] = c.box ? json::array({c.box->first, c.box->second}) : json(nullptr);
    j["u0"] = c.u0;
  }
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2);
}

bool ExperimentSummary::passed() const {
  if (checks.empty()) return false;
  for (const auto& r : runs)
    if (!r.error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const SuiteResult& r) { return r.passed; });
}

std::string summary_to_json(const ExperimentSummary& summary) {
  json j;
  j["experiment"] = to_string(summary.config.experiment);
  j["config"] = config_json(summary.config);
  j["passed"] = summary.passed();
  j["runs"] = json::array();
  for (const auto& r : summary.runs) {
    json run;
    run["label"] = r.label;
    run["final_cost"] = number_json(r.final_cost);
    run["final_residual"] = number_json(r.final_residual);
    run["iterations"] = r.iterations;
    run["termination"] = r.termination;
    run["fitted_geometric_factor"] = optional_json(r.fitted_geometric_factor);
    run["fitted_loglog_slope"] = optional_json(r.fitted_loglog_slope);
    run["r_squared"] = optional_json(r.r_squared);
    run["iterations_to_tolerance"] =
        r.iterations_to_tolerance ? json(*r.iterations_to_tolerance) : json(nullptr);
    run["wall_seconds"] = r.wall_seconds;
    run["trace_file"] = r.trace_file;
    if (!r.error.empty()) run["error"] = r.error;
    j["runs"].push_back(std::move(run));
  }
  j["checks"] = json::array();
  for (const auto& c : summary.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"worst", number_json(c.worst)},
                           {"tolerance", c.tolerance},
                           {"trials", c.trials}});
  }
  j["warnings"] = summary.warnings;
  return j.dump(2);
}

ExperimentSummary run_lq(const ExperimentConfig& config) {
  ExperimentSummary summary;
  summary.config = resolve_config(config);
  const ExperimentConfig& c = summary.config;
  if (c.experiment != ExperimentKind::Lq) throw InvalidArgument("not an LQ config");
  const double tau = *c.tau;
  const double lambda = *c.lambda;

  Stopwatch clock;
  const ProblemSpec problem = make_lq(kLqA, kLqQ, kLqS, kLqX0, kHorizon);
  const MirrorMap mirror = MirrorMap::quadratic();
  const TimeGrid grid(kHorizon, *c.nt);
  const LqReference ref = lq_reference(make_riccati(kLqA, kLqQ, kLqS, tau, kHorizon), kLqX0, grid);

  SolverConfig sc;
  sc.lambda = lambda;
  sc.tau = tau;
  sc.max_iters = *c.max_iters;
  sc.grid = grid;
  const Trajectory u0 = constant_control(grid, 1, 4.0);
  SolveReport report = run(problem, mirror, sc, u0);

  const double d0 = bregman_integrated(mirror, ref.u_star, u0);
  std::vector<double> errors, bound;
  double worst_bound = std::numeric_limits<double>::infinity();
  for (const auto& r : report.records) {
    errors.push_back(std::abs(r.cost - ref.J_star));
    const double b = lambda * std::pow(1.0 - tau / lambda, r.iter - 1) * d0;
    bound.push_back(b);
    if (r.iter >= 1) worst_bound = std::min(worst_bound, b + 1e-7 - (r.cost - ref.J_star));
  }
  if (auto w = clamp_window(*c.tail_window, errors.size(), 0); w && positive_on(errors, *w)) {
    report.fitted_geometric_factor = fit_geometric_factor(errors, *w);
  }

  RunSummary run_summary = summarize("tau=" + format_double(tau), report);
  run_summary.trace_file = write_traces(c, "lq", report, ref.J_star, errors, bound);
  run_summary.wall_seconds = clock.seconds();
  summary.runs.push_back(run_summary);

  if (report.records.size() > 1) {
    summary.checks.push_back(check("lq: geometric rate bound", worst_bound, 0.0));
  }
  append_run_checks(summary, "lq", report, lambda);
  append_warnings(summary, "lq", report);
  return summary;
}

ExperimentSummary run_quartic(const ExperimentConfig& config) {
  ExperimentSummary summary;
  summary.config = resolve_config(config);
  const ExperimentConfig& c = summary.config;
  if (c.experiment != ExperimentKind::Quartic) throw InvalidArgument("not a quartic config");
  const double lambda = *c.lambda;
  constexpr double alpha0 = 2.0;
  constexpr int agreement_iters = 100;

  const ProblemSpec problem = make_quartic(kHorizon);
  const MirrorMap mirror = MirrorMap::quadratic();
  const TimeGrid grid(kHorizon, *c.nt);
  const Trajectory u0 = constant_control(grid, 1, alpha0);
  const Trajectory zero = constant_control(grid, 1, 0.0);

  std::vector<double> taus{0.0};
  if (*c.tau > 0.0) taus.push_back(*c.tau);

  for (double tau : taus) {
    Stopwatch clock;
    const std::string label = "tau=" + format_double(tau);
    const std::vector<double> alpha =
        quartic_recursion(alpha0, kHorizon, lambda, tau, agreement_iters);
    double agreement = 0.0;
    auto observer = [&](int n, const Trajectory& u, const Trajectory&, const Trajectory&) {
      if (n <= agreement_iters) {
        agreement = std::max(agreement, (u.values().array() - alpha[n]).abs().maxCoeff());
      }
    };
    SolverConfig sc;
    sc.lambda = lambda;
    sc.tau = tau;
    sc.max_iters = *c.max_iters;
    sc.grid = grid;
    SolveReport report = run(problem, mirror, sc, u0, observer);

    // u* = 0 with J* = 0 for every tau >= 0.
    const double d0 = bregman_integrated(mirror, zero, u0);
    const double factor = 1.0 - tau / lambda;
    std::vector<double> errors, bound;
    double worst_bound = std::numeric_limits<double>::infinity();
    for (const auto& r : report.records) {
      errors.push_back(r.cost);
      const double b = tau > 0.0 ? lambda * std::pow(factor, r.iter - 1) * d0
                                 : (r.iter > 0 ? lambda * d0 / r.iter
                                               : std::numeric_limits<double>::infinity());
      bound.push_back(b);
      if (r.iter >= 1) worst_bound = std::min(worst_bound, b - r.cost);
    }

    if (tau > 0.0) {
      const IterWindow asymptotic{50, 150};
      if (auto w = clamp_window(asymptotic, errors.size(), 0); w && positive_on(errors, *w)) {
        report.fitted_geometric_factor = fit_geometric_factor(errors, *w);
      }
    } else if (auto w = clamp_window(*c.tail_window, errors.size(), 1);
               w && positive_on(errors, *w)) {
      report.fitted_loglog_slope = fit_loglog_slope(errors, *w);
    }

    RunSummary run_summary = summarize(label, report);
    run_summary.trace_file =
        write_traces(c, "quartic_tau" + format_double(tau), report, 0.0, errors, bound);
    run_summary.wall_seconds = clock.seconds();
    summary.runs.push_back(run_summary);

    const std::string prefix = "quartic " + label;
    summary.checks.push_back(check(prefix + (tau > 0.0 ? ": geometric bound" : ": 1/n bound"),
                                   worst_bound, 0.0));
    summary.checks.push_back(check(prefix + ": recursion agreement", agreement, 1e-10, false));
    if (tau > 0.0) {
      const double target = factor * factor;
      summary.checks.push_back(check(
          prefix + ": asymptotic factor",
          report.fitted_geometric_factor ? std::abs(*report.fitted_geometric_factor - target)
                                         : std::numeric_limits<double>::quiet_NaN(),
          0.01, false));
    } else {
      const double slope =
          report.fitted_loglog_slope.value_or(std::numeric_limits<double>::quiet_NaN());
      summary.checks.push_back(check(prefix + ": log-log tail slope", std::abs(slope + 2.0),
                                     0.2, false));
    }
    append_run_checks(summary, prefix, report, lambda);
    append_warnings(summary, prefix, report);
  }
  return summary;
}

namespace {

struct HighdimOutcome {
  RunSummary run;
  std::optional<SuiteResult> fit_check;
};

HighdimOutcome run_highdim_single(const ExperimentConfig& c, int d) {
  Stopwatch clock;
  HighdimOutcome out;
  out.run.label = "d=" + std::to_string(d);
  try {
    const ProblemSpec problem = make_highdim(d, c.seed, HighDimParams{});
    const MirrorMap mirror = MirrorMap::quadratic();
    const TimeGrid grid(kHorizon, *c.nt);
    const Vector v = Vector::LinSpaced(d, -1.0, 1.0);
    const Trajectory u0 = Trajectory::sample(grid, d, [&](double t) -> Vector {
      return 2.0 * std::sin(2.0 * std::numbers::pi * t) * Vector::Ones(d) +
             0.5 * std::cos(4.0 * std::numbers::pi * t) * v;
    });
    SolverConfig sc;
    sc.lambda = *c.lambda;
    sc.tau = *c.tau;
    sc.max_iters = *c.max_iters;
    sc.grid = grid;
    sc.stop_residual = 0.0;
    SolveReport report = run(problem, mirror, sc, u0);
    if (report.termination == Termination::Blowup) {
      out.run = summarize(out.run.label, report);
      out.run.error = report.blowup_message;
      return out;
    }

    const double final_cost = report.records.back().cost;
    std::vector<double> gap;
    for (const auto& r : report.records) gap.push_back(std::abs(r.cost - final_cost));

    std::optional<LineFit> fit;
    if (auto w = clamp_window(*c.tail_window, gap.size(), 0); w && positive_on(gap, *w)) {
      fit = fit_semilog(gap, *w);
      report.fitted_geometric_factor = std::exp(fit->slope);
    }
    out.run = summarize(out.run.label, report);
    if (fit) out.run.r_squared = fit->r_squared;
    for (std::size_t n = 0; n + 1 < gap.size(); ++n) {
      if (gap[n] <= kGapTolerance) {
        out.run.iterations_to_tolerance = static_cast<int>(n);
        break;
      }
    }
    out.run.trace_file = write_traces(c, "highdim_d" + std::to_string(d), report,
                                      final_cost, gap);
    out.fit_check = check("highdim " + out.run.label + ": semilog fit R^2",
                          fit ? fit->r_squared - 0.98 : std::numeric_limits<double>::quiet_NaN(),
                          0.0);
  } catch (const Error& e) {
    out.run.error = e.what();
  }
  out.run.wall_seconds = clock.seconds();
  return out;
}

}  // namespace

ExperimentSummary run_highdim(const ExperimentConfig& config) {
  ExperimentSummary summary;
  summary.config = resolve_config(config);
  const ExperimentConfig& c = summary.config;
  if (c.experiment != ExperimentKind::Highdim) throw InvalidArgument("not a highdim config");

  std::vector<std::future<HighdimOutcome>> jobs;
  for (int d : c.dims) {
    jobs.push_back(std::async(std::launch::async, run_highdim_single, std::cref(c), d));
  }
  std::vector<std::pair<int, int>> reach;  // (d, iterations to tolerance)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    HighdimOutcome out = jobs[i].get();
    if (!out.run.error.empty()) {
      summary.checks.push_back(check_flag("highdim " + out.run.label + ": run", false));
    }
    if (out.fit_check) summary.checks.push_back(*out.fit_check);
    if (out.run.iterations_to_tolerance) {
      reach.emplace_back(c.dims[i], *out.run.iterations_to_tolerance);
    }
    summary.runs.push_back(std::move(out.run));
  }
  std::sort(reach.begin(), reach.end());
  bool ordered = true;
  for (std::size_t i = 1; i < reach.size(); ++i) {
    if (reach[i].first > reach[i - 1].first && reach[i].second < reach[i - 1].second) {
      ordered = false;
    }
  }
  if (!ordered) {
    summary.warnings.push_back(
        "iterations to reach the gap tolerance are not nondecreasing in d");
  }
  return summary;
}

ExperimentSummary run_gradcheck(const ExperimentConfig& config) {
  ExperimentSummary summary;
  summary.config = resolve_config(config);
  const ExperimentConfig& c = summary.config;
  if (c.experiment != ExperimentKind::Gradcheck) throw InvalidArgument("not a gradcheck config");
  const double tau = *c.tau;
  Stopwatch clock;

  const ProblemSpec lq = make_lq(kLqA, kLqQ, kLqS, kLqX0, kHorizon);
  const ProblemSpec quartic = make_quartic(kHorizon);
  const MirrorMap mirror = MirrorMap::quadratic();
  const TimeGrid fine(kHorizon, *c.nt);
  const TimeGrid coarse(kHorizon, 500);
  const std::uint64_t seed = c.seed;

  const TriangleResult lq_tri = gradient_triangle(lq, mirror, tau, fine, 20, seed);
  const TriangleResult quartic_tri = gradient_triangle(quartic, mirror, 0.0, fine, 20, seed + 1);
  summary.checks.insert(summary.checks.end(),
                        {lq_tri.vs_fd, lq_tri.vs_sensitivity, quartic_tri.vs_fd,
                         quartic_tri.vs_sensitivity});

  const ConstantsLedger ledger = *ledger_for(lq, mirror, tau);
  summary.checks.push_back(
      relative_smoothness_suite(lq, mirror, tau, ledger.L, coarse, 100, seed + 2));
  summary.checks.push_back(relative_convexity_suite(lq, mirror, tau, coarse, 100, seed + 3));
  summary.checks.push_back(
      relative_convexity_suite(quartic, mirror, 0.0, coarse, 100, seed + 4));
  summary.checks.push_back(three_point_suite(1000, seed + 5));
  summary.checks.push_back(
      stability_suite(lq, ledger.C_x, ledger.C_p, coarse, 20, seed + 6));

  SolverConfig sc;
  sc.lambda = ledger.L;
  sc.tau = tau;
  sc.max_iters = *c.max_iters;
  sc.grid = coarse;
  const SolveReport report = run(lq, mirror, sc, constant_control(coarse, 1, 4.0));
  append_run_checks(summary, "lq lambda=L", report, ledger.L);
  RunSummary run_summary = summarize("lq lambda=L", report);
  run_summary.trace_file = output_path(c, "gradcheck_dissipation_trace.csv").string();
  write_csv(run_summary.trace_file, trace_table(report.records, std::nullopt));
  run_summary.wall_seconds = clock.seconds();
  summary.runs.push_back(run_summary);
  return summary;
}

ExperimentSummary run_custom(const ExperimentConfig& config) {
  ExperimentSummary summary;
  summary.config = resolve_config(config);
  const ExperimentConfig& c = summary.config;
  if (c.experiment != ExperimentKind::Custom) throw InvalidArgument("not a custom config");
  Stopwatch clock;

  ProblemSpec problem = c.problem == "lq"        ? make_lq(kLqA, kLqQ, kLqS, kLqX0, kHorizon)
                        : c.problem == "quartic" ? make_quartic(kHorizon)
                                                 : make_highdim(c.dims.front(), c.seed, {});
  const int m = problem.control_dim;
  if (c.box) {
    problem.control_set = ControlSet::box(Vector::Constant(m, c.box->first),
                                          Vector::Constant(m, c.box->second));
  }
  const MirrorMap mirror =
      c.mirror == "quadratic" ? MirrorMap::quadratic() : MirrorMap::quartic_augmented(c.epsilon);
  const TimeGrid grid(kHorizon, *c.nt);
  const Trajectory u0 = Trajectory::constant(
      grid, problem.control_set.project(Vector::Constant(m, c.u0)));

  SolverConfig sc;
  sc.lambda = *c.lambda;
  sc.tau = *c.tau;
  sc.max_iters = *c.max_iters;
  sc.grid = grid;
  SolveReport report = run(problem, mirror, sc, u0);
  RunSummary run_summary = summarize(c.problem + "/" + c.mirror, report);
  if (report.termination == Termination::Blowup) {
    run_summary.error = report.blowup_message;
  } else {
    const double final_cost = report.records.back().cost;
    std::vector<double> gap;
    for (const auto& r : report.records) gap.push_back(std::abs(r.cost - final_cost));
    run_summary.trace_file = write_traces(c, "custom", report, std::nullopt, gap);
    append_run_checks(summary, c.problem, report, *c.lambda);
  }
  run_summary.wall_seconds = clock.seconds();
  summary.runs.push_back(run_summary);
  append_warnings(summary, c.problem, report);
  return summary;
}

namespace {

ExperimentSummary dispatch(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::Lq:
      return run_lq(config);
    case ExperimentKind::Quartic:
      return run_quartic(config);
    case ExperimentKind::Highdim:
      return run_highdim(config);
    case ExperimentKind::Gradcheck:
      return run_gradcheck(config);
    case ExperimentKind::Custom:
      return run_custom(config);
  }
  throw InvalidArgument("unknown experiment");
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  ExperimentSummary summary = dispatch(config);
  const auto path = output_path(summary.config, to_string(summary.config.experiment) + "_summary.json");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << summary_to_json(summary) << "\n";
  return summary;
}

}  // namespace mdoc
