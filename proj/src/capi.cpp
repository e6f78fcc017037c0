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

#include "mdoc/mdoc.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "mdoc/errors.hpp"
#include "mdoc/experiments.hpp"
#include "mdoc/reference.hpp"
#include "mdoc/solver.hpp"

struct mdoc_problem {
  mdoc::ProblemSpec spec;
};

struct mdoc_mirror {
  mdoc::MirrorMap map;
};

struct mdoc_report {
  mdoc::SolveReport report;
  std::string termination;
};

namespace {

thread_local std::string last_error;

mdoc_status fail(mdoc_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs fn, translating library exceptions into status codes.
template <typename Fn>
mdoc_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return MDOC_OK;
  } catch (const mdoc::InvalidArgument& e) {
    return fail(MDOC_INVALID_ARGUMENT, e.what());
  } catch (const mdoc::OutOfRange& e) {
    return fail(MDOC_OUT_OF_RANGE, e.what());
  } catch (const mdoc::NumericalBlowup& e) {
    return fail(MDOC_BLOWUP, e.what());
  } catch (const mdoc::ProxFailure& e) {
    return fail(MDOC_PROX_FAILURE, e.what());
  } catch (const mdoc::IoError& e) {
    return fail(MDOC_IO, e.what());
  } catch (const std::exception& e) {
    return fail(MDOC_INTERNAL, e.what());
  } catch (...) {
    return fail(MDOC_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw mdoc::InvalidArgument(message);
}

}  // namespace

extern "C" {

const char* mdoc_version(void) { return "1.0.0"; }

const char* mdoc_last_error(void) { return last_error.c_str(); }

const char* mdoc_status_string(mdoc_status status) {
  switch (status) {
    case MDOC_OK:
      return "ok";
    case MDOC_INVALID_ARGUMENT:
      return "invalid argument";
    case MDOC_OUT_OF_RANGE:
      return "out of range";
    case MDOC_BLOWUP:
      return "numerical blowup";
    case MDOC_PROX_FAILURE:
      return "prox failure";
    case MDOC_IO:
      return "i/o error";
    case MDOC_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void mdoc_string_free(char* str) { std::free(str); }

void mdoc_solver_options_init(mdoc_solver_options* options) {
  if (!options) return;
  options->lambda = 1.0;
  options->tau = 0.0;
  options->max_iters = 100;
  options->nt = 500;
  options->stop_residual = 1e-10;
}

mdoc_status mdoc_problem_lq(double a, double q, double s, double x0, double T,
                            mdoc_problem** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new mdoc_problem{mdoc::make_lq(a, q, s, x0, T)};
  });
}

mdoc_status mdoc_problem_quartic(double T, mdoc_problem** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new mdoc_problem{mdoc::make_quartic(T)};
  });
}

mdoc_status mdoc_problem_highdim(int d, uint64_t seed, mdoc_problem** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new mdoc_problem{mdoc::make_highdim(d, seed, mdoc::HighDimParams{})};
  });
}

mdoc_status mdoc_problem_set_box(mdoc_problem* problem, double lower, double upper) {
  return guarded([&] {
    require(problem, "null problem");
    const int m = problem->spec.control_dim;
    problem->spec.control_set = mdoc::ControlSet::box(mdoc::Vector::Constant(m, lower),
                                                      mdoc::Vector::Constant(m, upper));
  });
}

mdoc_status mdoc_problem_dims(const mdoc_problem* problem, int* state_dim, int* control_dim) {
  return guarded([&] {
    require(problem, "null problem");
    if (state_dim) *state_dim = problem->spec.state_dim;
    if (control_dim) *control_dim = problem->spec.control_dim;
  });
}

void mdoc_problem_free(mdoc_problem* problem) { delete problem; }

mdoc_status mdoc_mirror_quadratic(mdoc_mirror** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new mdoc_mirror{mdoc::MirrorMap::quadratic()};
  });
}

mdoc_status mdoc_mirror_quartic(double epsilon, mdoc_mirror** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new mdoc_mirror{mdoc::MirrorMap::quartic_augmented(epsilon)};
  });
}

void mdoc_mirror_free(mdoc_mirror* mirror) { delete mirror; }

mdoc_status mdoc_solve(const mdoc_problem* problem, const mdoc_mirror* mirror,
                       const mdoc_solver_options* options, const double* u0, size_t u0_len,
                       mdoc_report** out) {
  return guarded([&] {
    require(problem && mirror && options && u0 && out, "null argument");
    require(options->nt > 0, "nt must be positive");
    const int m = problem->spec.control_dim;
    const mdoc::TimeGrid grid(problem->spec.horizon, options->nt);
    const auto nodes = static_cast<size_t>(grid.node_count());
    require(u0_len == nodes * static_cast<size_t>(m), "u0 length must be (nt + 1) * m");

    mdoc::Matrix values(m, grid.node_count());
    for (size_t k = 0; k < nodes; ++k)
      for (int i = 0; i < m; ++i) values(i, static_cast<Eigen::Index>(k)) = u0[k * m + i];

    mdoc::SolverConfig config;
    config.lambda = options->lambda;
    config.tau = options->tau;
    config.max_iters = options->max_iters;
    config.grid = grid;
    config.stop_residual = options->stop_residual;
    auto report = mdoc::run(problem->spec, mirror->map, config,
                            mdoc::Trajectory(grid, std::move(values)));
    const std::string termination = mdoc::to_string(report.termination);
    *out = new mdoc_report{std::move(report), termination};
  });
}

mdoc_status mdoc_report_record_count(const mdoc_report* report, size_t* count) {
  return guarded([&] {
    require(report && count, "null argument");
    *count = report->report.records.size();
  });
}

mdoc_status mdoc_report_record(const mdoc_report* report, size_t index, mdoc_record* out) {
  return guarded([&] {
    require(report && out, "null argument");
    if (index >= report->report.records.size()) {
      throw mdoc::OutOfRange("record index out of range");
    }
    const auto& r = report->report.records[index];
    *out = mdoc_record{r.iter,     r.cost,
                       r.bregman_step, r.residual,
                       r.sup_control_change, r.descent_certificate,
                       r.admissibility_slack};
  });
}

mdoc_status mdoc_report_termination(const mdoc_report* report, const char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->termination.c_str();
  });
}

mdoc_status mdoc_report_final_control(const mdoc_report* report, double* out, size_t len) {
  return guarded([&] {
    require(report && out, "null argument");
    const auto& u = report->report.final_control;
    const auto m = static_cast<size_t>(u.width());
    require(len == m * static_cast<size_t>(u.size()), "output length must be (nt + 1) * m");
    for (Eigen::Index k = 0; k < u.size(); ++k)
      for (size_t i = 0; i < m; ++i)
        out[static_cast<size_t>(k) * m + i] = u.values()(static_cast<Eigen::Index>(i), k);
  });
}

mdoc_status mdoc_report_trace_csv(const mdoc_report* report, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = copy_string(mdoc::to_csv(mdoc::trace_table(report->report.records, std::nullopt)));
  });
}

void mdoc_report_free(mdoc_report* report) { delete report; }

mdoc_status mdoc_riccati_P(double a, double q, double s, double tau, double T, double t,
                           double* out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = mdoc::riccati_P(mdoc::make_riccati(a, q, s, tau, T), t);
  });
}

mdoc_status mdoc_run_experiment(const char* config_json, char** summary_json, int* passed) {
  return guarded([&] {
    require(config_json && summary_json, "null argument");
    const auto summary = mdoc::run_experiment(mdoc::config_from_json(config_json));
    *summary_json = copy_string(mdoc::summary_to_json(summary));
    if (passed) *passed = summary.passed() ? 1 : 0;
  });
}

}  // extern "C"
