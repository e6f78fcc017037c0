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

#ifndef MDOC_MDOC_H
#define MDOC_MDOC_H

/*
 * C interface to the mirror-descent optimal control solver.
 *
 * Every function returns an mdoc_status. On failure the message is available
 * from mdoc_last_error() on the calling thread until its next API call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with mdoc_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MDOC_BUILDING_LIBRARY)
#    define MDOC_API __declspec(dllexport)
#  else
#    define MDOC_API __declspec(dllimport)
#  endif
#else
#  define MDOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mdoc_status {
  MDOC_OK = 0,
  MDOC_INVALID_ARGUMENT = 1,
  MDOC_OUT_OF_RANGE = 2,
  MDOC_BLOWUP = 3,
  MDOC_PROX_FAILURE = 4,
  MDOC_IO = 5,
  MDOC_INTERNAL = 6
} mdoc_status;

typedef struct mdoc_problem mdoc_problem;
typedef struct mdoc_mirror mdoc_mirror;
typedef struct mdoc_report mdoc_report;

typedef struct mdoc_solver_options {
  double lambda;
  double tau;
  int max_iters;
  int nt;
  double stop_residual;
} mdoc_solver_options;

typedef struct mdoc_record {
  int iter;
  double cost;
  double bregman_step;
  double residual;
  double sup_control_change;
  double descent_certificate;
  double admissibility_slack;
} mdoc_record;

MDOC_API const char* mdoc_version(void);
MDOC_API const char* mdoc_last_error(void);
MDOC_API const char* mdoc_status_string(mdoc_status status);
MDOC_API void mdoc_string_free(char* str);

/* Defaults: lambda 1, tau 0, max_iters 100, nt 500, stop_residual 1e-10. */
MDOC_API void mdoc_solver_options_init(mdoc_solver_options* options);

/* Scalar LQ: x' = a x + u, running cost q x^2 / 2, terminal cost s x^2 / 2. */
MDOC_API mdoc_status mdoc_problem_lq(double a, double q, double s, double x0, double T,
                                     mdoc_problem** out);
/* x' = u, terminal cost x^4 / 4, x(0) = 0. */
MDOC_API mdoc_status mdoc_problem_quartic(double T, mdoc_problem** out);
/* Coupled sine system with random matrices drawn from `seed`. */
MDOC_API mdoc_status mdoc_problem_highdim(int d, uint64_t seed, mdoc_problem** out);
/* Replaces the control set by the box [lower, upper]^m. */
MDOC_API mdoc_status mdoc_problem_set_box(mdoc_problem* problem, double lower, double upper);
MDOC_API mdoc_status mdoc_problem_dims(const mdoc_problem* problem, int* state_dim,
                                       int* control_dim);
MDOC_API void mdoc_problem_free(mdoc_problem* problem);

MDOC_API mdoc_status mdoc_mirror_quadratic(mdoc_mirror** out);
MDOC_API mdoc_status mdoc_mirror_quartic(double epsilon, mdoc_mirror** out);
MDOC_API void mdoc_mirror_free(mdoc_mirror* mirror);

/*
 * Runs the solver from the initial control u0, given node by node:
 * u0[k * m + i] is component i at node k, for k = 0..nt.
 * u0_len must equal (nt + 1) * m.
 */
MDOC_API mdoc_status mdoc_solve(const mdoc_problem* problem, const mdoc_mirror* mirror,
                                const mdoc_solver_options* options, const double* u0,
                                size_t u0_len, mdoc_report** out);
MDOC_API mdoc_status mdoc_report_record_count(const mdoc_report* report, size_t* count);
MDOC_API mdoc_status mdoc_report_record(const mdoc_report* report, size_t index,
                                        mdoc_record* out);
/* "max_iters", "residual_met", "cost_delta_met" or "blowup"; owned by the report. */
MDOC_API mdoc_status mdoc_report_termination(const mdoc_report* report, const char** out);
/* Final control in the u0 layout; len must equal (nt + 1) * m. */
MDOC_API mdoc_status mdoc_report_final_control(const mdoc_report* report, double* out,
                                               size_t len);
MDOC_API mdoc_status mdoc_report_trace_csv(const mdoc_report* report, char** out);
MDOC_API void mdoc_report_free(mdoc_report* report);

/* Closed-form Riccati solution P(t) of the scalar LQ problem. */
MDOC_API mdoc_status mdoc_riccati_P(double a, double q, double s, double tau, double T,
                                    double t, double* out);

/*
 * Runs an experiment described by a JSON config and returns the JSON
 * summary. *passed is set to 1 when every check of the experiment passed.
 */
MDOC_API mdoc_status mdoc_run_experiment(const char* config_json, char** summary_json,
                                         int* passed);

#ifdef __cplusplus
}
#endif

#endif /* MDOC_MDOC_H */
