/*
 * Copyright 2026 The Netdesign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the netdesign solver.
 *
 * Every fallible call returns an nd_error. On failure a message is available
 * from nd_last_error() on the calling thread until the next failing call.
 * Handles are opaque; free them with the matching *_free function. Strings
 * returned by result accessors are owned by the result.
 */

#ifndef NETDESIGN_NETDESIGN_H_
#define NETDESIGN_NETDESIGN_H_

#include <stdint.h>

#if defined(NETDESIGN_BUILDING_LIBRARY)
#define ND_API __attribute__((visibility("default")))
#else
#define ND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nd_error {
  ND_OK = 0,
  ND_ERR_IO = 1,
  ND_ERR_PARSE = 2,
  ND_ERR_VALIDATION = 3,
  ND_ERR_INVALID_ARGUMENT = 4,
  ND_ERR_NUMERIC = 5,
  ND_ERR_INTERNAL = 6
} nd_error;

typedef struct nd_instance nd_instance;
typedef struct nd_result nd_result;

ND_API const char* nd_version(void);
ND_API const char* nd_last_error(void);
ND_API const char* nd_error_name(nd_error code);

/* ---- Instances ---- */

typedef struct nd_generator_params {
  int num_nodes;
  int num_periods;
  double link_density;
  int existing_network; /* 0: empty period-0 network */
  double demand_min, demand_max;
  double facility_open_min, facility_open_max;
  double facility_op_min, facility_op_max;
  double link_construct_min, link_construct_max; /* per unit length */
  double link_op_min, link_op_max;
  double routing_min, routing_max;
  double facility_budget_fraction;
  double link_budget_fraction;
} nd_generator_params;

ND_API void nd_generator_params_default(nd_generator_params* params);

ND_API nd_error nd_instance_generate(const nd_generator_params* params, uint64_t seed,
                                     nd_instance** out);
ND_API nd_error nd_instance_load(const char* path, nd_instance** out);
ND_API nd_error nd_instance_parse(const char* text, nd_instance** out);
ND_API nd_error nd_instance_save(const nd_instance* inst, const char* path);
/* Text form; release with nd_string_free. */
ND_API nd_error nd_instance_format(const nd_instance* inst, char** out);
ND_API void nd_string_free(char* s);
ND_API void nd_instance_free(nd_instance* inst);

ND_API int nd_instance_num_nodes(const nd_instance* inst);
ND_API int nd_instance_num_periods(const nd_instance* inst);
ND_API int nd_instance_num_links(const nd_instance* inst);
ND_API int nd_instance_has_empty_initial_network(const nd_instance* inst);

/* ---- Solving ---- */

typedef enum nd_mode {
  ND_MODE_MONOLITHIC = 0,
  ND_MODE_BENDERS_BC = 1,
  ND_MODE_BENDERS_ITERATIVE = 2
} nd_mode;

typedef enum nd_disaggregation {
  ND_DISAGG_NODE_TIME = 0,
  ND_DISAGG_NODE_ONLY = 1,
  ND_DISAGG_TIME_ONLY = 2,
  ND_DISAGG_SINGLE = 3
} nd_disaggregation;

typedef enum nd_cut_kind {
  ND_CUT_DEFAULT = -1,
  ND_CUT_NONA = 0,  /* sub-problem LP duals */
  ND_CUT_ANONE = 1, /* lambda-heavy */
  ND_CUT_ANTWO = 2  /* lambda-heavy and gamma-heavy */
} nd_cut_kind;

typedef enum nd_branching {
  ND_BRANCH_PSEUDOCOST = 0,
  ND_BRANCH_MOST_FRACTIONAL = 1
} nd_branching;

typedef enum nd_status {
  ND_STATUS_OPTIMAL = 0,
  ND_STATUS_FEASIBLE = 1,
  ND_STATUS_INFEASIBLE = 2,
  ND_STATUS_TIME_LIMIT = 3
} nd_status;

/* Toggles take -1 for the per-instance default, 0 or 1 otherwise. */
typedef struct nd_solve_options {
  nd_mode mode;
  nd_disaggregation disaggregation;
  int reformulation;
  int cover_cuts;
  nd_cut_kind warmstart_cuts;
  nd_cut_kind callback_cuts;
  int warm_start;
  double time_limit; /* seconds; <= 0 selects 50 N T */
  double rel_gap;
  long node_limit; /* 0: none */
  nd_branching branching;
  int fractional_cuts;
  int node_log; /* tree log on stderr */
  int export_model;
} nd_solve_options;

ND_API void nd_solve_options_default(nd_solve_options* options);

ND_API nd_error nd_solve(const nd_instance* inst, const nd_solve_options* options,
                         nd_result** out);
ND_API void nd_result_free(nd_result* result);

ND_API const char* nd_status_name(nd_status status);
ND_API const char* nd_mode_name(nd_mode mode);
ND_API const char* nd_disaggregation_name(nd_disaggregation d);
ND_API const char* nd_cut_kind_name(nd_cut_kind kind);

ND_API nd_status nd_result_status(const nd_result* r);
ND_API int nd_result_has_solution(const nd_result* r);
ND_API double nd_result_objective(const nd_result* r);
ND_API double nd_result_bound(const nd_result* r);
ND_API double nd_result_gap(const nd_result* r);
ND_API double nd_result_wall_time(const nd_result* r);
ND_API long nd_result_nodes(const nd_result* r);
ND_API long nd_result_lp_iterations(const nd_result* r);
ND_API long nd_result_optimality_cuts(const nd_result* r);
ND_API long nd_result_feasibility_cuts(const nd_result* r);
ND_API long nd_result_cover_cuts(const nd_result* r);
ND_API long nd_result_subproblems(const nd_result* r);
ND_API double nd_result_subproblem_time(const nd_result* r);
ND_API long nd_result_recovery_fallbacks(const nd_result* r);
ND_API int nd_result_outer_iterations(const nd_result* r);
ND_API double nd_result_root_lp_bound(const nd_result* r);

/* Configuration actually used, defaults resolved. */
ND_API nd_disaggregation nd_result_disaggregation(const nd_result* r);
ND_API int nd_result_reformulation(const nd_result* r);
ND_API int nd_result_cover_enabled(const nd_result* r);
ND_API nd_cut_kind nd_result_warmstart_cuts(const nd_result* r);
ND_API nd_cut_kind nd_result_callback_cuts(const nd_result* r);

ND_API int nd_result_warm_start_iterations(const nd_result* r);
ND_API double nd_result_warm_start_bound(const nd_result* r);
ND_API const char* nd_result_warm_start_termination(const nd_result* r);
/* CSV: iteration,bound,cuts_opt,cuts_feas,cuts_cover */
ND_API const char* nd_result_warm_start_csv(const nd_result* r);
ND_API const char* nd_result_cut_dump(const nd_result* r);
/* Empty unless export_model was set. */
ND_API const char* nd_result_model_lp(const nd_result* r);

/* Openness in period t (0..T); 0 without a solution. */
ND_API int nd_result_facility_open(const nd_result* r, int node, int t);
ND_API int nd_result_link_open(const nd_result* r, int link, int t);
/* Facilities and links built per period, one per line. */
ND_API const char* nd_result_solution_text(const nd_result* r);
/* Number of violated model constraints, -1 without a solution. */
ND_API int nd_result_check(const nd_result* r, const nd_instance* inst);

#ifdef __cplusplus
}
#endif

#endif /* NETDESIGN_NETDESIGN_H_ */
