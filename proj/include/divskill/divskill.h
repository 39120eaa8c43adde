// Copyright 2026 The DivSkill Authors.
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


/* C interface to libdivskill.
 *
 * Every function returns a ds_status. On failure a message for the calling
 * thread is available from ds_last_error() until the next call on that
 * thread. Strings returned through `char**` out-parameters are owned by the
 * caller and released with ds_string_free(). Structured results are JSON
 * text. Handles are opaque and not thread-safe; distinct handles may be used
 * from distinct threads. */

#ifndef DIVSKILL_DIVSKILL_H_
#define DIVSKILL_DIVSKILL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DS_EXPORT __declspec(dllexport)
#else
#define DS_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
  DS_OK = 0,
  DS_ERR_INVALID_ARGUMENT = 1,
  DS_ERR_UNKNOWN_ID = 2,
  DS_ERR_EMPTY_RESIDUAL = 3,
  DS_ERR_BAD_K = 4,
  DS_ERR_MISSING_SELECTION = 5,
  DS_ERR_ALREADY_IN_SET = 6,
  DS_ERR_TOO_LARGE = 7,
  DS_ERR_TOO_FEW = 8,
  DS_ERR_PARSE = 9,
  DS_ERR_DUPLICATE_ID = 10,
  DS_ERR_CONFIG = 11,
  DS_ERR_EXECUTOR = 12,
  DS_ERR_OPTIMIZER = 13,
  DS_ERR_SCREEN_VIOLATION = 14,
  DS_ERR_NO_FAILURES = 15,
  DS_ERR_JUDGE = 16,
  DS_ERR_TRANSPORT = 17,
  DS_ERR_MALFORMED_TOOL_CALL = 18,
  DS_ERR_UNKNOWN_TOOL = 19,
  DS_ERR_IO = 20,
  DS_ERR_INTERNAL = 21
} ds_status;

typedef struct ds_context ds_context;
typedef struct ds_population ds_population;
typedef struct ds_outcome_matrix ds_outcome_matrix;

DS_EXPORT const char* ds_version(void);
DS_EXPORT const char* ds_status_name(ds_status status);
DS_EXPORT const char* ds_last_error(void);
DS_EXPORT void ds_string_free(char* s);

/* Context: process-level settings for the pipeline commands. */
DS_EXPORT ds_status ds_context_create(ds_context** out);
DS_EXPORT void ds_context_free(ds_context* ctx);
/* Caps internal parallelism of every command run through `ctx` (0 = use the
 * configuration value). */
DS_EXPORT ds_status ds_context_set_jobs(ds_context* ctx, int jobs);

/* Pipeline commands. `args_json` is an object whose fields mirror the CLI
 * flags of the command; the report is returned as JSON. */
DS_EXPORT ds_status ds_optimize(ds_context* ctx, const char* args_json, char** report_json);
DS_EXPORT ds_status ds_infer(ds_context* ctx, const char* args_json, char** report_json);
DS_EXPORT ds_status ds_evaluate(ds_context* ctx, const char* args_json, char** report_json);
DS_EXPORT ds_status ds_verify_greedy(ds_context* ctx, const char* args_json,
                                     char** report_json);
DS_EXPORT ds_status ds_analyze_trajectories(ds_context* ctx, const char* args_json,
                                            char** report_json);
DS_EXPORT ds_status ds_simulate(ds_context* ctx, const char* args_json, char** report_json);

/* Population matrix: p is row-major num_skills x num_instances with entries in
 * [0, 1]; weights may be NULL for uniform weights. */
DS_EXPORT ds_status ds_population_create(size_t num_skills, size_t num_instances,
                                         const double* p, const double* weights,
                                         ds_population** out);
DS_EXPORT void ds_population_free(ds_population* pop);
DS_EXPORT ds_status ds_population_objective(const ds_population* pop, const size_t* subset,
                                            size_t subset_len, double* out);
DS_EXPORT ds_status ds_population_marginal_gain(const ds_population* pop, size_t skill,
                                                const size_t* subset, size_t subset_len,
                                                double* out);
/* Writes k skill indices in selection order to `order`. */
DS_EXPORT ds_status ds_population_greedy(const ds_population* pop, size_t k, size_t* order,
                                         double* value);
/* `subset` must hold k entries; `subset_len` receives the optimum's size. */
DS_EXPORT ds_status ds_population_brute_force(const ds_population* pop, size_t k,
                                              size_t* subset, size_t* subset_len,
                                              double* value);
DS_EXPORT ds_status ds_population_check_guarantee(const ds_population* pop, size_t k,
                                                  char** report_json);

/* Pass@k. */
DS_EXPORT ds_status ds_pass_at_k_exact(size_t n, size_t failures, size_t k, int64_t* num,
                                       int64_t* den);
DS_EXPORT ds_status ds_pass_at_k(const int* successes, size_t n, size_t k, double* out);

/* Trajectories: actions are integer codes 0..9 in the order inspect_schema,
 * sample_rows, draft_sql, execute, repair, lookup_docs, get_pattern,
 * get_template, review, submit. */
DS_EXPORT ds_status ds_edit_distance(const int* a, size_t a_len, const int* b, size_t b_len,
                                     size_t* out);
DS_EXPORT ds_status ds_normalized_similarity(const int* a, size_t a_len, const int* b,
                                             size_t b_len, double* out);

/* Result tables as JSON {"columns": [...], "rows": [[...], ...]}; a blob
 * cell is {"blob_sha256": "<hex>"}. Default match policy. */
DS_EXPORT ds_status ds_fingerprint(const char* table_json, char** hex);
DS_EXPORT ds_status ds_results_match(const char* pred_json, const char* gold_json,
                                     int* match);
/* Result table JSON, or {"error": {"kind", "message"}} for a failed query. */
DS_EXPORT ds_status ds_execute_sql(const char* db_ref, const char* sql, double timeout_s,
                                   size_t max_rows, char** result_json);

/* Outcome matrix. */
DS_EXPORT ds_status ds_outcome_matrix_create(ds_outcome_matrix** out);
DS_EXPORT void ds_outcome_matrix_free(ds_outcome_matrix* m);
DS_EXPORT ds_status ds_outcome_matrix_register(ds_outcome_matrix* m, const char* skill_id,
                                               const char* instance_id);
DS_EXPORT ds_status ds_outcome_matrix_append(ds_outcome_matrix* m, const char* skill_id,
                                             const char* instance_id, int success);
/* JSON array of the ids in `instance_ids` on which every skill in
 * `skill_ids` failed. */
DS_EXPORT ds_status ds_outcome_matrix_residual(const ds_outcome_matrix* m,
                                               const char* const* instance_ids,
                                               size_t num_instances,
                                               const char* const* skill_ids,
                                               size_t num_skills, char** ids_json);
DS_EXPORT ds_status ds_outcome_matrix_to_jsonl(const ds_outcome_matrix* m, char** jsonl);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DIVSKILL_DIVSKILL_H_ */
