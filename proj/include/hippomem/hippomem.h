// Copyright 2026 The hippomem Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIPPOMEM_HIPPOMEM_H_
#define HIPPOMEM_HIPPOMEM_H_

/*
 * C interface to the hippomem policy-memory library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an hm_status; on failure a one-line description is
 * available from hm_last_error() on the calling thread until the next call.
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with hm_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HM_BUILDING_LIBRARY)
#    define HM_API __declspec(dllexport)
#  else
#    define HM_API __declspec(dllimport)
#  endif
#else
#  define HM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hm_status {
  HM_OK = 0,
  HM_ERR_INVALID_ARGUMENT = 1,
  HM_ERR_DIMENSION_MISMATCH = 2,
  HM_ERR_UNKNOWN_ENV = 3,
  HM_ERR_UNKNOWN_SKILL = 4,
  HM_ERR_DUPLICATE_SKILL = 5,
  HM_ERR_CONFIG_INVALID = 6,
  HM_ERR_GRAPH_INVALID = 7,
  HM_ERR_NON_CONVERGENCE = 8,
  HM_ERR_NOT_POSITIVE_DEFINITE = 9,
  HM_ERR_NON_FINITE = 10,
  HM_ERR_EMPTY_INPUT = 11,
  HM_ERR_STORE_NOT_BUILT = 12,
  HM_ERR_STORE_STALE = 13,
  HM_ERR_VERSION_MISMATCH = 14,
  HM_ERR_CHECKSUM_MISMATCH = 15,
  HM_ERR_MALFORMED_STORE = 16,
  HM_ERR_IO = 17,
  HM_ERR_FIDELITY = 18,
  HM_ERR_CHECK_FAILED = 19,
  HM_ERR_EXECUTION_ABORTED = 20,
  HM_ERR_INTERNAL = 99
} hm_status;

typedef struct hm_config hm_config;
typedef struct hm_store hm_store;

/* Upper-case code such as "UNKNOWN_SKILL". Never NULL. */
HM_API const char* hm_status_name(hm_status status);
/* 1 for validation/config errors, 2 for runtime/fidelity failures, 0 for HM_OK. */
HM_API int hm_status_exit_code(hm_status status);
HM_API const char* hm_last_error(void);
HM_API const char* hm_version(void);
HM_API void hm_string_free(char* s);

/* JSON array describing every environment: id, dims, action bounds, dt. */
HM_API hm_status hm_env_list_json(char** out_json);

HM_API hm_status hm_config_load(const char* path, hm_config** out);
HM_API hm_status hm_config_set_seed(hm_config* config, uint64_t seed);
/* JSON array of the skill names the config defines. */
HM_API hm_status hm_config_skills_json(const hm_config* config, char** out_json);
HM_API void hm_config_free(hm_config* config);

HM_API hm_status hm_store_create(const hm_config* config, hm_store** out);
HM_API hm_status hm_store_load(const char* path, hm_store** out);
HM_API hm_status hm_store_save(const hm_store* store, const char* path);
HM_API void hm_store_free(hm_store* store);
/* HM_ERR_CONFIG_INVALID when the store's architecture differs from config's. */
HM_API hm_status hm_store_check_config(const hm_store* store, const hm_config* config);
HM_API hm_status hm_store_info_json(const hm_store* store, char** out_json);
HM_API hm_status hm_store_param_dim(const hm_store* store, size_t* out);
HM_API hm_status hm_store_latent_dim(const hm_store* store, size_t* out);
HM_API hm_status hm_store_rebuild_counter(const hm_store* store, uint64_t* out);

/*
 * Distills the named config skill and adds it to the store (which then
 * needs a memory rebuild). out_report_json receives the skill's metrics.
 */
HM_API hm_status hm_skill_train(const hm_config* config, hm_store* store, const char* name,
                                char** out_report_json);
/* Trains `count` skills on up to `jobs` threads; records are added in name order. */
HM_API hm_status hm_skill_train_many(const hm_config* config, hm_store* store,
                                     const char* const* names, size_t count, int jobs,
                                     char** out_report_json);

/*
 * Trains the autoencoder over every stored skill and re-encodes them.
 * Returns HM_ERR_FIDELITY (with the store still updated and the report
 * filled) when the epoch budget ran out above the fidelity target.
 */
HM_API hm_status hm_memory_build(hm_store* store, char** out_report_json);
/* HM_ERR_FIDELITY when any audit fails; the report lists every skill. */
HM_API hm_status hm_memory_verify(const hm_store* store, char** out_report_json);

/* Copies the stored skill vector (length hm_store_latent_dim). */
HM_API hm_status hm_skill_vector(const hm_store* store, const char* name, double* out, size_t n);
HM_API hm_status hm_encode(const hm_store* store, const double* params, size_t m, double* out,
                           size_t n);
HM_API hm_status hm_recall(const hm_store* store, const double* skill, size_t n, double* out,
                           size_t m);
/* a = policy(state | recall(skill)). */
HM_API hm_status hm_act(const hm_store* store, const double* skill, size_t n, const double* state,
                        size_t state_dim, double* action, size_t action_dim);
HM_API hm_status hm_skill_distance(const double* a, const double* b, size_t n, double* out);

/*
 * Runs the recalled policy of `name` closed-loop from reset(env, seed) and
 * writes the trajectory CSV to csv_path (may be NULL). target may be NULL
 * to keep the skill's own goal.
 */
HM_API hm_status hm_skill_recall(const hm_store* store, const char* name, const double* target,
                                 size_t target_len, uint64_t seed, const char* csv_path,
                                 char** out_report_json);
HM_API hm_status hm_skill_interp(const hm_store* store, const char* from, const char* to,
                                 double alpha, char** out_report_json);

/*
 * Validates and executes a task graph file, writing report.json and one CSV
 * per executed node into out_dir. HM_ERR_EXECUTION_ABORTED when a node did
 * not succeed (report still written).
 */
HM_API hm_status hm_graph_run(const hm_store* store, const char* graph_path, uint64_t seed,
                              const char* out_dir, char** out_report_json);
/* Validation only; HM_ERR_GRAPH_INVALID with the issue list in the report. */
HM_API hm_status hm_graph_validate(const hm_store* store, const char* graph_path,
                                   char** out_report_json);

HM_API hm_status hm_grad_check(uint64_t seed, int cases, char** out_report_json);
HM_API hm_status hm_riccati_check(uint64_t seed, int cases, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif  /* HIPPOMEM_HIPPOMEM_H_ */
