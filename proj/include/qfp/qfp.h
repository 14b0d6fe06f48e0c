/**
 * Copyright 2026 The qfp-herald Authors
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

#ifndef QFP_QFP_H
#define QFP_QFP_H

#include <stddef.h>
#include <stdint.h>

/*
 * C interface of the qfp library. Objects are opaque handles released with the
 * matching *_free function. Every fallible call returns a qfp_status; on
 * failure the output arguments are left untouched and qfp_last_error() holds a
 * message for the calling thread. Strings returned through char** are owned by
 * the caller and released with qfp_string_free().
 */

#if defined(_WIN32)
#define QFP_API __declspec(dllexport)
#else
#define QFP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2, 3 and 4 double as the command-line exit codes. */
typedef enum qfp_status {
    QFP_OK = 0,
    QFP_ERR_INVALID_ARGUMENT = 1,
    QFP_ERR_CONFIG = 2,
    QFP_ERR_HERALD_IMPOSSIBLE = 3,
    QFP_ERR_INTERNAL = 4,
    QFP_ERR_NON_UNITARY = 5,
    QFP_ERR_TABLE_TOO_LARGE = 6,
    QFP_ERR_IO = 7
} qfp_status;

typedef enum qfp_state_kind {
    QFP_STATE_HERALDED = 0,
    QFP_STATE_TARGET = 1
} qfp_state_kind;

typedef struct qfp_tables qfp_tables;
typedef struct qfp_result qfp_result;

QFP_API const char* qfp_version(void);

/* Message of the last failed call on this thread; empty when none. */
QFP_API const char* qfp_last_error(void);

QFP_API const char* qfp_status_name(qfp_status status);

QFP_API void qfp_string_free(char* s);

/* Precomputed loop-hafnian tables for n_s photons on each of num_squeezed - 1 side bins. */
QFP_API qfp_status qfp_tables_create(int n_s, int num_squeezed, int n_c, qfp_tables** out);
QFP_API qfp_status qfp_tables_kappa(const qfp_tables* tables, int n_k, size_t* out);
QFP_API size_t qfp_tables_total_rows(const qfp_tables* tables);
QFP_API qfp_status qfp_tables_to_json(const qfp_tables* tables, char** out);
QFP_API void qfp_tables_free(qfp_tables* tables);

/*
 * Runs the optimizer described by a JSON run configuration. The seed comes from
 * `seed` when has_seed is nonzero, else from the configuration, else from OS
 * entropy; the one used is recorded in the result. threads > 0 and n_c > 0
 * override the configuration. A run that never found a valid design still
 * returns QFP_OK; check qfp_result_valid().
 */
QFP_API qfp_status qfp_design_run(const char* config_json, int has_seed, uint64_t seed, int threads, int n_c,
                                  qfp_result** out);

/*
 * Re-evaluates a stored design (a design result or a circuit document). `pick`
 * selects "cost" or "fidelity" from a design result and may be NULL.
 * n_c_probe <= the design cutoff selects cutoff + 10.
 */
QFP_API qfp_status qfp_evaluate(const char* document_json, const char* pick, int n_c_probe, qfp_result** out);

/* Reads the heralded state (and target, when named) from a result or evaluation document. */
QFP_API qfp_status qfp_result_from_json(const char* document_json, qfp_result** out);

QFP_API int qfp_result_valid(const qfp_result* result);
QFP_API double qfp_result_probability(const qfp_result* result);
QFP_API double qfp_result_fidelity(const qfp_result* result);
QFP_API double qfp_result_cost(const qfp_result* result);
QFP_API uint64_t qfp_result_seed(const qfp_result* result);

/* Output path named by the run configuration, or "" when none. Owned by the result. */
QFP_API const char* qfp_result_output_path(const qfp_result* result);

/* Zero when `which` names a state the result does not hold. */
QFP_API size_t qfp_result_num_coefficients(const qfp_result* result, qfp_state_kind which);
QFP_API qfp_status qfp_result_coefficient(const qfp_result* result, qfp_state_kind which, size_t n, double* re,
                                          double* im);

/* <q|state> at n points; re and im must hold n values each. */
QFP_API qfp_status qfp_result_wavefunction(const qfp_result* result, qfp_state_kind which, const double* q,
                                           size_t n, double* re, double* im);

QFP_API qfp_status qfp_result_to_json(const qfp_result* result, char** out);
QFP_API void qfp_result_free(qfp_result* result);

/*
 * Random three-bin circuits evaluated by the hafnian route and by brute-force
 * Fock evolution. The JSON report carries the largest deviations and "passed".
 */
QFP_API qfp_status qfp_oracle_check(int trials, uint64_t seed, char** report_json);

/* 64 bits from the operating system's entropy source. */
QFP_API uint64_t qfp_entropy_seed(void);

#ifdef __cplusplus
}
#endif

#endif
